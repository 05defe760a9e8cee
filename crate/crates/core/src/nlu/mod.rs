//! Intent classification with parameter extraction.
//!
//! Every intent carries training phrases written as templates with typed
//! slots. An utterance is aligned against each template; the score is the
//! fraction of the template's anchor words that were found. The best
//! template wins if it clears the confidence threshold, otherwise the
//! utterance falls back.

mod template;
mod text;

use std::collections::{HashMap, HashSet};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scene::{Column, Relation, Row};
use template::{align, Domain, Element, Template};
pub use text::normalize;
use text::tokenize;

pub const NLU_SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_CONFIDENCE_THRESHOLD: f64 = 0.6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NluError {
    #[error("nlu config: {0}")]
    Schema(String),
    #[error("nlu config: duplicate intent {0}")]
    DuplicateIntent(String),
    #[error("nlu config: intent {intent} uses undeclared entity \"{entity}\"")]
    UndeclaredEntity { intent: String, entity: String },
    #[error("intent {intent} has no value for parameter {param}")]
    MissingParameter { intent: String, param: String },
    #[error("intent {0} has no static response")]
    NoStaticResponse(String),
}

/// The set of strings an entity slot may bind to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValueDomain {
    CatalogName,
    GridColumnToken,
    GridRowToken,
    RelativeRelationToken,
    ReferenceName,
    FreeText,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntityKind {
    pub name: String,
    pub domain: ValueDomain,
}

#[derive(Debug, Clone)]
pub struct IntentDef {
    pub name: String,
    pub fulfillment: bool,
    pub static_response: Option<String>,
    phrases: Vec<String>,
    templates: Vec<Template>,
    parameter_order: Vec<String>,
}

/// score, intent index, template index, bindings
type Candidate = (f64, usize, usize, Vec<(String, String)>);

impl IntentDef {
    pub fn phrases(&self) -> &[String] {
        &self.phrases
    }

    /// `(entity, param)` slots of training phrase `index`.
    pub fn phrase_slots(&self, index: usize) -> Vec<(String, String)> {
        self.templates[index]
            .slots()
            .map(|(e, p)| (e.to_string(), p.to_string()))
            .collect()
    }

    /// Instantiates phrase `index`, filling each slot through `fill(entity, param)`.
    pub fn instantiate_phrase(&self, index: usize, mut fill: impl FnMut(&str, &str) -> String) -> String {
        self.templates[index]
            .elements
            .iter()
            .map(|e| match e {
                Element::Anchor(w) => w.clone(),
                Element::Slot { entity, param } => fill(entity, param),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntentMatch {
    pub intent: String,
    pub params: IndexMap<String, String>,
    pub confidence: f64,
    /// Index of the winning training phrase; `None` for the fallback.
    pub matched_phrase: Option<usize>,
}

impl IntentMatch {
    pub fn fallback(name: &str) -> Self {
        Self {
            intent: name.to_string(),
            params: IndexMap::new(),
            confidence: 0.0,
            matched_phrase: None,
        }
    }

    pub fn is_fallback(&self) -> bool {
        self.matched_phrase.is_none()
    }
}

#[derive(Debug, Clone)]
pub struct NluConfig {
    intents: Vec<IntentDef>,
    entities: Vec<EntityKind>,
    fallback_intent: String,
    fallback_response: String,
    confidence_threshold: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct NluDocument {
    schema_version: u32,
    fallback_intent: String,
    fallback_response: String,
    #[serde(default = "default_threshold")]
    confidence_threshold: f64,
    #[serde(default)]
    entities: Vec<EntityKind>,
    #[serde(default)]
    intents: Vec<IntentDocument>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct IntentDocument {
    name: String,
    #[serde(default)]
    fulfillment: bool,
    response: Option<String>,
    /// Order in which extracted parameters are reported.
    #[serde(default)]
    parameters: Vec<String>,
    phrases: Vec<String>,
}

fn default_threshold() -> f64 {
    DEFAULT_CONFIDENCE_THRESHOLD
}

fn placeholders(template: &str) -> Result<Vec<&str>, String> {
    let mut names = Vec::new();
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        let after = &rest[open + 1..];
        let close = after
            .find('}')
            .ok_or_else(|| format!("unclosed placeholder in '{template}'"))?;
        names.push(after[..close].trim());
        rest = &after[close + 1..];
    }
    Ok(names)
}

impl NluConfig {
    /// Parses and validates a TOML config document.
    pub fn from_toml(document: &str) -> Result<Self, NluError> {
        let doc: NluDocument = toml::from_str(document).map_err(|e| NluError::Schema(e.to_string()))?;
        Self::from_document(doc)
    }

    fn from_document(doc: NluDocument) -> Result<Self, NluError> {
        if doc.schema_version != NLU_SCHEMA_VERSION {
            return Err(NluError::Schema(format!(
                "unsupported schema_version {} (expected {NLU_SCHEMA_VERSION})",
                doc.schema_version
            )));
        }
        if !(0.0..=1.0).contains(&doc.confidence_threshold) {
            return Err(NluError::Schema(format!(
                "confidence_threshold {} outside [0, 1]",
                doc.confidence_threshold
            )));
        }
        if doc.intents.is_empty() {
            return Err(NluError::Schema("at least one intent is required".into()));
        }
        let mut entity_names = HashSet::new();
        for e in &doc.entities {
            if e.name.is_empty() || !entity_names.insert(e.name.as_str()) {
                return Err(NluError::Schema(format!("entity '{}' is empty or duplicated", e.name)));
            }
        }

        let mut seen = HashSet::new();
        let mut intents = Vec::with_capacity(doc.intents.len());
        for it in doc.intents {
            if it.name.trim().is_empty() {
                return Err(NluError::Schema("intent with empty name".into()));
            }
            if !seen.insert(it.name.clone()) {
                return Err(NluError::DuplicateIntent(it.name));
            }
            if it.name == doc.fallback_intent {
                return Err(NluError::Schema(format!(
                    "fallback intent {} must not be configured as a regular intent",
                    it.name
                )));
            }
            if it.phrases.is_empty() {
                return Err(NluError::Schema(format!("intent {} has no training phrases", it.name)));
            }
            if !it.fulfillment && it.response.is_none() {
                return Err(NluError::Schema(format!(
                    "intent {} needs either fulfillment or a response",
                    it.name
                )));
            }
            let response_params = match &it.response {
                Some(r) => placeholders(r).map_err(|e| NluError::Schema(format!("intent {}: {e}", it.name)))?,
                None => Vec::new(),
            };

            let mut templates = Vec::with_capacity(it.phrases.len());
            for phrase in &it.phrases {
                let t = Template::parse(phrase).map_err(|e| NluError::Schema(format!("intent {}: {e}", it.name)))?;
                if t.anchor_count() == 0 {
                    return Err(NluError::Schema(format!(
                        "intent {}: phrase '{phrase}' has no literal words",
                        it.name
                    )));
                }
                let mut params = HashSet::new();
                for (entity, param) in t.slots() {
                    if !entity_names.contains(entity) {
                        return Err(NluError::UndeclaredEntity {
                            intent: it.name.clone(),
                            entity: entity.to_string(),
                        });
                    }
                    if !params.insert(param) {
                        return Err(NluError::Schema(format!(
                            "intent {}: parameter {param} appears twice in '{phrase}'",
                            it.name
                        )));
                    }
                    if !it.parameters.is_empty() && !it.parameters.iter().any(|p| p == param) {
                        return Err(NluError::Schema(format!(
                            "intent {}: parameter {param} is missing from the parameters list",
                            it.name
                        )));
                    }
                }
                if let Some(p) = response_params.iter().find(|p| !params.contains(*p)) {
                    return Err(NluError::Schema(format!(
                        "intent {}: response uses {{{p}}} which phrase '{phrase}' does not bind",
                        it.name
                    )));
                }
                templates.push(t);
            }
            intents.push(IntentDef {
                name: it.name,
                fulfillment: it.fulfillment,
                static_response: it.response,
                phrases: it.phrases,
                templates,
                parameter_order: it.parameters,
            });
        }

        Ok(Self {
            intents,
            entities: doc.entities,
            fallback_intent: doc.fallback_intent,
            fallback_response: doc.fallback_response,
            confidence_threshold: doc.confidence_threshold,
        })
    }

    pub fn intents(&self) -> &[IntentDef] {
        &self.intents
    }

    pub fn intent(&self, name: &str) -> Option<&IntentDef> {
        self.intents.iter().find(|i| i.name == name)
    }

    pub fn entities(&self) -> &[EntityKind] {
        &self.entities
    }

    pub fn entity(&self, name: &str) -> Option<&EntityKind> {
        self.entities.iter().find(|e| e.name == name)
    }

    pub fn fallback_intent(&self) -> &str {
        &self.fallback_intent
    }

    pub fn fallback_response(&self) -> &str {
        &self.fallback_response
    }

    pub fn confidence_threshold(&self) -> f64 {
        self.confidence_threshold
    }

    pub fn set_confidence_threshold(&mut self, threshold: f64) {
        self.confidence_threshold = threshold.clamp(0.0, 1.0);
    }

    /// Classifies `utterance`. Catalog-name slots only bind to
    /// `catalog_names` and reference-name slots only to `scene_refs`.
    /// Never fails: anything below the threshold is the fallback match.
    pub fn classify<C, R>(&self, catalog_names: &[C], scene_refs: &[R], utterance: &str) -> IntentMatch
    where
        C: AsRef<str>,
        R: AsRef<str>,
    {
        let tokens = tokenize(utterance);
        let catalog = Domain::vocabulary(catalog_names.iter().map(AsRef::as_ref));
        let refs = Domain::vocabulary(scene_refs.iter().map(AsRef::as_ref));
        let columns = Domain::vocabulary(Column::ALL.map(Column::as_str));
        let rows = Domain::vocabulary(Row::ALL.map(Row::as_str));
        let relations = Domain::vocabulary(Relation::ALL.map(Relation::as_str));
        let free = Domain::FreeText;
        let domains: HashMap<&str, &Domain> = self
            .entities
            .iter()
            .map(|e| {
                let d = match e.domain {
                    ValueDomain::CatalogName => &catalog,
                    ValueDomain::GridColumnToken => &columns,
                    ValueDomain::GridRowToken => &rows,
                    ValueDomain::RelativeRelationToken => &relations,
                    ValueDomain::ReferenceName => &refs,
                    ValueDomain::FreeText => &free,
                };
                (e.name.as_str(), d)
            })
            .collect();

        let mut best: Option<Candidate> = None;
        for (ii, intent) in self.intents.iter().enumerate() {
            for (pi, t) in intent.templates.iter().enumerate() {
                let Some(a) = align(t, &tokens, &domains) else {
                    continue;
                };
                let score = a.anchors as f64 / t.anchor_count() as f64;
                if best.as_ref().is_none_or(|(s, ..)| score > *s) {
                    best = Some((score, ii, pi, a.bindings));
                }
            }
        }

        match best {
            Some((score, ii, pi, bindings)) if score >= self.confidence_threshold && score > 0.0 => {
                let intent = &self.intents[ii];
                let mut params: IndexMap<String, String> = bindings.into_iter().collect();
                if !intent.parameter_order.is_empty() {
                    let order = &intent.parameter_order;
                    params.sort_by_cached_key(|k, _| order.iter().position(|p| p == k));
                }
                IntentMatch {
                    intent: intent.name.clone(),
                    params,
                    confidence: score,
                    matched_phrase: Some(pi),
                }
            }
            _ => IntentMatch::fallback(&self.fallback_intent),
        }
    }
}

/// Fills the static response of a non-fulfillment intent with the matched
/// parameter values.
pub fn render_static_response(intent: &IntentDef, matched: &IntentMatch) -> Result<String, NluError> {
    let template = intent
        .static_response
        .as_deref()
        .filter(|_| !intent.fulfillment)
        .ok_or_else(|| NluError::NoStaticResponse(intent.name.clone()))?;
    let mut out = String::with_capacity(template.len());
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let after = &rest[open + 1..];
        let Some(close) = after.find('}') else {
            out.push_str(&rest[open..]);
            return Ok(out);
        };
        let name = after[..close].trim();
        let value = matched.params.get(name).ok_or_else(|| NluError::MissingParameter {
            intent: intent.name.clone(),
            param: name.to_string(),
        })?;
        out.push_str(value);
        rest = &after[close + 1..];
    }
    out.push_str(rest);
    Ok(out)
}
