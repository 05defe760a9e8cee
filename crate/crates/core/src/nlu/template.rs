//! Training-phrase templates and their alignment against utterances.
//!
//! A template such as `add a {object:objName} in {row:posY}` is a sequence
//! of anchor words and typed slots. Matching finds the alignment that binds
//! every slot (in order, to a span drawn from the slot's value domain) while
//! hitting as many anchors as possible; utterance words outside the
//! alignment are ignored. Among equally good alignments, longer slot spans
//! win, earlier slots first.

use std::collections::HashMap;

use super::text::{tokenize, Token};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Element {
    Anchor(String),
    Slot { entity: String, param: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Template {
    pub elements: Vec<Element>,
}

impl Template {
    pub fn parse(phrase: &str) -> Result<Self, String> {
        let mut elements = Vec::new();
        let mut rest = phrase;
        while let Some(open) = rest.find('{') {
            push_anchors(&mut elements, &rest[..open]);
            let after = &rest[open + 1..];
            let close = after
                .find('}')
                .ok_or_else(|| format!("unclosed slot in phrase '{phrase}'"))?;
            let body = &after[..close];
            let (entity, param) = body
                .split_once(':')
                .ok_or_else(|| format!("slot '{{{body}}}' must be written {{entity:param}}"))?;
            let (entity, param) = (entity.trim(), param.trim());
            if entity.is_empty() || param.is_empty() || body.contains('{') {
                return Err(format!("malformed slot '{{{body}}}' in phrase '{phrase}'"));
            }
            elements.push(Element::Slot {
                entity: entity.to_string(),
                param: param.to_string(),
            });
            rest = &after[close + 1..];
        }
        if rest.contains('}') {
            return Err(format!("stray '}}' in phrase '{phrase}'"));
        }
        push_anchors(&mut elements, rest);
        Ok(Self { elements })
    }

    pub fn anchor_count(&self) -> usize {
        self.elements
            .iter()
            .filter(|e| matches!(e, Element::Anchor(_)))
            .count()
    }

    pub fn slots(&self) -> impl Iterator<Item = (&str, &str)> {
        self.elements.iter().filter_map(|e| match e {
            Element::Slot { entity, param } => Some((entity.as_str(), param.as_str())),
            Element::Anchor(_) => None,
        })
    }
}

fn push_anchors(elements: &mut Vec<Element>, text: &str) {
    elements.extend(tokenize(text).into_iter().map(|t| Element::Anchor(t.norm)));
}

/// Values a slot may bind to, as normalized word sequences paired with the
/// string reported in the match.
#[derive(Debug, Clone)]
pub(crate) enum Domain {
    Vocabulary(Vec<(Vec<String>, String)>),
    FreeText,
}

impl Domain {
    pub fn vocabulary<'a>(values: impl IntoIterator<Item = &'a str>) -> Self {
        Domain::Vocabulary(
            values
                .into_iter()
                .map(|v| (tokenize(v).into_iter().map(|t| t.norm).collect::<Vec<_>>(), v.to_string()))
                .filter(|(words, _)| !words.is_empty())
                .collect(),
        )
    }

    /// Spans starting at `start`, longest first, as `(length, value)`.
    fn candidates(&self, tokens: &[Token], start: usize) -> Vec<(usize, String)> {
        let rest = &tokens[start..];
        match self {
            Domain::Vocabulary(values) => {
                let mut found: Vec<(usize, String)> = values
                    .iter()
                    .filter(|(words, _)| {
                        words.len() <= rest.len() && words.iter().zip(rest).all(|(w, t)| *w == t.norm)
                    })
                    .map(|(words, value)| (words.len(), value.clone()))
                    .collect();
                // stable: equal lengths keep vocabulary order
                found.sort_by_key(|f| std::cmp::Reverse(f.0));
                found.dedup_by(|a, b| a.0 == b.0);
                found
            }
            Domain::FreeText => (1..=rest.len())
                .rev()
                .map(|len| {
                    let words: Vec<&str> = rest[..len].iter().map(|t| t.raw.as_str()).collect();
                    (len, words.join(" "))
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Alignment {
    pub anchors: usize,
    spans: Vec<usize>,
    pub bindings: Vec<(String, String)>,
}

impl Alignment {
    fn better_than(&self, other: &Alignment) -> bool {
        (self.anchors, &self.spans) > (other.anchors, &other.spans)
    }
}

/// Best alignment of `template` against `tokens`, or `None` when some slot
/// cannot be bound. `domains` maps entity names to their value domains.
pub(crate) fn align(
    template: &Template,
    tokens: &[Token],
    domains: &HashMap<&str, &Domain>,
) -> Option<Alignment> {
    let mut memo = HashMap::new();
    best_from(template, tokens, domains, 0, 0, &mut memo)
}

fn best_from(
    template: &Template,
    tokens: &[Token],
    domains: &HashMap<&str, &Domain>,
    elem: usize,
    pos: usize,
    memo: &mut HashMap<(usize, usize), Option<Alignment>>,
) -> Option<Alignment> {
    if elem == template.elements.len() {
        return Some(Alignment {
            anchors: 0,
            spans: Vec::new(),
            bindings: Vec::new(),
        });
    }
    if let Some(hit) = memo.get(&(elem, pos)) {
        return hit.clone();
    }

    let mut best: Option<Alignment> = None;
    let mut consider = |candidate: Alignment| {
        if best.as_ref().is_none_or(|b| candidate.better_than(b)) {
            best = Some(candidate);
        }
    };

    match &template.elements[elem] {
        Element::Anchor(word) => {
            for j in pos..tokens.len() {
                if tokens[j].norm == *word {
                    if let Some(mut rest) = best_from(template, tokens, domains, elem + 1, j + 1, memo) {
                        rest.anchors += 1;
                        consider(rest);
                    }
                }
            }
            if let Some(rest) = best_from(template, tokens, domains, elem + 1, pos, memo) {
                consider(rest);
            }
        }
        Element::Slot { entity, param } => {
            let domain = domains.get(entity.as_str())?;
            for j in pos..tokens.len() {
                for (len, value) in domain.candidates(tokens, j) {
                    if let Some(mut rest) = best_from(template, tokens, domains, elem + 1, j + len, memo) {
                        rest.spans.insert(0, len);
                        rest.bindings.insert(0, (param.clone(), value));
                        consider(rest);
                    }
                }
            }
        }
    }

    memo.insert((elem, pos), best.clone());
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn domains<'a>(pairs: &'a [(&'a str, Domain)]) -> HashMap<&'a str, &'a Domain> {
        pairs.iter().map(|(k, v)| (*k, v)).collect()
    }

    #[test]
    fn parses_slots_and_anchors() {
        let t = Template::parse("Add a {object:objName} in {row:posY}!").unwrap();
        assert_eq!(t.anchor_count(), 3);
        assert_eq!(t.slots().collect::<Vec<_>>(), [("object", "objName"), ("row", "posY")]);
        assert!(Template::parse("add {object").is_err());
        assert!(Template::parse("add {object}").is_err());
        assert!(Template::parse("add object}").is_err());
    }

    #[test]
    fn greedy_longest_vocabulary() {
        let t = Template::parse("add a {object:objName}").unwrap();
        let d = [("object", Domain::vocabulary(["Yaskawa", "Yaskawa MA2010"]))];
        let a = align(&t, &tokenize("add a yaskawa ma2010"), &domains(&d)).unwrap();
        assert_eq!(a.anchors, 2);
        assert_eq!(a.bindings, [("objName".to_string(), "Yaskawa MA2010".to_string())]);
    }

    #[test]
    fn missing_anchor_lowers_count() {
        let t = Template::parse("add a {object:objName} please").unwrap();
        let d = [("object", Domain::vocabulary(["Pallet"]))];
        let a = align(&t, &tokenize("add pallet"), &domains(&d)).unwrap();
        assert_eq!(a.anchors, 1);
    }

    #[test]
    fn unbindable_slot_fails() {
        let t = Template::parse("remove {ref:objName}").unwrap();
        let d = [("ref", Domain::vocabulary(["Pallet"]))];
        assert!(align(&t, &tokenize("remove the robot"), &domains(&d)).is_none());
    }

    #[test]
    fn free_text_keeps_casing() {
        let t = Template::parse("my name is {person:name}").unwrap();
        let d = [("person", Domain::FreeText)];
        let a = align(&t, &tokenize("Hello! My name is Bob"), &domains(&d)).unwrap();
        assert_eq!(a.anchors, 3);
        assert_eq!(a.bindings, [("name".to_string(), "Bob".to_string())]);
    }
}
