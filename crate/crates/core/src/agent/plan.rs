//! Plans: a triggering belief-addition pattern, a guard and a body.
//!
//! Guards are conjunctions of conditions, solved left to right with
//! backtracking:
//!
//! * `.member(Pattern, List)`: some element of `List` unifies with `Pattern`
//! * `.one_of(Value, [..])`: `Value` unifies with one of the options
//! * `literal(..)`: some belief in the belief base unifies with it
//! * `not <condition>`: the condition has no solution
//!
//! Bodies run scene actions (`scene_add(Obj, X, Y)`, `scene_remove(Ref)`,
//! `scene_list`) and end with exactly one `reply("…")`. After a scene action
//! the variable `Result` holds its payload; reply templates may use any
//! bound variable as `{Var}`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Deserialize;
use thiserror::Error;

use super::term::{parse_literal, Belief, Literal, ParseError, Pattern, Term};

pub const PLANS_SCHEMA_VERSION: u32 = 1;
/// Variable bound to the payload of the latest scene action.
pub const RESULT_VAR: &str = "Result";

pub type Bindings = BTreeMap<String, Term>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanError {
    #[error("plans: {0}")]
    Schema(String),
    #[error("plan {plan}: cannot parse '{text}': {source}")]
    Syntax {
        plan: String,
        text: String,
        source: ParseError,
    },
    #[error("plan {plan}: {message}")]
    Invalid { plan: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Condition {
    Member { item: Pattern, list: Pattern },
    OneOf { value: Pattern, options: Pattern },
    Query(Literal),
    Not(Box<Condition>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Operand {
    Var(String),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Action {
    SceneAdd {
        obj_name: Operand,
        pos_x: Operand,
        pos_y: Operand,
    },
    SceneRemove(Operand),
    SceneList,
    Reply(String),
}

impl Action {
    pub fn is_scene_action(&self) -> bool {
        !matches!(self, Action::Reply(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plan {
    pub name: String,
    pub(crate) trigger: Literal,
    pub(crate) guard: Vec<Condition>,
    pub body: Vec<Action>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlansDocument {
    schema_version: u32,
    plans: Vec<PlanDocument>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanDocument {
    name: String,
    trigger: String,
    #[serde(default)]
    guard: Vec<String>,
    body: Vec<String>,
}

/// Parses a TOML plan-definition document, keeping declaration order.
pub fn parse_plan_library(document: &str) -> Result<Vec<Plan>, PlanError> {
    let doc: PlansDocument = toml::from_str(document).map_err(|e| PlanError::Schema(e.to_string()))?;
    if doc.schema_version != PLANS_SCHEMA_VERSION {
        return Err(PlanError::Schema(format!(
            "unsupported schema_version {} (expected {PLANS_SCHEMA_VERSION})",
            doc.schema_version
        )));
    }
    let mut names = BTreeSet::new();
    let mut plans = Vec::with_capacity(doc.plans.len());
    for p in doc.plans {
        if !names.insert(p.name.clone()) {
            return Err(PlanError::Schema(format!("duplicate plan {}", p.name)));
        }
        let guard: Vec<&str> = p.guard.iter().map(String::as_str).collect();
        let body: Vec<&str> = p.body.iter().map(String::as_str).collect();
        plans.push(Plan::parse(&p.name, &p.trigger, &guard, &body)?);
    }
    Ok(plans)
}

impl Plan {
    pub fn parse(name: &str, trigger: &str, guard: &[&str], body: &[&str]) -> Result<Self, PlanError> {
        let syntax = |text: &str, source: ParseError| PlanError::Syntax {
            plan: name.to_string(),
            text: text.to_string(),
            source,
        };
        let invalid = |message: String| PlanError::Invalid {
            plan: name.to_string(),
            message,
        };

        let event = trigger
            .trim()
            .strip_prefix('+')
            .ok_or_else(|| invalid(format!("trigger '{trigger}' must be a belief addition '+…'")))?;
        let trigger_lit = parse_literal(event).map_err(|e| syntax(trigger, e))?;

        let guard = guard
            .iter()
            .map(|g| parse_condition(g).map_err(|e| match e {
                CondError::Parse(p) => syntax(g, p),
                CondError::Shape(m) => invalid(m),
            }))
            .collect::<Result<Vec<_>, _>>()?;

        let body = body
            .iter()
            .map(|a| parse_action(a).map_err(|e| match e {
                CondError::Parse(p) => syntax(a, p),
                CondError::Shape(m) => invalid(m),
            }))
            .collect::<Result<Vec<_>, _>>()?;

        let plan = Plan {
            name: name.to_string(),
            trigger: trigger_lit,
            guard,
            body,
        };
        plan.check_bindings().map_err(invalid)?;
        Ok(plan)
    }

    /// Every body variable must be bound by the trigger, a positive guard
    /// condition or (for `Result`) an earlier scene action; the body must
    /// end with its only reply.
    fn check_bindings(&self) -> Result<(), String> {
        let mut bound: BTreeSet<String> = self.trigger.vars().into_iter().collect();
        for c in &self.guard {
            c.binds(&mut bound);
        }
        let replies = self.body.iter().filter(|a| !a.is_scene_action()).count();
        if replies != 1 || self.body.last().is_some_and(Action::is_scene_action) {
            return Err("the body must end with exactly one reply".into());
        }
        for action in &self.body {
            let used: Vec<String> = match action {
                Action::SceneAdd { obj_name, pos_x, pos_y } => [obj_name, pos_x, pos_y]
                    .into_iter()
                    .filter_map(Operand::var)
                    .collect(),
                Action::SceneRemove(r) => r.var().into_iter().collect(),
                Action::SceneList => Vec::new(),
                Action::Reply(t) => template_vars(t)?,
            };
            if let Some(v) = used.iter().find(|v| !bound.contains(*v)) {
                return Err(format!("variable {v} is used before it is bound"));
            }
            if action.is_scene_action() {
                bound.insert(RESULT_VAR.to_string());
            }
        }
        Ok(())
    }

    /// Intent named by a `request(_, _, "Intent", _, _)` trigger.
    pub fn triggering_intent(&self) -> Option<&str> {
        match (self.trigger.functor.as_str(), self.trigger.args.get(2)) {
            ("request", Some(Pattern::Str(intent))) if self.trigger.args.len() == 5 => Some(intent),
            _ => None,
        }
    }

    /// Unifies the trigger with `event` and solves the guard.
    pub(crate) fn applies(&self, event: &Belief, beliefs: &[&Belief]) -> Option<Bindings> {
        let b = unify_literal(&self.trigger, event, Bindings::new())?;
        solve(&self.guard, beliefs, b)
    }
}

impl Operand {
    fn var(&self) -> Option<String> {
        match self {
            Operand::Var(v) => Some(v.clone()),
            Operand::Text(_) => None,
        }
    }

    pub(crate) fn resolve(&self, b: &Bindings) -> Option<String> {
        match self {
            Operand::Var(v) => b.get(v).map(Term::as_text),
            Operand::Text(t) => Some(t.clone()),
        }
    }
}

impl Condition {
    fn binds(&self, out: &mut BTreeSet<String>) {
        let mut vars = Vec::new();
        match self {
            Condition::Member { item, list } => {
                item.vars(&mut vars);
                list.vars(&mut vars);
            }
            Condition::OneOf { value, .. } => value.vars(&mut vars),
            Condition::Query(l) => vars = l.vars(),
            Condition::Not(_) => {}
        }
        out.extend(vars);
    }
}

enum CondError {
    Parse(ParseError),
    Shape(String),
}

impl From<ParseError> for CondError {
    fn from(e: ParseError) -> Self {
        CondError::Parse(e)
    }
}

fn parse_condition(text: &str) -> Result<Condition, CondError> {
    let text = text.trim();
    if let Some(rest) = text.strip_prefix("not ") {
        return Ok(Condition::Not(Box::new(parse_condition(rest)?)));
    }
    let Some(internal) = text.strip_prefix('.') else {
        return Ok(Condition::Query(parse_literal(text)?));
    };
    let lit = parse_literal(internal)?;
    let mut args = lit.args.into_iter();
    match (lit.functor.as_str(), args.next(), args.next(), args.next()) {
        ("member", Some(item), Some(list), None) => Ok(Condition::Member { item, list }),
        ("one_of", Some(value), Some(options), None) => Ok(Condition::OneOf { value, options }),
        (f, ..) => Err(CondError::Shape(format!(
            "unknown internal action .{f} (expected .member/2 or .one_of/2)"
        ))),
    }
}

fn operand(p: Pattern) -> Result<Operand, CondError> {
    match p {
        Pattern::Var(Some(v)) => Ok(Operand::Var(v)),
        Pattern::Str(s) => Ok(Operand::Text(s)),
        other => Err(CondError::Shape(format!(
            "action arguments must be variables or strings, got {other:?}"
        ))),
    }
}

fn parse_action(text: &str) -> Result<Action, CondError> {
    let lit = parse_literal(text.trim())?;
    let mut args = lit.args.into_iter();
    let action = match (lit.functor.as_str(), args.len()) {
        ("scene_add", 3) => Action::SceneAdd {
            obj_name: operand(args.next().unwrap())?,
            pos_x: operand(args.next().unwrap())?,
            pos_y: operand(args.next().unwrap())?,
        },
        ("scene_remove", 1) => Action::SceneRemove(operand(args.next().unwrap())?),
        ("scene_list", 0) => Action::SceneList,
        ("reply", 1) => match args.next().unwrap() {
            Pattern::Str(t) => {
                template_vars(&t).map_err(CondError::Shape)?;
                Action::Reply(t)
            }
            _ => return Err(CondError::Shape("reply takes a string template".into())),
        },
        (f, n) => return Err(CondError::Shape(format!("unknown action {f}/{n}"))),
    };
    Ok(action)
}

fn template_vars(template: &str) -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        let after = &rest[open + 1..];
        let close = after
            .find('}')
            .ok_or_else(|| format!("unclosed placeholder in reply '{template}'"))?;
        out.push(after[..close].trim().to_string());
        rest = &after[close + 1..];
    }
    Ok(out)
}

pub(crate) fn fill_template(template: &str, b: &Bindings) -> String {
    let mut out = String::with_capacity(template.len());
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let after = &rest[open + 1..];
        let Some(close) = after.find('}') else { break };
        let name = after[..close].trim();
        match b.get(name) {
            Some(t) => out.push_str(&t.as_text()),
            None => out.push_str(&rest[open..open + close + 2]),
        }
        rest = &after[close + 1..];
    }
    out.push_str(rest);
    out
}

fn unify(p: &Pattern, t: &Term, mut b: Bindings) -> Option<Bindings> {
    match (p, t) {
        (Pattern::Var(None), _) => Some(b),
        (Pattern::Var(Some(v)), _) => match b.get(v) {
            Some(bound) => (bound == t).then_some(b),
            None => {
                b.insert(v.clone(), t.clone());
                Some(b)
            }
        },
        (Pattern::Atom(a), Term::Atom(x)) | (Pattern::Str(a), Term::Str(x)) => (a == x).then_some(b),
        (Pattern::List(ps), Term::List(ts)) if ps.len() == ts.len() => {
            ps.iter().zip(ts).try_fold(b, |b, (p, t)| unify(p, t, b))
        }
        (Pattern::Param(pn, pv), Term::Param(n, v)) => {
            let b = unify(pn, &Term::Str(n.clone()), b)?;
            unify(pv, &Term::Str(v.clone()), b)
        }
        _ => None,
    }
}

fn unify_literal(l: &Literal, belief: &Belief, b: Bindings) -> Option<Bindings> {
    if l.functor != belief.functor || l.args.len() != belief.args.len() {
        return None;
    }
    l.args.iter().zip(&belief.args).try_fold(b, |b, (p, t)| unify(p, t, b))
}

/// Ground value of `p` under `b`, if every variable in it is bound.
fn resolve(p: &Pattern, b: &Bindings) -> Option<Term> {
    Some(match p {
        Pattern::Var(Some(v)) => b.get(v)?.clone(),
        Pattern::Var(None) => return None,
        Pattern::Atom(a) => Term::Atom(a.clone()),
        Pattern::Str(s) => Term::Str(s.clone()),
        Pattern::List(items) => Term::List(items.iter().map(|p| resolve(p, b)).collect::<Option<_>>()?),
        Pattern::Param(n, v) => match (resolve(n, b)?, resolve(v, b)?) {
            (Term::Str(n), Term::Str(v)) => Term::Param(n, v),
            _ => return None,
        },
    })
}

fn solve(conds: &[Condition], beliefs: &[&Belief], b: Bindings) -> Option<Bindings> {
    let Some((first, rest)) = conds.split_first() else {
        return Some(b);
    };
    match first {
        Condition::Member { item, list: candidates } | Condition::OneOf { value: item, options: candidates } => {
            let Some(Term::List(elems)) = resolve(candidates, &b) else {
                return None;
            };
            elems
                .iter()
                .find_map(|e| unify(item, e, b.clone()).and_then(|b2| solve(rest, beliefs, b2)))
        }
        Condition::Query(lit) => beliefs
            .iter()
            .find_map(|bel| unify_literal(lit, bel, b.clone()).and_then(|b2| solve(rest, beliefs, b2))),
        Condition::Not(inner) => {
            if solve(std::slice::from_ref(inner.as_ref()), beliefs, b.clone()).is_some() {
                None
            } else {
                solve(rest, beliefs, b)
            }
        }
    }
}
