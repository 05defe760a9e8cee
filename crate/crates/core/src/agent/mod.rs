//! A belief/plan agent: adding a belief queues an event, and each reasoning
//! step reacts to one event with the first applicable plan.

mod plan;
mod term;

use std::collections::VecDeque;

use indexmap::IndexMap;

use crate::protocol::{SceneClient, SceneCommandRequest, SceneCommandResponse};
pub use plan::{parse_plan_library, Action, Bindings, Operand, Plan, PlanError, PLANS_SCHEMA_VERSION, RESULT_VAR};
pub use term::{parse_belief, render_belief, Belief, ParseError, Term};

/// Tail argument of request beliefs; reserved, always `none`.
pub const REQUEST_EXTRA: &str = "none";

/// The `request(Source, Session, Intent, [param(..), ..], Extra)` belief
/// through which chat intents reach the agent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RequestBelief {
    pub source: String,
    pub session_id: String,
    pub intent_name: String,
    pub params: Vec<(String, String)>,
    pub extra: Term,
}

impl RequestBelief {
    /// Later duplicates of a parameter name are dropped.
    pub fn new(
        source: &str,
        session_id: &str,
        intent_name: &str,
        params: impl IntoIterator<Item = (String, String)>,
    ) -> Self {
        let mut unique: IndexMap<String, String> = IndexMap::new();
        for (k, v) in params {
            unique.entry(k).or_insert(v);
        }
        Self {
            source: source.to_string(),
            session_id: session_id.to_string(),
            intent_name: intent_name.to_string(),
            params: unique.into_iter().collect(),
            extra: Term::atom(REQUEST_EXTRA),
        }
    }

    pub fn to_belief(&self) -> Belief {
        Belief::new(
            "request",
            vec![
                Term::str(&self.source),
                Term::str(&self.session_id),
                Term::str(&self.intent_name),
                Term::List(
                    self.params
                        .iter()
                        .map(|(k, v)| Term::Param(k.clone(), v.clone()))
                        .collect(),
                ),
                self.extra.clone(),
            ],
        )
    }

    pub fn from_belief(b: &Belief) -> Option<Self> {
        let [Term::Str(source), Term::Str(session_id), Term::Str(intent_name), Term::List(items), extra] =
            b.args.as_slice()
        else {
            return None;
        };
        if b.functor != "request" {
            return None;
        }
        let mut params = Vec::with_capacity(items.len());
        for item in items {
            let Term::Param(k, v) = item else { return None };
            if params.iter().any(|(name, _): &(String, String)| name == k) {
                return None;
            }
            params.push((k.clone(), v.clone()));
        }
        Some(Self {
            source: source.clone(),
            session_id: session_id.clone(),
            intent_name: intent_name.clone(),
            params,
            extra: extra.clone(),
        })
    }
}

/// What one reasoning step did.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepOutcome {
    pub event: Belief,
    pub plan: Option<String>,
    pub replies: Vec<String>,
    /// Set when no plan applied to a request or a scene action failed.
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentReply {
    pub text: String,
    pub ok: bool,
    pub plan: Option<String>,
}

#[derive(Debug, Clone, Default)]
pub struct AgentState {
    beliefs: IndexMap<String, Belief>,
    plans: Vec<Plan>,
    queue: VecDeque<Belief>,
}

impl AgentState {
    pub fn new(plans: Vec<Plan>) -> Self {
        Self {
            plans,
            ..Default::default()
        }
    }

    pub fn plans(&self) -> &[Plan] {
        &self.plans
    }

    pub fn beliefs(&self) -> impl Iterator<Item = &Belief> {
        self.beliefs.values()
    }

    pub fn pending_events(&self) -> usize {
        self.queue.len()
    }

    /// Adds `belief` and queues its addition event. Returns false, queuing
    /// nothing, when an identical belief is already held.
    pub fn assert_belief(&mut self, belief: Belief) -> bool {
        let key = belief.to_string();
        if self.beliefs.contains_key(&key) {
            return false;
        }
        self.beliefs.insert(key, belief.clone());
        self.queue.push_back(belief);
        true
    }

    pub fn retract_belief(&mut self, belief: &Belief) -> bool {
        self.beliefs.shift_remove(&belief.to_string()).is_some()
    }

    /// First plan in library order whose trigger unifies with `event` and
    /// whose guard holds.
    pub fn select_plan(&self, event: &Belief) -> Option<(&Plan, Bindings)> {
        let beliefs: Vec<&Belief> = self.beliefs.values().collect();
        self.plans
            .iter()
            .find_map(|p| p.applies(event, &beliefs).map(|b| (p, b)))
    }

    /// Handles the event at the head of the queue, if any.
    pub fn step(&mut self, scene: &mut dyn SceneClient) -> Option<StepOutcome> {
        let event = self.queue.pop_front()?;
        let request = RequestBelief::from_belief(&event);
        let Some((plan, mut bindings)) = self.select_plan(&event).map(|(p, b)| (p.clone(), b)) else {
            let (replies, failure) = match &request {
                Some(req) => {
                    let msg = format!("I don't know how to handle {}", req.intent_name);
                    (vec![msg.clone()], Some(msg))
                }
                None => (Vec::new(), None),
            };
            return Some(StepOutcome {
                event,
                plan: None,
                replies,
                failure,
            });
        };

        let mut replies = Vec::new();
        let mut failure = None;
        for action in &plan.body {
            let cmd = match action {
                Action::Reply(template) => {
                    replies.push(plan::fill_template(template, &bindings));
                    continue;
                }
                Action::SceneAdd { obj_name, pos_x, pos_y } => SceneCommandRequest::Add {
                    obj_name: resolve(obj_name, &bindings),
                    pos_x: resolve(pos_x, &bindings),
                    pos_y: resolve(pos_y, &bindings),
                },
                Action::SceneRemove(r) => SceneCommandRequest::Remove {
                    ref_name: resolve(r, &bindings),
                },
                Action::SceneList => SceneCommandRequest::List,
            };
            let outcome = match scene.send(&cmd) {
                Ok(SceneCommandResponse::Done(payload)) => Ok(payload),
                Ok(SceneCommandResponse::Error { message, .. }) => Err(message),
                Err(e) => Err(e.to_string()),
            };
            match outcome {
                Ok(mut payload) => {
                    if matches!(cmd, SceneCommandRequest::List) && payload.is_empty() {
                        payload = "nothing".to_string();
                    }
                    bindings.insert(RESULT_VAR.to_string(), Term::Str(payload));
                }
                Err(message) => {
                    replies.clear();
                    replies.push(format!("Sorry, I could not do that: {message}."));
                    failure = Some(message);
                    break;
                }
            }
        }
        Some(StepOutcome {
            event,
            plan: Some(plan.name.clone()),
            replies,
            failure,
        })
    }

    /// Asserts the request belief, runs the agent until its event has been
    /// handled and returns the single reply for it. The request belief is
    /// consumed, so an identical request later is handled again.
    pub fn handle_request(&mut self, req: &RequestBelief, scene: &mut dyn SceneClient) -> AgentReply {
        let belief = req.to_belief();
        if !self.assert_belief(belief.clone()) {
            self.queue.push_back(belief.clone());
        }
        while let Some(out) = self.step(scene) {
            if out.event == belief {
                self.retract_belief(&belief);
                return AgentReply {
                    text: out.replies.join(" "),
                    ok: out.failure.is_none(),
                    plan: out.plan,
                };
            }
        }
        unreachable!("the request event was queued above")
    }
}

fn resolve(op: &Operand, b: &Bindings) -> String {
    op.resolve(b).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::ClientError;

    struct Recorder {
        sent: Vec<SceneCommandRequest>,
        answer: Result<SceneCommandResponse, ClientError>,
    }

    impl SceneClient for Recorder {
        fn send(&mut self, req: &SceneCommandRequest) -> Result<SceneCommandResponse, ClientError> {
            self.sent.push(req.clone());
            self.answer.clone()
        }
    }

    fn recorder(answer: Result<SceneCommandResponse, ClientError>) -> Recorder {
        Recorder { sent: Vec::new(), answer }
    }

    fn agent() -> AgentState {
        AgentState::new(crate::store::default_plans())
    }

    fn add_request() -> RequestBelief {
        RequestBelief::new(
            "undefined",
            "s1",
            "AddObject",
            [("posX", "right"), ("posY", "front"), ("objName", "Yaskawa MA2010")]
                .map(|(k, v)| (k.to_string(), v.to_string())),
        )
    }

    #[test]
    fn request_round_trips_through_belief() {
        let req = add_request();
        let b = req.to_belief();
        assert_eq!(RequestBelief::from_belief(&b).unwrap(), req);
        assert_eq!(parse_belief(&b.to_string()).unwrap(), b);
        assert!(RequestBelief::from_belief(&Belief::atom("x")).is_none());
    }

    #[test]
    fn add_request_selects_global_plan() {
        let a = agent();
        let (plan, b) = a.select_plan(&add_request().to_belief()).unwrap();
        assert_eq!(plan.name, "add_object_global");
        assert_eq!(b["Obj"].as_text(), "Yaskawa MA2010");
    }

    #[test]
    fn unknown_intent_has_no_plan() {
        let a = agent();
        let req = RequestBelief::new("undefined", "s", "Unknown", []);
        assert!(a.select_plan(&req.to_belief()).is_none());
        let mut a = a;
        let mut rec = recorder(Ok(SceneCommandResponse::Done(String::new())));
        let reply = a.handle_request(&req, &mut rec);
        assert_eq!(reply.text, "I don't know how to handle Unknown");
        assert!(!reply.ok);
        assert!(rec.sent.is_empty());
    }

    #[test]
    fn first_plan_with_passing_guard_wins() {
        let plans = vec![
            Plan::parse("first", "+go(X)", &[r#".one_of(X, ["a"])"#], &[r#"reply("first")"#]).unwrap(),
            Plan::parse("second", "+go(X)", &[], &[r#"reply("second")"#]).unwrap(),
        ];
        let a = AgentState::new(plans);
        let b = Belief::new("go", vec![Term::str("b")]);
        assert_eq!(a.select_plan(&b).unwrap().0.name, "second");
        let b = Belief::new("go", vec![Term::str("a")]);
        assert_eq!(a.select_plan(&b).unwrap().0.name, "first");
    }

    #[test]
    fn success_reply_names_the_object() {
        let mut a = agent();
        let mut rec = recorder(Ok(SceneCommandResponse::Done("Yaskawa MA2010".into())));
        let reply = a.handle_request(&add_request(), &mut rec);
        assert!(reply.ok);
        assert!(reply.text.contains("Yaskawa MA2010"), "{}", reply.text);
        assert_eq!(rec.sent, [SceneCommandRequest::add("Yaskawa MA2010", "right", "front")]);
        assert_eq!(a.pending_events(), 0);
        assert_eq!(a.beliefs().count(), 0);
    }

    #[test]
    fn scene_errors_become_error_replies() {
        let mut a = agent();
        let mut rec = recorder(Ok(SceneCommandResponse::error("occupied", "the position is already taken by X")));
        let reply = a.handle_request(&add_request(), &mut rec);
        assert!(!reply.ok);
        assert_eq!(reply.text, "Sorry, I could not do that: the position is already taken by X.");

        let mut rec = recorder(Err(ClientError::Timeout));
        let reply = a.handle_request(&add_request(), &mut rec);
        assert!(!reply.ok);
        assert!(reply.text.contains("did not answer in time"));
    }

    #[test]
    fn assert_is_idempotent_and_queue_drains() {
        let mut a = AgentState::new(Vec::new());
        assert!(a.assert_belief(Belief::atom("x")));
        assert!(!a.assert_belief(Belief::atom("x")));
        assert!(a.assert_belief(Belief::atom("y")));
        assert_eq!(a.pending_events(), 2);
        let mut rec = recorder(Ok(SceneCommandResponse::Done(String::new())));
        let first = a.step(&mut rec).unwrap();
        assert_eq!(first.event, Belief::atom("x"));
        assert!(first.replies.is_empty());
        a.step(&mut rec).unwrap();
        assert!(a.step(&mut rec).is_none());
        assert_eq!(a.pending_events(), 0);
    }
}
