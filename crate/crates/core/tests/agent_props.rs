use proptest::prelude::*;
use vesna_core::agent::{AgentState, Belief, RequestBelief, Term};
use vesna_core::protocol::{ClientError, SceneClient, SceneCommandRequest, SceneCommandResponse};
use vesna_core::store::default_plans;

/// Answers from a fixed script, cycling, and records what it was sent.
struct Scripted {
    answers: Vec<Result<SceneCommandResponse, ClientError>>,
    sent: Vec<SceneCommandRequest>,
}

impl SceneClient for Scripted {
    fn send(&mut self, req: &SceneCommandRequest) -> Result<SceneCommandResponse, ClientError> {
        self.sent.push(req.clone());
        self.answers[(self.sent.len() - 1) % self.answers.len()].clone()
    }
}

fn answer() -> impl Strategy<Value = Result<SceneCommandResponse, ClientError>> {
    prop_oneof![
        "[A-Za-z ]{0,10}".prop_map(|s| Ok(SceneCommandResponse::Done(s))),
        "[a-z_]{1,8}".prop_map(|c| Ok(SceneCommandResponse::error(c, "no"))),
        Just(Err(ClientError::Timeout)),
        Just(Err(ClientError::Transport("down".into()))),
    ]
}

fn request() -> impl Strategy<Value = RequestBelief> {
    let intent = prop::sample::select(vec!["AddObject", "RemoveObject", "ListObjects", "Greeting", "Dance"]);
    let key = prop::sample::select(vec!["objName", "posX", "posY", "other"]);
    let value = prop::sample::select(vec!["Pallet", "left", "front", "center", "left of", "behind", "Pallet#2", "up"]);
    (intent, prop::collection::vec((key, value), 0..5), "[a-z0-9-]{0,8}").prop_map(|(i, ps, session)| {
        RequestBelief::new(
            "undefined",
            &session,
            i,
            ps.into_iter().map(|(k, v)| (k.to_string(), v.to_string())),
        )
    })
}

proptest! {
    #[test]
    fn exactly_one_reply_per_request(
        reqs in prop::collection::vec(request(), 1..20),
        answers in prop::collection::vec(answer(), 1..6),
    ) {
        let mut agent = AgentState::new(default_plans());
        let mut scene = Scripted { answers, sent: Vec::new() };
        for req in &reqs {
            let before = scene.sent.len();
            let reply = agent.handle_request(req, &mut scene);
            prop_assert!(!reply.text.is_empty());
            // each default plan performs at most one scene action
            prop_assert!(scene.sent.len() - before <= 1);
            prop_assert_eq!(agent.pending_events(), 0);
            prop_assert_eq!(agent.beliefs().count(), 0);
            if reply.plan.is_none() {
                prop_assert_eq!(reply.text, format!("I don't know how to handle {}", req.intent_name));
            }
        }
    }

    #[test]
    fn no_lost_events(names in prop::collection::btree_set("[a-z]{1,6}", 0..30)) {
        let mut agent = AgentState::new(default_plans());
        let mut scene = Scripted { answers: vec![Ok(SceneCommandResponse::Done(String::new()))], sent: Vec::new() };
        let n = names.len();
        for name in &names {
            prop_assert!(agent.assert_belief(Belief::new("seen", vec![Term::str(name.clone())])));
        }
        for _ in 0..n {
            prop_assert!(agent.step(&mut scene).is_some());
        }
        prop_assert_eq!(agent.pending_events(), 0);
        prop_assert_eq!(agent.beliefs().count(), n);
        prop_assert!(scene.sent.is_empty());
    }

    #[test]
    fn plan_selection_is_deterministic(req in request()) {
        let a = AgentState::new(default_plans());
        let b = a.clone();
        let ev = req.to_belief();
        let pa = a.select_plan(&ev).map(|(p, bind)| (p.name.clone(), bind));
        let pb = b.select_plan(&ev).map(|(p, bind)| (p.name.clone(), bind));
        prop_assert_eq!(pa, pb);
    }
}

#[test]
fn identical_requests_are_each_answered() {
    let mut agent = AgentState::new(default_plans());
    let mut scene = Scripted {
        answers: vec![Ok(SceneCommandResponse::Done("Pallet".into()))],
        sent: Vec::new(),
    };
    let req = RequestBelief::new(
        "undefined",
        "s",
        "RemoveObject",
        [("objName".to_string(), "Pallet".to_string())],
    );
    for _ in 0..3 {
        assert_eq!(agent.handle_request(&req, &mut scene).text, "Done! Pallet has been removed from the scene.");
    }
    assert_eq!(scene.sent.len(), 3);
}
