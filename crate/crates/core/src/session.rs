//! The chat pipeline: classify an utterance, answer static intents directly
//! and route fulfillment intents through the webhook translation to the
//! agent, which drives the scene.

use serde::Serialize;

use crate::agent::{AgentReply, AgentState, Plan};
use crate::nlu::{render_static_response, IntentMatch, NluConfig};
use crate::protocol::{
    FulfillmentRequest, FulfillmentResponse, LocalSceneClient, ProtocolError, SceneClient, SceneCommandRequest,
    SceneCommandResponse, SceneService, SceneSnapshot,
};
use crate::store::Workspace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TurnStatus {
    /// Nothing matched; the fallback help text was returned.
    Fallback,
    /// A non-fulfillment intent answered from its template.
    Static,
    /// The agent handled the request successfully.
    Fulfilled,
    /// The agent reported an error (scene rejection, unknown intent, …).
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChatOutcome {
    pub utterance: String,
    #[serde(rename = "match")]
    pub matched: IntentMatch,
    /// Canonical request belief handed to the agent, for fulfillment turns.
    pub belief: Option<String>,
    pub reply: String,
    pub status: TurnStatus,
}

/// NLU front end plus agent. The scene is reached only through a
/// [`SceneClient`], so the same pipeline runs in-process or against a
/// remote scene listener.
#[derive(Debug, Clone)]
pub struct Vesna {
    nlu: NluConfig,
    agent: AgentState,
    catalog_names: Vec<String>,
    session_id: String,
    responses: u64,
}

impl Vesna {
    pub fn new(nlu: NluConfig, plans: Vec<Plan>, catalog_names: Vec<String>, session_id: impl Into<String>) -> Self {
        Self {
            nlu,
            agent: AgentState::new(plans),
            catalog_names,
            session_id: session_id.into(),
            responses: 0,
        }
    }

    pub fn nlu(&self) -> &NluConfig {
        &self.nlu
    }

    pub fn agent(&self) -> &AgentState {
        &self.agent
    }

    pub fn catalog_names(&self) -> &[String] {
        &self.catalog_names
    }

    pub fn session_id(&self) -> &str {
        &self.session_id
    }

    pub fn classify(&self, utterance: &str, scene_refs: &[String]) -> IntentMatch {
        self.nlu.classify(&self.catalog_names, scene_refs, utterance)
    }

    pub fn chat(&mut self, utterance: &str, scene_refs: &[String], scene: &mut dyn SceneClient) -> ChatOutcome {
        let fallback = |matched: IntentMatch, reply: String| ChatOutcome {
            utterance: utterance.to_string(),
            matched,
            belief: None,
            reply,
            status: TurnStatus::Fallback,
        };
        if utterance.trim().is_empty() {
            let m = IntentMatch::fallback(self.nlu.fallback_intent());
            return fallback(m, self.nlu.fallback_response().to_string());
        }

        let matched = self.classify(utterance, scene_refs);
        let Some(intent) = self.nlu.intent(&matched.intent) else {
            return fallback(matched, self.nlu.fallback_response().to_string());
        };

        if !intent.fulfillment {
            let (reply, status) = match render_static_response(intent, &matched) {
                Ok(text) => (text, TurnStatus::Static),
                Err(e) => (e.to_string(), TurnStatus::Failed),
            };
            return ChatOutcome {
                utterance: utterance.to_string(),
                matched,
                belief: None,
                reply,
                status,
            };
        }

        self.responses += 1;
        let req = FulfillmentRequest {
            response_id: format!("{}-{}", self.session_id, self.responses),
            query_text: utterance.to_string(),
            intent_name: matched.intent.clone(),
            parameters: matched.params.clone(),
            session: self.session_id.clone(),
        };
        let belief = req.to_request_belief().to_belief().to_string();
        let (response, reply) = self.fulfill(&req, scene);
        ChatOutcome {
            utterance: utterance.to_string(),
            matched,
            belief: Some(belief),
            reply: response.fulfillment_text,
            status: if reply.ok {
                TurnStatus::Fulfilled
            } else {
                TurnStatus::Failed
            },
        }
    }

    /// Like [`Vesna::chat`], but first asks the scene for its live refs with
    /// a `list` command. Used when the scene lives behind a remote client.
    pub fn chat_listing(&mut self, utterance: &str, scene: &mut dyn SceneClient) -> ChatOutcome {
        let refs = match scene.send(&SceneCommandRequest::List) {
            Ok(SceneCommandResponse::Done(payload)) => split_listing(&payload),
            _ => Vec::new(),
        };
        self.chat(utterance, &refs, scene)
    }

    /// Webhook handling: the request becomes a `request(..)` belief for the
    /// agent and the agent's reply becomes the fulfillment text.
    pub fn fulfill(&mut self, req: &FulfillmentRequest, scene: &mut dyn SceneClient) -> (FulfillmentResponse, AgentReply) {
        let reply = self.agent.handle_request(&req.to_request_belief(), scene);
        let response = FulfillmentResponse {
            fulfillment_text: reply.text.clone(),
        };
        (response, reply)
    }
}

/// Ref names from a `list` payload. Names never contain commas, so the
/// `", "` separator is unambiguous.
pub fn split_listing(payload: &str) -> Vec<String> {
    if payload.is_empty() {
        return Vec::new();
    }
    payload.split(", ").map(str::to_string).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChatTurn {
    #[serde(flatten)]
    pub outcome: ChatOutcome,
    pub scene_version: u64,
}

/// Everything in one process: pipeline plus scene service, connected by a
/// [`LocalSceneClient`].
#[derive(Debug, Clone)]
pub struct LocalSession {
    vesna: Vesna,
    service: SceneService,
}

/// Session id used by in-process sessions, fixed so that transcripts are
/// reproducible.
pub const LOCAL_SESSION_ID: &str = "local-session";

impl LocalSession {
    pub fn new(vesna: Vesna, service: SceneService) -> Self {
        Self { vesna, service }
    }

    pub fn from_workspace(ws: Workspace) -> Self {
        let names = ws.catalog.names().map(str::to_string).collect();
        Self::new(
            Vesna::new(ws.nlu, ws.plans, names, LOCAL_SESSION_ID),
            SceneService::new(ws.scene, ws.catalog),
        )
    }

    pub fn vesna(&self) -> &Vesna {
        &self.vesna
    }

    pub fn service(&self) -> &SceneService {
        &self.service
    }

    pub fn chat(&mut self, text: &str) -> ChatTurn {
        let refs = self.service.ref_names();
        let mut client = LocalSceneClient::new(&mut self.service);
        let outcome = self.vesna.chat(text, &refs, &mut client);
        ChatTurn {
            outcome,
            scene_version: self.service.version(),
        }
    }

    /// Handles a raw webhook body.
    pub fn webhook(&mut self, body: &str) -> Result<FulfillmentResponse, ProtocolError> {
        let req = FulfillmentRequest::from_json(body)?;
        let mut client = LocalSceneClient::new(&mut self.service);
        Ok(self.vesna.fulfill(&req, &mut client).0)
    }

    pub fn snapshot(&self) -> SceneSnapshot {
        self.service.snapshot()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::store::default_workspace;

    #[test]
    fn greeting_is_answered_statically() {
        let mut s = LocalSession::from_workspace(default_workspace());
        let turn = s.chat("Hello! My name is Bob");
        assert_eq!(turn.outcome.reply, "Hi Bob! Nice to meet you!");
        assert_eq!(turn.outcome.status, TurnStatus::Static);
        assert!(turn.outcome.belief.is_none());
        assert_eq!(turn.scene_version, 0);
    }

    #[test]
    fn empty_and_garbage_fall_back() {
        let mut s = LocalSession::from_workspace(default_workspace());
        for text in ["", "   ", "qwzzx blorp"] {
            let turn = s.chat(text);
            assert_eq!(turn.outcome.status, TurnStatus::Fallback);
            assert!(turn.outcome.reply.starts_with("Sorry"));
        }
        assert!(s.snapshot().objects.is_empty());
    }

    #[test]
    fn add_then_list() {
        let mut s = LocalSession::from_workspace(default_workspace());
        let turn = s.chat("Add a Yaskawa MA2010 in front on the right");
        assert_eq!(turn.outcome.status, TurnStatus::Fulfilled);
        assert_eq!(turn.scene_version, 1);
        assert_eq!(turn.outcome.reply, "Done! Yaskawa MA2010 is now in the front right cell.");
        let turn = s.chat("What is in the scene?");
        assert_eq!(turn.outcome.reply, "The scene contains: Yaskawa MA2010.");
        assert_eq!(turn.scene_version, 1);
    }

    #[test]
    fn listing_refs_through_the_client() {
        let ws = default_workspace();
        let names = ws.catalog.names().map(str::to_string).collect();
        let mut vesna = Vesna::new(ws.nlu, ws.plans, names, "t");
        let mut svc = SceneService::new(ws.scene, ws.catalog);
        let mut client = LocalSceneClient::new(&mut svc);
        vesna.chat_listing("Add a Pallet in front on the left", &mut client);
        vesna.chat_listing("Add a Pallet left of Pallet", &mut client);
        let out = vesna.chat_listing("Remove the Pallet#2", &mut client);
        assert_eq!(out.status, TurnStatus::Fulfilled);
        assert_eq!(svc.ref_names(), ["Pallet"]);
        assert_eq!(split_listing(""), Vec::<String>::new());
    }

    #[test]
    fn webhook_body_drives_the_agent() {
        let mut s = LocalSession::from_workspace(default_workspace());
        let body = r#"{"responseId":"r","session":"s","queryResult":{"queryText":"x",
            "intent":{"displayName":"AddObject"},
            "parameters":{"posX":"center","posY":"center","objName":"Pallet"}}}"#;
        let resp = s.webhook(body).unwrap();
        assert!(resp.fulfillment_text.contains("Pallet"));
        assert_eq!(s.service().version(), 1);
        assert!(s.webhook("{").is_err());
        assert_eq!(s.service().version(), 1);
    }
}
