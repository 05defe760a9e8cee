//! Fulfillment webhook bodies.
//!
//! Requests follow the usual chatbot fulfillment shape:
//!
//! ```json
//! {
//!   "responseId": "…",
//!   "session": "…",
//!   "queryResult": {
//!     "queryText": "Add a Yaskawa MA2010 in front on the right",
//!     "intent": { "displayName": "AddObject" },
//!     "parameters": { "posX": "right", "posY": "front", "objName": "Yaskawa MA2010" }
//!   }
//! }
//! ```
//!
//! and are answered with `{"fulfillmentText": "…"}`.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::ProtocolError;
use crate::agent::RequestBelief;

/// Source field of request beliefs built from webhook calls.
pub const UNDEFINED_SOURCE: &str = "undefined";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FulfillmentRequest {
    pub response_id: String,
    pub query_text: String,
    pub intent_name: String,
    pub parameters: IndexMap<String, String>,
    pub session: String,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct RequestBody {
    response_id: String,
    session: String,
    query_result: QueryResult,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct QueryResult {
    query_text: String,
    intent: IntentRef,
    #[serde(default)]
    parameters: IndexMap<String, String>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct IntentRef {
    display_name: String,
}

impl FulfillmentRequest {
    pub fn from_json(body: &str) -> Result<Self, ProtocolError> {
        let b: RequestBody = serde_json::from_str(body).map_err(|e| ProtocolError::Schema(e.to_string()))?;
        let req = Self {
            response_id: b.response_id,
            query_text: b.query_result.query_text,
            intent_name: b.query_result.intent.display_name,
            parameters: b.query_result.parameters,
            session: b.session,
        };
        if req.intent_name.trim().is_empty() {
            return Err(ProtocolError::Schema("queryResult.intent.displayName is empty".into()));
        }
        Ok(req)
    }

    pub fn to_json(&self) -> String {
        let body = RequestBody {
            response_id: self.response_id.clone(),
            session: self.session.clone(),
            query_result: QueryResult {
                query_text: self.query_text.clone(),
                intent: IntentRef {
                    display_name: self.intent_name.clone(),
                },
                parameters: self.parameters.clone(),
            },
        };
        serde_json::to_string(&body).expect("plain strings always serialize")
    }

    /// Field-for-field translation into the agent's request belief.
    pub fn to_request_belief(&self) -> RequestBelief {
        RequestBelief::new(
            UNDEFINED_SOURCE,
            &self.session,
            &self.intent_name,
            self.parameters.iter().map(|(k, v)| (k.clone(), v.clone())),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FulfillmentResponse {
    pub fulfillment_text: String,
}
