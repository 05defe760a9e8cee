//! Messages exchanged between the chat front end, the agent and the scene
//! listener.

mod service;
mod webhook;
mod wire;

use thiserror::Error;

pub use service::{Floor, LocalSceneClient, ObjectView, SceneService, SceneSnapshot};
pub use webhook::{FulfillmentRequest, FulfillmentResponse, UNDEFINED_SOURCE};
pub use wire::{SceneCommandRequest, SceneCommandResponse};

/// Default port of the scene-command listener.
pub const DEFAULT_SCENE_PORT: u16 = 8081;
/// Default port of the chat, webhook and state endpoints.
pub const DEFAULT_CHAT_PORT: u16 = 8080;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProtocolError {
    #[error("malformed scene command: {0}")]
    Malformed(String),
    #[error("schema violation: {0}")]
    Schema(String),
}

impl ProtocolError {
    pub fn code(&self) -> &'static str {
        match self {
            ProtocolError::Malformed(_) => "malformed",
            ProtocolError::Schema(_) => "schema_violation",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClientError {
    #[error("the scene did not answer in time")]
    Timeout,
    #[error("could not reach the scene: {0}")]
    Transport(String),
}

/// Whatever executes scene commands on the agent's behalf.
pub trait SceneClient {
    fn send(&mut self, req: &SceneCommandRequest) -> Result<SceneCommandResponse, ClientError>;
}

impl<T: SceneClient + ?Sized> SceneClient for &mut T {
    fn send(&mut self, req: &SceneCommandRequest) -> Result<SceneCommandResponse, ClientError> {
        (**self).send(req)
    }
}
