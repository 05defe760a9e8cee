use std::time::Duration;

use vesna_core::protocol::{ClientError, SceneClient, SceneCommandRequest, SceneCommandResponse};

/// Per-command timeout of the agent's scene client.
pub const SCENE_CLIENT_TIMEOUT: Duration = Duration::from_secs(5);

/// Sends scene commands to a scene listener over HTTP. Blocking; meant for
/// the agent thread.
pub struct HttpSceneClient {
    base: String,
    http: reqwest::blocking::Client,
}

impl HttpSceneClient {
    /// `base` is e.g. `http://127.0.0.1:8081`, without a trailing slash.
    pub fn new(base: impl Into<String>) -> Self {
        Self::with_timeout(base, SCENE_CLIENT_TIMEOUT)
    }

    pub fn with_timeout(base: impl Into<String>, timeout: Duration) -> Self {
        let http = reqwest::blocking::Client::builder()
            .timeout(timeout)
            .build()
            .expect("http client");
        Self {
            base: base.into().trim_end_matches('/').to_string(),
            http,
        }
    }
}

impl SceneClient for HttpSceneClient {
    fn send(&mut self, req: &SceneCommandRequest) -> Result<SceneCommandResponse, ClientError> {
        let url = format!("{}{}", self.base, req.encode());
        let resp = self.http.get(url).send().map_err(to_client_error)?;
        let body = resp.text().map_err(to_client_error)?;
        SceneCommandResponse::parse_body(&body).map_err(|e| ClientError::Transport(e.to_string()))
    }
}

fn to_client_error(e: reqwest::Error) -> ClientError {
    if e.is_timeout() {
        ClientError::Timeout
    } else {
        ClientError::Transport(e.to_string())
    }
}
