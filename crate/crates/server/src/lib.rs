//! HTTP service.
//!
//! Two listeners run side by side:
//!
//! * the chat port (default 8080): `POST /chat`, `POST /webhook`,
//!   `GET /scene`, `GET /healthz`;
//! * the scene port (default 8081): the path-encoded scene commands
//!   (`/{obj}/{posX}/{posY}`, `/remove/{ref}`, `/list`).
//!
//! Chat and webhook requests are queued to a single agent thread, which
//! talks to the scene listener over HTTP exactly like a remote agent would.
//! `GET /scene` reads the last published snapshot and never waits for the
//! agent.

mod client;

use std::net::SocketAddr;
use std::sync::{mpsc, Arc, Mutex};
use std::thread;
use std::time::Duration;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::{header, HeaderMap, StatusCode, Uri};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use tokio::net::TcpListener;
use tokio::sync::{oneshot, watch};
use vesna_core::protocol::{FulfillmentRequest, FulfillmentResponse, SceneService, SceneSnapshot};
use vesna_core::store::Workspace;
use vesna_core::{ChatOutcome, Vesna};

pub use client::{HttpSceneClient, SCENE_CLIENT_TIMEOUT};

/// How long an HTTP handler waits for the agent before answering 504.
pub const AGENT_TIMEOUT: Duration = Duration::from_secs(15);

/// Session id of the server's agent.
pub const SERVER_SESSION_ID: &str = "vesna-server";

#[derive(Debug, Clone, Copy)]
pub struct ServerConfig {
    pub chat_addr: SocketAddr,
    pub scene_addr: SocketAddr,
    pub agent_timeout: Duration,
}

impl ServerConfig {
    pub fn new(chat_addr: SocketAddr, scene_addr: SocketAddr) -> Self {
        Self {
            chat_addr,
            scene_addr,
            agent_timeout: AGENT_TIMEOUT,
        }
    }
}

enum Job {
    Chat(String, oneshot::Sender<ChatOutcome>),
    Webhook(FulfillmentRequest, oneshot::Sender<FulfillmentResponse>),
}

#[derive(Clone)]
struct SceneState {
    service: Arc<Mutex<SceneService>>,
    published: Arc<watch::Sender<Arc<SceneSnapshot>>>,
}

#[derive(Clone)]
struct ChatState {
    jobs: mpsc::Sender<Job>,
    snapshot: watch::Receiver<Arc<SceneSnapshot>>,
    agent_timeout: Duration,
}

/// A running server. Dropping it does not stop it; call
/// [`RunningServer::shutdown`].
pub struct RunningServer {
    pub chat_addr: SocketAddr,
    pub scene_addr: SocketAddr,
    stop: watch::Sender<bool>,
    tasks: Vec<tokio::task::JoinHandle<std::io::Result<()>>>,
}

impl RunningServer {
    pub async fn shutdown(self) -> std::io::Result<()> {
        let _ = self.stop.send(true);
        for t in self.tasks {
            t.await.map_err(std::io::Error::other)??;
        }
        Ok(())
    }

    /// Serves until `signal` resolves, then shuts down.
    pub async fn run_until(self, signal: impl std::future::Future<Output = ()>) -> std::io::Result<()> {
        signal.await;
        self.shutdown().await
    }
}

/// Binds both listeners and starts serving. Port 0 picks a free port; the
/// bound addresses are in the returned handle.
pub async fn start(ws: Workspace, config: ServerConfig) -> std::io::Result<RunningServer> {
    let scene_listener = TcpListener::bind(config.scene_addr).await?;
    let chat_listener = TcpListener::bind(config.chat_addr).await?;
    let scene_addr = scene_listener.local_addr()?;
    let chat_addr = chat_listener.local_addr()?;

    let names: Vec<String> = ws.catalog.names().map(str::to_string).collect();
    let vesna = Vesna::new(ws.nlu, ws.plans, names, SERVER_SESSION_ID);
    let service = SceneService::new(ws.scene, ws.catalog);
    let (published, snapshot) = watch::channel(Arc::new(service.snapshot()));
    let scene_state = SceneState {
        service: Arc::new(Mutex::new(service)),
        published: Arc::new(published),
    };

    let jobs = spawn_agent(vesna, format!("http://{}", loopback(scene_addr)));
    let chat_state = ChatState {
        jobs,
        snapshot,
        agent_timeout: config.agent_timeout,
    };

    let (stop, stop_rx) = watch::channel(false);
    let stopped = |mut rx: watch::Receiver<bool>| async move {
        let _ = rx.wait_for(|s| *s).await;
    };
    let scene_stop = stop_rx.clone();
    let tasks = vec![
        tokio::spawn(async move {
            axum::serve(scene_listener, scene_router(scene_state))
                .with_graceful_shutdown(stopped(scene_stop))
                .await
        }),
        tokio::spawn(async move {
            axum::serve(chat_listener, chat_router(chat_state))
                .with_graceful_shutdown(stopped(stop_rx))
                .await
        }),
    ];
    Ok(RunningServer {
        chat_addr,
        scene_addr,
        stop,
        tasks,
    })
}

/// Where the agent should connect to reach a listener bound to `addr`.
fn loopback(addr: SocketAddr) -> SocketAddr {
    if addr.ip().is_unspecified() {
        let ip = match addr {
            SocketAddr::V4(_) => std::net::Ipv4Addr::LOCALHOST.into(),
            SocketAddr::V6(_) => std::net::Ipv6Addr::LOCALHOST.into(),
        };
        SocketAddr::new(ip, addr.port())
    } else {
        addr
    }
}

/// The agent's mailbox: one thread, one job at a time.
fn spawn_agent(mut vesna: Vesna, scene_base: String) -> mpsc::Sender<Job> {
    let (tx, rx) = mpsc::channel::<Job>();
    thread::Builder::new()
        .name("vesna-agent".into())
        .spawn(move || {
            let mut client = HttpSceneClient::new(scene_base);
            for job in rx {
                match job {
                    Job::Chat(text, reply) => {
                        let _ = reply.send(vesna.chat_listing(&text, &mut client));
                    }
                    Job::Webhook(req, reply) => {
                        let _ = reply.send(vesna.fulfill(&req, &mut client).0);
                    }
                }
            }
        })
        .expect("spawn agent thread");
    tx
}

fn scene_router(state: SceneState) -> Router {
    Router::new().fallback(scene_command).with_state(state)
}

async fn scene_command(State(state): State<SceneState>, uri: Uri) -> Response {
    let path = uri.path().to_string();
    let resp = tokio::task::spawn_blocking(move || {
        let mut svc = state.service.lock().unwrap_or_else(|e| e.into_inner());
        let before = svc.version();
        let resp = svc.handle_path(&path);
        if svc.version() != before {
            state.published.send_replace(Arc::new(svc.snapshot()));
        }
        resp
    })
    .await
    .expect("scene task");
    let status = StatusCode::from_u16(resp.status()).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
    (status, [(header::CONTENT_TYPE, "text/plain; charset=utf-8")], resp.to_body()).into_response()
}

fn chat_router(state: ChatState) -> Router {
    Router::new()
        .route("/chat", post(chat))
        .route("/webhook", post(webhook))
        .route("/scene", get(scene))
        .route("/healthz", get(|| async { "ready" }))
        .with_state(state)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChatRequest {
    pub text: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ChatResponse {
    pub reply: String,
    pub scene_version: u64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    pub reason: String,
}

fn error(status: StatusCode, code: &str, reason: impl Into<String>) -> Response {
    (
        status,
        Json(ErrorBody {
            error: code.to_string(),
            reason: reason.into(),
        }),
    )
        .into_response()
}

async fn ask<T>(state: &ChatState, job: Job, rx: oneshot::Receiver<T>) -> Result<T, Response> {
    if state.jobs.send(job).is_err() {
        return Err(error(StatusCode::SERVICE_UNAVAILABLE, "agent_unavailable", "the agent has stopped"));
    }
    match tokio::time::timeout(state.agent_timeout, rx).await {
        Ok(Ok(v)) => Ok(v),
        Ok(Err(_)) => Err(error(StatusCode::SERVICE_UNAVAILABLE, "agent_unavailable", "the agent has stopped")),
        Err(_) => Err(error(StatusCode::GATEWAY_TIMEOUT, "agent_timeout", "the agent did not answer in time")),
    }
}

async fn chat(State(state): State<ChatState>, body: Bytes) -> Response {
    let req: ChatRequest = match serde_json::from_slice(&body) {
        Ok(r) => r,
        Err(e) => return error(StatusCode::BAD_REQUEST, "schema_violation", e.to_string()),
    };
    let (tx, rx) = oneshot::channel();
    match ask(&state, Job::Chat(req.text, tx), rx).await {
        Ok(outcome) => Json(ChatResponse {
            reply: outcome.reply,
            scene_version: state.snapshot.borrow().scene_version,
        })
        .into_response(),
        Err(resp) => resp,
    }
}

async fn webhook(State(state): State<ChatState>, body: Bytes) -> Response {
    let text = String::from_utf8_lossy(&body);
    let req = match FulfillmentRequest::from_json(&text) {
        Ok(r) => r,
        Err(e) => return error(StatusCode::BAD_REQUEST, e.code(), e.to_string()),
    };
    let (tx, rx) = oneshot::channel();
    match ask(&state, Job::Webhook(req, tx), rx).await {
        Ok(resp) => Json(resp).into_response(),
        Err(resp) => resp,
    }
}

/// Snapshot with an ETag of the scene version, so pollers can skip
/// unchanged states with `If-None-Match`.
async fn scene(State(state): State<ChatState>, headers: HeaderMap) -> Response {
    let snap = state.snapshot.borrow().clone();
    let etag = format!("\"{}\"", snap.scene_version);
    let unchanged = headers
        .get(header::IF_NONE_MATCH)
        .and_then(|v| v.to_str().ok())
        .is_some_and(|v| v.split(',').any(|t| t.trim() == etag));
    if unchanged {
        return (StatusCode::NOT_MODIFIED, [(header::ETAG, etag)]).into_response();
    }
    ([(header::ETAG, etag)], Json(snap.as_ref().clone())).into_response()
}
