//! The `vesna` command.
//!
//! Everything is reachable through [`run`], which takes explicit I/O
//! handles so the commands can be exercised from tests.

use std::io::{BufRead, Write};
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use indexmap::IndexMap;
use serde::Serialize;
use vesna_core::protocol::{SceneSnapshot, DEFAULT_CHAT_PORT, DEFAULT_SCENE_PORT};
use vesna_core::store::{self, Workspace};
use vesna_core::{LocalSession, TurnStatus};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PIPELINE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "vesna", version, about = "Build a scene by chatting with an agent")]
pub struct Cli {
    /// Workspace directory with nlu.toml, plans.toml, catalog.toml and an
    /// optional scene.toml. The built-in workspace is used when omitted.
    #[arg(long, global = true, env = "VESNA_CONFIG_DIR")]
    pub workspace: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the chat/webhook/state endpoints and the scene listener.
    Serve {
        #[arg(long, env = "VESNA_CHAT_PORT", default_value_t = DEFAULT_CHAT_PORT)]
        chat_port: u16,
        #[arg(long, env = "VESNA_SCENE_PORT", default_value_t = DEFAULT_SCENE_PORT)]
        scene_port: u16,
        /// Address to bind both listeners to.
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
    },
    /// Interactive chat in the terminal. `:scene` prints the scene, `:quit` exits.
    Chat,
    /// Run one utterance per line from FILE (`-` for stdin).
    Script {
        file: PathBuf,
        /// Continue after a failed turn instead of stopping.
        #[arg(long)]
        keep_going: bool,
        /// Print a JSON transcript instead of a plain one.
        #[arg(long)]
        json: bool,
    },
    /// Load and cross-check the workspace without starting anything.
    Validate,
    /// Write the built-in workspace into DIR.
    Init { dir: PathBuf },
}

/// Parses `args` and runs the command. Returns the process exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };

    if let Command::Init { dir } = &cli.command {
        return match store::write_default_workspace(dir) {
            Ok(()) => {
                let _ = writeln!(out, "wrote the default workspace to {}", dir.display());
                EXIT_OK
            }
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                EXIT_CONFIG
            }
        };
    }

    let ws = match load(cli.workspace.as_deref()) {
        Ok(ws) => ws,
        Err(e) => {
            let _ = writeln!(err, "config error: {e}");
            return EXIT_CONFIG;
        }
    };

    match cli.command {
        Command::Validate => validate(&ws, out),
        Command::Chat => chat(ws, stdin, out),
        Command::Script { file, keep_going, json } => {
            let text = if file.as_os_str() == "-" {
                let mut s = String::new();
                match stdin.read_to_string(&mut s) {
                    Ok(_) => s,
                    Err(e) => {
                        let _ = writeln!(err, "error: cannot read stdin: {e}");
                        return EXIT_CONFIG;
                    }
                }
            } else {
                match std::fs::read_to_string(&file) {
                    Ok(s) => s,
                    Err(e) => {
                        let _ = writeln!(err, "error: cannot read {}: {e}", file.display());
                        return EXIT_CONFIG;
                    }
                }
            };
            let t = run_script(ws, &text, keep_going);
            let _ = if json {
                writeln!(out, "{}", t.to_json())
            } else {
                write!(out, "{}", t.to_text())
            };
            if t.errors == 0 {
                EXIT_OK
            } else {
                EXIT_PIPELINE
            }
        }
        Command::Serve {
            chat_port,
            scene_port,
            host,
        } => serve(ws, SocketAddr::new(host, chat_port), SocketAddr::new(host, scene_port), out, err),
        Command::Init { .. } => unreachable!(),
    }
}

pub fn load(dir: Option<&Path>) -> Result<Workspace, store::StoreError> {
    match dir {
        Some(d) => store::load_workspace(d),
        None => Ok(store::default_workspace()),
    }
}

fn validate(ws: &Workspace, out: &mut dyn Write) -> i32 {
    let _ = writeln!(
        out,
        "ok: {} intents, {} plans, {} prototypes, {} objects on a {} x {} floor",
        ws.nlu.intents().len(),
        ws.plans.len(),
        ws.catalog.len(),
        ws.scene.len(),
        ws.scene.floor_width_x(),
        ws.scene.floor_depth_z(),
    );
    EXIT_OK
}

fn chat(ws: Workspace, stdin: &mut dyn BufRead, out: &mut dyn Write) -> i32 {
    let mut session = LocalSession::from_workspace(ws);
    let mut line = String::new();
    loop {
        let _ = write!(out, "> ");
        let _ = out.flush();
        line.clear();
        match stdin.read_line(&mut line) {
            Ok(0) | Err(_) => break,
            Ok(_) => {}
        }
        let text = line.trim();
        match text {
            "" => continue,
            ":quit" | ":q" => break,
            ":scene" => {
                let snap = session.snapshot();
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&snap).expect("snapshot json"));
            }
            _ => {
                let turn = session.chat(text);
                let _ = writeln!(out, "{}", turn.outcome.reply);
            }
        }
    }
    let _ = writeln!(out);
    EXIT_OK
}

fn serve(ws: Workspace, chat: SocketAddr, scene: SocketAddr, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let rt = match tokio::runtime::Runtime::new() {
        Ok(rt) => rt,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_PIPELINE;
        }
    };
    let result = rt.block_on(async {
        let server = vesna_server::start(ws, vesna_server::ServerConfig::new(chat, scene)).await?;
        let _ = writeln!(out, "chat on http://{}  scene on http://{}", server.chat_addr, server.scene_addr);
        let _ = out.flush();
        server
            .run_until(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_PIPELINE
        }
    }
}

/// One line of a script run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScriptTurn {
    pub line: usize,
    pub utterance: String,
    pub intent: String,
    pub confidence: f64,
    pub params: IndexMap<String, String>,
    pub belief: Option<String>,
    pub reply: String,
    pub status: TurnStatus,
    pub scene_version: u64,
    pub object_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Transcript {
    pub turns: Vec<ScriptTurn>,
    pub errors: usize,
    /// True when the run stopped early on a failed turn.
    pub aborted: bool,
    pub final_scene: SceneSnapshot,
}

impl Transcript {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("transcript json")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for t in &self.turns {
            s.push_str(&format!("> {}\n{}\n", t.utterance, t.reply));
        }
        if self.aborted {
            s.push_str("(stopped after a failed turn; use --keep-going to continue)\n");
        }
        s
    }
}

/// Runs `script` through an in-process session: one utterance per line,
/// blank lines and lines starting with `#` skipped. A failed fulfillment
/// stops the run unless `keep_going` is set.
pub fn run_script(ws: Workspace, script: &str, keep_going: bool) -> Transcript {
    let mut session = LocalSession::from_workspace(ws);
    let mut turns = Vec::new();
    let mut errors = 0;
    let mut aborted = false;
    for (i, raw) in script.lines().enumerate() {
        let text = raw.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let turn = session.chat(text);
        let o = turn.outcome;
        let failed = o.status == TurnStatus::Failed;
        turns.push(ScriptTurn {
            line: i + 1,
            utterance: o.utterance,
            intent: o.matched.intent,
            confidence: o.matched.confidence,
            params: o.matched.params,
            belief: o.belief,
            reply: o.reply,
            status: o.status,
            scene_version: turn.scene_version,
            object_count: session.service().scene().len(),
        });
        if failed {
            errors += 1;
            if !keep_going {
                aborted = true;
                break;
            }
        }
    }
    Transcript {
        turns,
        errors,
        aborted,
        final_scene: session.snapshot(),
    }
}
