//! Line-oriented desk client driving one in-process session.
//!
//! Free text is sent as a query. Commands start with a colon:
//! `:state`, `:select N`, `:tick S`, `:speech`, `:help`, `:quit`.

use std::fmt::Write as _;
use std::sync::Arc;

use voice_core::narrative::Scene;
use voice_core::scene::SceneTree;

use crate::registry::{Gateway, QueryResponse, SelectResponse};
use crate::GatewayError;

pub const HELP: &str = "\
commands:
  <text>       ask the guide
  :state       show the current view and options
  :select N    pick option N (0-based)
  :tick S      advance the clock by S seconds
  :speech      report that the current narration finished
  :help        this list
  :quit        leave";

pub struct Repl {
    gateway: Arc<Gateway>,
    session: String,
    tree: Arc<SceneTree>,
}

impl Repl {
    /// Opens a session on `model` and returns the greeting shown first.
    pub fn open(gateway: Arc<Gateway>, model: &str) -> Result<(Self, String), GatewayError> {
        let created = gateway.create_session(model)?;
        let tree = gateway
            .tree(model)
            .ok_or_else(|| GatewayError::UnknownModel(model.to_owned()))?;
        let repl = Self {
            gateway,
            session: created.session_id,
            tree,
        };
        let greeting = format!("session on {model}\n{}", repl.current_scene()?);
        Ok((repl, greeting))
    }

    pub fn session_id(&self) -> &str {
        &self.session
    }

    pub fn is_quit(line: &str) -> bool {
        matches!(line.trim(), ":quit" | ":q" | ":exit")
    }

    fn name(&self, id: &str) -> String {
        self.tree
            .node(id)
            .map_or_else(|| id.to_owned(), |n| n.name.clone())
    }

    fn scene_line(&self, scene: &Scene) -> String {
        let target = scene
            .target_node_id
            .as_ref()
            .map(|id| format!(" {}", self.name(id.as_str())))
            .unwrap_or_default();
        format!("scene: {:?}{target} | {}", scene.kind, scene.speech.trim())
    }

    fn options_line(&self, options: &[String]) -> String {
        if options.is_empty() {
            return "options: none".to_owned();
        }
        let list: Vec<String> = options
            .iter()
            .enumerate()
            .map(|(i, id)| format!("[{i}] {}", self.name(id)))
            .collect();
        format!("options: {}", list.join("  "))
    }

    fn current_scene(&self) -> Result<String, GatewayError> {
        let snap = self.gateway.state(&self.session)?;
        Ok(match (snap.current_scene, snap.current_speech) {
            (Some(kind), speech) => format!("now: {kind:?} | {}", speech.unwrap_or_default()),
            (None, _) => "now: idle".to_owned(),
        })
    }

    /// Runs one input line and returns what to print.
    pub async fn execute(&mut self, line: &str) -> String {
        let line = line.trim();
        let outcome = match line.split_once(char::is_whitespace).unwrap_or((line, "")) {
            ("", _) => return String::new(),
            (":help", _) => Ok(HELP.to_owned()),
            (":state", _) => self.state(),
            (":select", arg) => match arg.trim().parse::<usize>() {
                Ok(n) => self.select(n).await,
                Err(_) => Ok("usage: :select N".to_owned()),
            },
            (":tick", arg) => match arg.trim().parse::<f64>() {
                Ok(s) if s.is_finite() && s >= 0.0 => self.tick(s).await,
                _ => Ok("usage: :tick SECONDS".to_owned()),
            },
            (":speech", _) => self.speech().await,
            (cmd, _) if cmd.starts_with(':') => Ok(format!("unknown command `{cmd}`; try :help")),
            _ => self.query(line).await,
        };
        outcome.unwrap_or_else(|e| format!("error: {e}"))
    }

    async fn query(&mut self, text: &str) -> Result<String, GatewayError> {
        let QueryResponse { result, .. } = self.gateway.query(&self.session, text).await?;
        let mut out = String::new();
        match (result.intent, result.command) {
            (Some(intent), _) => writeln!(out, "intent: {intent:?}"),
            (None, Some(cmd)) => writeln!(out, "command: {cmd:?}"),
            (None, None) => Ok(()),
        }
        .expect("write to string");
        if result.degraded {
            out.push_str("degraded\n");
        }
        if let Some(p) = &result.pilot {
            let _ = writeln!(out, "pilot: {p:?}");
        }
        if let Some(t) = &result.transform {
            let _ = writeln!(out, "transform: {t}");
        }
        for scene in &result.scenes {
            let _ = writeln!(out, "{}", self.scene_line(scene));
        }
        let options: Vec<String> = result.options.iter().map(ToString::to_string).collect();
        out.push_str(&self.options_line(&options));
        if result.awaiting_detail {
            out.push_str("\ndetail on offer");
        }
        Ok(out)
    }

    async fn select(&mut self, index: usize) -> Result<String, GatewayError> {
        let SelectResponse {
            node_name,
            scenes,
            options,
            ..
        } = self.gateway.select(&self.session, index).await?;
        let mut out = format!("selected: {node_name}\n");
        for scene in &scenes {
            let _ = writeln!(out, "{}", self.scene_line(scene));
        }
        out.push_str(&self.options_line(&options));
        Ok(out)
    }

    fn state(&self) -> Result<String, GatewayError> {
        let s = self.gateway.state(&self.session)?;
        let [x, y, z] = s.camera.view_direction;
        let mut out = format!(
            "node: {} (level {})\nview: ({x:.3}, {y:.3}, {z:.3}) distance {:.3}\n",
            self.name(&s.current_node),
            s.scale_level,
            s.camera.distance,
        );
        let _ = writeln!(
            out,
            "{} | queued {}",
            self.current_scene()?,
            s.queued_scenes
        );
        if s.plane.enabled {
            let _ = writeln!(out, "cutting plane at {:.3}", s.plane.offset);
        }
        out.push_str(&self.options_line(&s.pending_options));
        if s.awaiting_detail {
            out.push_str("\ndetail on offer");
        }
        Ok(out)
    }

    async fn tick(&mut self, seconds: f64) -> Result<String, GatewayError> {
        let signals = self.gateway.tick_session(&self.session, seconds).await?;
        let signals = if signals.is_empty() {
            "none".to_owned()
        } else {
            signals
                .iter()
                .map(|s| format!("{s:?}"))
                .collect::<Vec<_>>()
                .join(", ")
        };
        Ok(format!("signals: {signals}\n{}", self.current_scene()?))
    }

    async fn speech(&mut self) -> Result<String, GatewayError> {
        let done = self.gateway.speech_complete(&self.session).await?;
        let head = if done.advanced {
            "speech complete"
        } else {
            "no speech pending"
        };
        Ok(format!("{head}\n{}", self.current_scene()?))
    }

    /// Runs a whole script and returns the transcript, each input echoed
    /// after a `> ` prompt.
    pub async fn run_script<'a>(&mut self, lines: impl IntoIterator<Item = &'a str>) -> String {
        let mut transcript = String::new();
        for line in lines {
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let _ = writeln!(transcript, "> {}", line.trim());
            if Self::is_quit(line) {
                break;
            }
            let out = self.execute(line).await;
            if !out.is_empty() {
                let _ = writeln!(transcript, "{out}");
            }
        }
        transcript
    }
}
