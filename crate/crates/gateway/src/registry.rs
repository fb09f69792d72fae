//! Live sessions, their per-session serialization and the shared tick loop.

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, Mutex, RwLock};
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use tokio::task::JoinHandle;
use voice_core::narrative::{NarrationTemplates, NarrativeError, Scene, Signal};
use voice_core::router::{
    process_query, BotHandle, BotRole, BotSet, PromptSet, QueryResult, RemoteBackend,
};
use voice_core::scene::{load_scene_tree, SceneTree};
use voice_core::session::{speech_duration, Session, SessionError, SessionOptions};
use voice_core::visual::StateSnapshot;

use crate::config::{BackendKind, Config};
use crate::GatewayError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    In,
    Out,
}

/// One utterance with the time it takes to say at the configured rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeechEvent {
    pub direction: Direction,
    pub text: String,
    pub duration_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionCreated {
    pub session_id: String,
    pub model: String,
    /// Seconds since the Unix epoch.
    pub created_at: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryResponse {
    #[serde(flatten)]
    pub result: QueryResult,
    pub speech: Vec<SpeechEvent>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectResponse {
    pub node: String,
    pub node_name: String,
    pub narration: String,
    pub scenes: Vec<Scene>,
    pub options: Vec<String>,
    pub speech: Vec<SpeechEvent>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpeechCompleteResponse {
    pub advanced: bool,
}

struct Slot {
    model: String,
    busy: AtomicBool,
    session: tokio::sync::Mutex<Session>,
    published: RwLock<StateSnapshot>,
    last_used: Mutex<Instant>,
    last_tick: Mutex<Instant>,
}

impl Slot {
    fn touch(&self) {
        *self.last_used.lock().expect("clock lock") = Instant::now();
    }

    fn publish(&self, session: &Session) {
        *self.published.write().expect("snapshot lock") = session.snapshot();
    }
}

/// Clears the busy flag when the request finishes, however it finishes.
struct BusyGuard<'a>(&'a AtomicBool);

impl<'a> BusyGuard<'a> {
    fn acquire(flag: &'a AtomicBool) -> Result<Self, GatewayError> {
        flag.compare_exchange(false, true, Ordering::AcqRel, Ordering::Acquire)
            .map(|_| Self(flag))
            .map_err(|_| GatewayError::Busy)
    }
}

impl Drop for BusyGuard<'_> {
    fn drop(&mut self) {
        self.0.store(false, Ordering::Release);
    }
}

pub struct Gateway {
    models: BTreeMap<String, Arc<SceneTree>>,
    templates: Arc<NarrationTemplates>,
    bots: BotSet,
    options: SessionOptions,
    idle_timeout: Duration,
    tick_hz: f64,
    sessions: RwLock<HashMap<String, Arc<Slot>>>,
}

impl Gateway {
    pub fn new(
        models: BTreeMap<String, Arc<SceneTree>>,
        templates: Arc<NarrationTemplates>,
        bots: BotSet,
        options: SessionOptions,
    ) -> Self {
        Self {
            models,
            templates,
            bots,
            options,
            idle_timeout: Duration::from_secs(1800),
            tick_hz: 20.0,
            sessions: RwLock::new(HashMap::new()),
        }
    }

    pub fn with_idle_timeout(mut self, timeout: Duration) -> Self {
        self.idle_timeout = timeout;
        self
    }

    pub fn with_tick_hz(mut self, hz: f64) -> Self {
        self.tick_hz = hz;
        self
    }

    pub fn from_config(config: &Config) -> Result<Self, GatewayError> {
        let mut models = BTreeMap::new();
        for (name, path) in &config.models {
            let file = std::fs::File::open(path)
                .map_err(|e| GatewayError::Config(format!("{}: {e}", path.display())))?;
            let tree = load_scene_tree(file)
                .map_err(|e| GatewayError::Scene(format!("{}: {e}", path.display())))?;
            models.insert(name.clone(), Arc::new(tree));
        }
        let templates = match &config.narration {
            Some(path) => {
                let source = std::fs::read_to_string(path)
                    .map_err(|e| GatewayError::Config(format!("{}: {e}", path.display())))?;
                NarrationTemplates::from_json(&source)
                    .map_err(|e| GatewayError::Config(e.to_string()))?
            }
            None => NarrationTemplates::default(),
        };
        let prompts = match &config.prompts_dir {
            Some(dir) => {
                PromptSet::load_dir(dir).map_err(|e| GatewayError::Config(e.to_string()))?
            }
            None => PromptSet::default(),
        };
        let bots = match config.backend.kind {
            BackendKind::Mock => BotSet::mock_with_prompts(prompts, &config.mock.to_mock_config()),
            BackendKind::Remote => {
                let mut handles = Vec::with_capacity(BotRole::ALL.len());
                for role in BotRole::ALL {
                    let backend = RemoteBackend::new(config.backend.remote_for(role))
                        .map_err(|e| GatewayError::Backend(e.to_string()))?;
                    handles.push(
                        BotHandle::new(Arc::new(backend)).with_budget(config.backend.timeout()),
                    );
                }
                let mut handles = handles.into_iter();
                BotSet::new(prompts, |_| handles.next().expect("one handle per role"))
            }
        };
        let options = SessionOptions {
            seed: config.seed,
            words_per_second: config.spoken_rate,
            auto_speech: true,
        };
        Ok(Self::new(models, Arc::new(templates), bots, options)
            .with_idle_timeout(config.idle_timeout())
            .with_tick_hz(config.tick_hz))
    }

    pub fn tree(&self, model: &str) -> Option<Arc<SceneTree>> {
        self.models.get(model).cloned()
    }

    pub fn model_names(&self) -> Vec<String> {
        self.models.keys().cloned().collect()
    }

    pub fn session_count(&self) -> usize {
        self.sessions.read().expect("registry lock").len()
    }

    fn slot(&self, id: &str) -> Result<Arc<Slot>, GatewayError> {
        self.sessions
            .read()
            .expect("registry lock")
            .get(id)
            .cloned()
            .ok_or_else(|| GatewayError::UnknownSession(id.to_owned()))
    }

    fn speech(&self, direction: Direction, text: &str) -> Option<SpeechEvent> {
        let text = text.trim();
        (!text.is_empty()).then(|| SpeechEvent {
            direction,
            text: text.to_owned(),
            duration_estimate: speech_duration(text, self.options.words_per_second),
        })
    }

    fn scene_speech(&self, scenes: &[Scene]) -> Vec<SpeechEvent> {
        scenes
            .iter()
            .filter_map(|s| self.speech(Direction::Out, &s.speech))
            .collect()
    }

    pub fn create_session(&self, model: &str) -> Result<SessionCreated, GatewayError> {
        let tree = self
            .models
            .get(model)
            .ok_or_else(|| GatewayError::UnknownModel(model.to_owned()))?;
        let session = Session::new(Arc::clone(tree), Arc::clone(&self.templates), self.options);
        let snapshot = session.snapshot();
        let id = uuid::Uuid::new_v4().simple().to_string();
        let now = Instant::now();
        let slot = Arc::new(Slot {
            model: model.to_owned(),
            busy: AtomicBool::new(false),
            session: tokio::sync::Mutex::new(session),
            published: RwLock::new(snapshot),
            last_used: Mutex::new(now),
            last_tick: Mutex::new(now),
        });
        self.sessions
            .write()
            .expect("registry lock")
            .insert(id.clone(), slot);
        let created_at = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0.0, |d| d.as_secs_f64());
        tracing::info!(session = %id, model, "session created");
        Ok(SessionCreated {
            session_id: id,
            model: model.to_owned(),
            created_at,
        })
    }

    pub fn model_of(&self, id: &str) -> Result<String, GatewayError> {
        Ok(self.slot(id)?.model.clone())
    }

    pub async fn query(&self, id: &str, text: &str) -> Result<QueryResponse, GatewayError> {
        let slot = self.slot(id)?;
        let _busy = BusyGuard::acquire(&slot.busy)?;
        slot.touch();
        let mut session = slot.session.lock().await;
        let result = process_query(text, &mut session, &self.bots).await;
        slot.publish(&session);
        let speech = self
            .speech(Direction::In, text)
            .into_iter()
            .chain(self.scene_speech(&result.scenes))
            .collect();
        Ok(QueryResponse { result, speech })
    }

    pub async fn select(&self, id: &str, index: usize) -> Result<SelectResponse, GatewayError> {
        let slot = self.slot(id)?;
        let _busy = BusyGuard::acquire(&slot.busy)?;
        slot.touch();
        let mut session = slot.session.lock().await;
        let selection = session.select_option(index).map_err(|e| match e {
            SessionError::Narrative(NarrativeError::NoPendingOptions) => {
                GatewayError::NoPendingOptions
            }
            SessionError::Narrative(NarrativeError::IndexOutOfRange { index, len }) => {
                GatewayError::IndexOutOfRange { index, len }
            }
            other => GatewayError::Scene(other.to_string()),
        })?;
        slot.publish(&session);
        let node_name = session
            .tree()
            .node(selection.node.as_str())
            .map_or_else(|| selection.node.to_string(), |n| n.name.clone());
        let narration = selection
            .scenes
            .iter()
            .map(|s| s.speech.trim())
            .filter(|s| !s.is_empty())
            .collect::<Vec<_>>()
            .join(" ");
        Ok(SelectResponse {
            node: selection.node.to_string(),
            node_name,
            narration,
            speech: self.scene_speech(&selection.scenes),
            options: selection.options.iter().map(ToString::to_string).collect(),
            scenes: selection.scenes,
        })
    }

    pub async fn speech_complete(&self, id: &str) -> Result<SpeechCompleteResponse, GatewayError> {
        let slot = self.slot(id)?;
        let _busy = BusyGuard::acquire(&slot.busy)?;
        slot.touch();
        let mut session = slot.session.lock().await;
        let advanced = session.speech_complete();
        slot.publish(&session);
        Ok(SpeechCompleteResponse { advanced })
    }

    /// The last published snapshot; never waits for a running request.
    pub fn state(&self, id: &str) -> Result<StateSnapshot, GatewayError> {
        let slot = self.slot(id)?;
        let snapshot = slot.published.read().expect("snapshot lock").clone();
        Ok(snapshot)
    }

    /// Advances one session's clock by `dt` seconds, waiting for any running
    /// request to finish first.
    pub async fn tick_session(&self, id: &str, dt: f64) -> Result<Vec<Signal>, GatewayError> {
        let slot = self.slot(id)?;
        let mut session = slot.session.lock().await;
        let signals = session.tick(dt);
        *slot.last_tick.lock().expect("clock lock") = Instant::now();
        slot.publish(&session);
        Ok(signals)
    }

    /// One pass of the wall-clock tick loop. Sessions with a request in
    /// flight are skipped; their elapsed time is caught up on the next pass.
    pub fn tick_all(&self) {
        let slots: Vec<Arc<Slot>> = self
            .sessions
            .read()
            .expect("registry lock")
            .values()
            .cloned()
            .collect();
        for slot in slots {
            let Ok(mut session) = slot.session.try_lock() else {
                continue;
            };
            let now = Instant::now();
            let dt = {
                let mut last = slot.last_tick.lock().expect("clock lock");
                let dt = now.duration_since(*last).as_secs_f64();
                *last = now;
                dt
            };
            if session.is_busy_playing() {
                session.tick(dt);
                slot.publish(&session);
            }
        }
    }

    /// Drops sessions unused for longer than the idle timeout. Returns how
    /// many were removed.
    pub fn reap_idle(&self) -> usize {
        let now = Instant::now();
        let mut sessions = self.sessions.write().expect("registry lock");
        let before = sessions.len();
        sessions.retain(|id, slot| {
            let idle = now.duration_since(*slot.last_used.lock().expect("clock lock"));
            let keep = idle < self.idle_timeout || slot.busy.load(Ordering::Acquire);
            if !keep {
                tracing::info!(session = %id, "session expired");
            }
            keep
        });
        before - sessions.len()
    }

    /// Runs the tick loop and the idle reaper until the task is aborted.
    pub fn spawn_background(self: &Arc<Self>) -> JoinHandle<()> {
        let gateway = Arc::clone(self);
        tokio::spawn(async move {
            let period = Duration::from_secs_f64(1.0 / gateway.tick_hz);
            let mut interval = tokio::time::interval(period);
            interval.set_missed_tick_behavior(tokio::time::MissedTickBehavior::Delay);
            let mut last_reap = Instant::now();
            loop {
                interval.tick().await;
                gateway.tick_all();
                if last_reap.elapsed() >= Duration::from_secs(1) {
                    gateway.reap_idle();
                    last_reap = Instant::now();
                }
            }
        })
    }
}
