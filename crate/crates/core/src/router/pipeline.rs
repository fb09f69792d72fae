//! The query pipeline: local commands, concurrent bot dispatch and the
//! resolution of the selected reply into scenes.

use serde::{Deserialize, Serialize};
use tokio::task::JoinHandle;

use crate::narrative::{NarrationPayload, SceneKind, TaskType};
use crate::scene::NodeId;
use crate::session::{Session, USER};
use crate::visual::VisualError;

use super::backend::BackendError;
use super::bots::{resolve_pilot, BotSet};
use super::intent::{parse_transform, Intent, PilotIntent, Transform};
use super::mock::normalize_question;
use super::prompts::{BotRole, ModelContext};
use super::RouterError;

/// Requests handled without asking any bot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LocalCommand {
    Help,
    /// Yes to the offer of a detailed answer.
    Affirm,
    Decline,
    MoreOptions,
    EndExploration,
}

const HELP: &[&str] = &[
    "help",
    "help me",
    "i need help",
    "what can you do",
    "what can i ask",
    "what can i say",
    "how does this work",
];
const AFFIRM: &[&str] = &[
    "yes",
    "yes please",
    "yes tell me more",
    "sure",
    "ok",
    "okay",
    "yeah",
    "yep",
    "of course",
    "tell me more",
    "more details",
    "go on",
    "please do",
];
const DECLINE: &[&str] = &["no", "no thanks", "no thank you", "nope", "not now"];
const MORE: &[&str] = &[
    "show me more",
    "more options",
    "other options",
    "something else",
    "next",
    "more",
];
const END: &[&str] = &[
    "stop",
    "that's enough",
    "thats enough",
    "enough",
    "i'm done",
    "im done",
    "no more",
];

fn command_key(query: &str) -> String {
    let norm = normalize_question(&query.replace(',', " "));
    let norm = norm.strip_prefix("please ").unwrap_or(&norm);
    let norm = norm.strip_suffix(" please").unwrap_or(norm);
    norm.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Recognizes phrases that control the conversation itself. Affirmations
/// only count while a detailed answer is on offer, option control only
/// while an exploration runs.
pub fn local_command(query: &str, session: &Session) -> Option<LocalCommand> {
    let key = command_key(query);
    let is = |set: &[&str]| set.contains(&key.as_str());
    if session.awaiting_detail() {
        if is(AFFIRM) {
            return Some(LocalCommand::Affirm);
        }
        if is(DECLINE) {
            return Some(LocalCommand::Decline);
        }
    }
    if session.exploration_active() {
        if is(MORE) {
            return Some(LocalCommand::MoreOptions);
        }
        if is(END) || is(DECLINE) {
            return Some(LocalCommand::EndExploration);
        }
    }
    is(HELP).then_some(LocalCommand::Help)
}

/// The detailed encyclopedia segment, possibly still being generated.
#[derive(Debug)]
pub enum PendingDetail {
    Ready(String),
    Running(JoinHandle<Result<String, BackendError>>),
}

impl PendingDetail {
    pub async fn resolve(self) -> Result<String, BackendError> {
        match self {
            PendingDetail::Ready(text) => Ok(text),
            PendingDetail::Running(handle) => handle.await.map_err(|_| BackendError::Cancelled)?,
        }
    }
}

/// The one bot reply that matters for the class the manager chose.
#[derive(Debug)]
pub enum SelectedReply {
    Pilot(String),
    Explorer(String),
    Encyclopedia {
        concise: String,
        detailed: PendingDetail,
    },
    Guardian(String),
    CuttingPlane,
}

impl SelectedReply {
    pub fn intent(&self) -> Intent {
        match self {
            SelectedReply::Pilot(_) => Intent::Pilot,
            SelectedReply::Explorer(_) => Intent::Explorer,
            SelectedReply::Encyclopedia { .. } => Intent::Encyclopedia,
            SelectedReply::Guardian(_) => Intent::Guardian,
            SelectedReply::CuttingPlane => Intent::CuttingPlane,
        }
    }
}

pub type Dispatched = Result<SelectedReply, RouterError>;

type Task = JoinHandle<Result<String, BackendError>>;

/// In-flight bot calls; whatever is not taken is aborted on drop.
struct Fanout {
    tasks: [Option<Task>; 6],
}

impl Fanout {
    fn take(&mut self, role: BotRole) -> Task {
        self.tasks[role as usize]
            .take()
            .expect("each role is taken at most once")
    }
}

impl Drop for Fanout {
    fn drop(&mut self) {
        for t in self.tasks.iter().flatten() {
            t.abort();
        }
    }
}

async fn join(task: Task) -> Result<String, BackendError> {
    task.await.map_err(|_| BackendError::Cancelled)?
}

/// Sends the query to every bot at once, waits for the manager's class and
/// then only for the bot serving that class. The other calls are dropped.
pub async fn dispatch(query: &str, ctx: &ModelContext, bots: &BotSet) -> Dispatched {
    let query = query.trim();
    if query.is_empty() {
        return Err(RouterError::EmptyQuery);
    }
    let mut fanout = Fanout {
        tasks: BotRole::ALL.map(|role| {
            let bots = bots.clone();
            let ctx = ctx.clone();
            let query = query.to_owned();
            Some(tokio::spawn(
                async move { bots.ask(role, &ctx, &query).await },
            ))
        }),
    };
    let intent: Intent = join(fanout.take(BotRole::Manager)).await?.parse()?;
    Ok(match intent {
        Intent::Pilot => SelectedReply::Pilot(join(fanout.take(BotRole::Pilot)).await?),
        Intent::Explorer => SelectedReply::Explorer(join(fanout.take(BotRole::Explorer)).await?),
        Intent::Guardian => SelectedReply::Guardian(join(fanout.take(BotRole::Guardian)).await?),
        Intent::CuttingPlane => SelectedReply::CuttingPlane,
        Intent::Encyclopedia => {
            let detailed = fanout.take(BotRole::EncyclopediaDetailed);
            let concise = join(fanout.take(BotRole::EncyclopediaConcise))
                .await
                .map(|c| c.trim().to_owned())
                .unwrap_or_default();
            if concise.is_empty() {
                let answer =
                    super::bots::combine_segments(Ok(String::new()), join(detailed).await)?;
                SelectedReply::Encyclopedia {
                    concise: answer.concise,
                    detailed: PendingDetail::Ready(String::new()),
                }
            } else {
                SelectedReply::Encyclopedia {
                    concise,
                    detailed: PendingDetail::Running(detailed),
                }
            }
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryResult {
    pub query: String,
    /// The manager's class; absent for local commands.
    pub intent: Option<Intent>,
    pub command: Option<LocalCommand>,
    pub pilot: Option<PilotIntent>,
    pub transform: Option<Transform>,
    /// Everything spoken in reply, in order.
    pub narration: String,
    pub scenes: Vec<crate::narrative::Scene>,
    pub options: Vec<NodeId>,
    pub awaiting_detail: bool,
    /// A bot failed and the reply is an apology.
    pub degraded: bool,
}

impl QueryResult {
    fn new(query: &str) -> Self {
        Self {
            query: query.to_owned(),
            intent: None,
            command: None,
            pilot: None,
            transform: None,
            narration: String::new(),
            scenes: Vec::new(),
            options: Vec::new(),
            awaiting_detail: false,
            degraded: false,
        }
    }

    fn finish(mut self, session: &Session) -> Self {
        self.narration = self
            .scenes
            .iter()
            .map(|s| s.speech.trim())
            .filter(|s| !s.is_empty())
            .collect::<Vec<_>>()
            .join(" ");
        self.options = session.pending_options().to_vec();
        self.awaiting_detail = session.awaiting_detail();
        self
    }
}

/// Runs one query against a session: local commands first, otherwise the
/// full bot round.
pub async fn process_query(query: &str, session: &mut Session, bots: &BotSet) -> QueryResult {
    session.record(USER, query.trim());
    if let Some(command) = local_command(query, session) {
        return run_local(command, query, session).await;
    }
    let ctx = session.model_context();
    let dispatched = dispatch(query, &ctx, bots).await;
    resolve(query, dispatched, session)
}

fn apology(mut result: QueryResult, session: &mut Session, error: &RouterError) -> QueryResult {
    tracing::warn!(%error, query = %result.query, "query degraded");
    let text = session.narrate(TaskType::Apology, NarrationPayload::default());
    result.scenes.push(session.speak(&text));
    result.degraded = true;
    result.finish(session)
}

async fn run_local(command: LocalCommand, query: &str, session: &mut Session) -> QueryResult {
    let mut result = QueryResult::new(query);
    result.command = Some(command);
    match command {
        LocalCommand::Help => {
            let text = session.narrate(TaskType::Help, NarrationPayload::default());
            result.scenes.push(session.speak(&text));
        }
        LocalCommand::Affirm => {
            let (_, detail) = session
                .take_pending_detail()
                .expect("affirm is only recognized while a detail is pending");
            match detail.resolve().await {
                Ok(text) if !text.trim().is_empty() => {
                    result.scenes.push(session.speak(text.trim()));
                    if let Some(prompt) = session.option_prompt() {
                        result.scenes.push(session.speak(&prompt));
                    }
                }
                Ok(_) => {
                    return apology(
                        result,
                        session,
                        &RouterError::UnparseableReply(String::new()),
                    )
                }
                Err(e) => return apology(result, session, &RouterError::BackendUnavailable(e)),
            }
        }
        LocalCommand::Decline => {
            session.clear_pending_detail();
            let prompt = session.option_prompt().unwrap_or_else(|| {
                session.narrate(TaskType::ExplorationEnd, NarrationPayload::default())
            });
            result.scenes.push(session.speak(&prompt));
        }
        LocalCommand::MoreOptions => {
            session.more_options();
            let text = session.option_prompt().unwrap_or_else(|| {
                session.narrate(TaskType::ExplorationEnd, NarrationPayload::default())
            });
            result.scenes.push(session.speak(&text));
        }
        LocalCommand::EndExploration => {
            session.end_exploration();
            session.clear_pending_detail();
            let text = session.narrate(TaskType::ExplorationEnd, NarrationPayload::default());
            result.scenes.push(session.speak(&text));
        }
    }
    result.finish(session)
}

fn node_name(session: &Session, id: &str) -> String {
    session
        .tree()
        .node(id)
        .map_or_else(|| id.to_owned(), |n| n.name.clone())
}

/// Applies the selected reply to the session. Only this step mutates state.
pub fn resolve(query: &str, dispatched: Dispatched, session: &mut Session) -> QueryResult {
    let mut result = QueryResult::new(query);
    let selected = match dispatched {
        Ok(s) => s,
        Err(e) => return apology(result, session, &e),
    };
    result.intent = Some(selected.intent());
    match selected {
        SelectedReply::Pilot(reply) => {
            let pilot = match resolve_pilot(&reply, query, session.tree()) {
                Ok(p) => p,
                Err(RouterError::UnresolvedTarget(_)) => {
                    let text = session.narrate(TaskType::NotFound, NarrationPayload::default());
                    result.scenes.push(session.speak(&text));
                    return result.finish(session);
                }
                Err(e) => return apology(result, session, &e),
            };
            session.end_exploration();
            session.clear_pending_detail();
            result.pilot = Some(pilot.clone());
            match pilot_scene(&pilot, session) {
                Ok(scene) => result.scenes.push(scene),
                Err(e) => {
                    return apology(
                        result,
                        session,
                        &RouterError::UnparseableReply(e.to_string()),
                    )
                }
            }
        }
        SelectedReply::Explorer(reply) => {
            let t = match parse_transform(&reply) {
                Ok(t) => t,
                Err(e) => return apology(result, session, &e),
            };
            let anim = match session.visual_mut().apply_transform(&t) {
                Ok(a) => a,
                Err(e) => {
                    return apology(
                        result,
                        session,
                        &RouterError::UnparseableReply(e.to_string()),
                    )
                }
            };
            session.end_exploration();
            session.clear_pending_detail();
            result.transform = Some(t);
            let text = session.narrate(
                TaskType::ExplorerAck,
                NarrationPayload::default().with_direction(t.describe()),
            );
            let scene = session
                .play(SceneKind::SpeechOnly, None, &text, anim)
                .expect("speech-only scenes need no target");
            result.scenes.push(scene);
        }
        SelectedReply::CuttingPlane => {
            let anim = session.visual_mut().set_cutting_plane();
            let node = session.visual().current_node().clone();
            let text = session.narrate(
                TaskType::CuttingAck,
                NarrationPayload::node(node_name(session, node.as_str())),
            );
            let scene = session
                .play(SceneKind::CuttingPlane, Some(node), &text, anim)
                .expect("target is set");
            result.scenes.push(scene);
        }
        SelectedReply::Encyclopedia { concise, detailed } => {
            session.end_exploration();
            session.clear_pending_detail();
            match session.run_exploration(query, &concise) {
                Ok(scenes) => result.scenes.extend(scenes),
                Err(e) => {
                    return apology(
                        result,
                        session,
                        &RouterError::UnparseableReply(e.to_string()),
                    )
                }
            }
            let topic = session
                .exploration()
                .and_then(|p| p.visited().first().cloned())
                .map_or_else(
                    || session.tree().model_name().to_owned(),
                    |id| node_name(session, id.as_str()),
                );
            let has_detail = !matches!(&detailed, PendingDetail::Ready(t) if t.trim().is_empty());
            let mut prompts = Vec::new();
            if let Some(p) = session.option_prompt() {
                prompts.push(p);
            }
            if has_detail {
                prompts
                    .push(session.narrate(TaskType::DetailPrompt, NarrationPayload::node(&topic)));
                session.set_pending_detail(topic, detailed);
            }
            if !prompts.is_empty() {
                result.scenes.push(session.speak(&prompts.join(" ")));
            }
        }
        SelectedReply::Guardian(reply) => {
            let text = reply.trim().to_owned();
            result.scenes.push(session.speak(&text));
        }
    }
    result.finish(session)
}

fn pilot_scene(
    pilot: &PilotIntent,
    session: &mut Session,
) -> Result<crate::narrative::Scene, crate::session::SessionError> {
    let ack = |session: &mut Session, id: &NodeId| {
        let name = node_name(session, id.as_str());
        session.narrate(TaskType::PilotAck, NarrationPayload::node(name))
    };
    let moved = match pilot {
        PilotIntent::NodeNavigation(id) => {
            let description = session
                .tree()
                .node(id.as_str())
                .map(|n| n.description.clone())
                .unwrap_or_default();
            let text = format!("{} {}", ack(session, id), description);
            return session.show_node(id.as_str(), Some(text.trim()));
        }
        PilotIntent::ScaleChange(d) => session.visual_mut().change_scale(*d),
        PilotIntent::Reset => Ok(session.visual_mut().reset()),
        PilotIntent::ReturnBack => session.visual_mut().return_back(),
    };
    match moved {
        Ok(anim) => {
            let node = session.visual().current_node().clone();
            let text = ack(session, &node);
            session.play(SceneKind::Overview, Some(node), &text, anim)
        }
        Err(e) => {
            let task = match e {
                VisualError::EmptyHistory => TaskType::NothingBack,
                _ => TaskType::Boundary,
            };
            let node = session.visual().current_node().clone();
            let name = node_name(session, node.as_str());
            let text = session.narrate(task, NarrationPayload::node(name));
            Ok(session.speak(&text))
        }
    }
}
