//! Query routing: intent classification by a manager bot, concurrent
//! fan-out to the role bots and typed parsing of their replies.

mod backend;
mod bots;
mod intent;
mod mock;
mod pipeline;
mod prompts;
mod remote;

pub use backend::{
    BackendError, BotBackend, ChatMessage, ChatRole, ScriptedBackend, ScriptedReply,
};
pub use bots::{
    classify_intent, classify_pilot, encyclopedia_query, extract_transform, guardian_reply,
    resolve_pilot, BotHandle, BotSet, DEFAULT_BUDGET,
};
pub use intent::{
    parse_pilot_reply, parse_transform, EncyclopediaAnswer, Intent, PilotCommand, PilotIntent,
    ScaleDirection, Transform,
};
pub use mock::{normalize_question, MockBot, MockConfig};
pub use pipeline::{
    dispatch, local_command, process_query, resolve, Dispatched, LocalCommand, PendingDetail,
    QueryResult, SelectedReply,
};
pub use prompts::{BotRole, ModelContext, PromptError, PromptSet};
pub use remote::{RemoteBackend, RemoteConfig};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RouterError {
    #[error("empty query")]
    EmptyQuery,
    #[error("backend unavailable: {0}")]
    BackendUnavailable(#[from] BackendError),
    #[error("unparseable bot reply `{0}`")]
    UnparseableReply(String),
    #[error("no scene node matches `{0}`")]
    UnresolvedTarget(String),
    #[error("malformed transform `{0}`")]
    MalformedTransform(String),
    #[error("zoom factor must be positive, got {0}")]
    NonPositiveZoom(f64),
}
