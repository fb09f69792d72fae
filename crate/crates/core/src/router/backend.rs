//! The chat backend abstraction and a scripted backend for tests.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Duration;

use async_trait::async_trait;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChatRole {
    System,
    User,
    Assistant,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: ChatRole,
    pub content: String,
}

impl ChatMessage {
    pub fn user(content: impl Into<String>) -> Self {
        Self {
            role: ChatRole::User,
            content: content.into(),
        }
    }

    pub fn assistant(content: impl Into<String>) -> Self {
        Self {
            role: ChatRole::Assistant,
            content: content.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BackendError {
    #[error("timed out after {0:?}")]
    Timeout(Duration),
    #[error("transport error: {0}")]
    Transport(String),
    #[error("HTTP status {status}: {body}")]
    Status { status: u16, body: String },
    #[error("malformed response: {0}")]
    Decode(String),
    #[error("environment variable `{0}` holding the API key is not set")]
    MissingApiKey(String),
    #[error("{0}")]
    Unavailable(String),
    #[error("bot task was cancelled")]
    Cancelled,
}

/// A chat completion service. Implementations must be callable from many
/// concurrent dispatches.
#[async_trait]
pub trait BotBackend: Send + Sync {
    async fn complete(
        &self,
        system_prompt: &str,
        messages: &[ChatMessage],
    ) -> Result<String, BackendError>;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScriptedReply {
    Text(String),
    Fail(String),
}

/// Answers every call with a fixed reply after an optional delay, and counts
/// the calls it received.
#[derive(Debug)]
pub struct ScriptedBackend {
    reply: ScriptedReply,
    delay: Duration,
    calls: AtomicUsize,
}

impl ScriptedBackend {
    pub fn text(reply: impl Into<String>) -> Self {
        Self::new(ScriptedReply::Text(reply.into()))
    }

    pub fn failing(reason: impl Into<String>) -> Self {
        Self::new(ScriptedReply::Fail(reason.into()))
    }

    pub fn new(reply: ScriptedReply) -> Self {
        Self {
            reply,
            delay: Duration::ZERO,
            calls: AtomicUsize::new(0),
        }
    }

    pub fn with_delay(mut self, delay: Duration) -> Self {
        self.delay = delay;
        self
    }

    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::SeqCst)
    }
}

#[async_trait]
impl BotBackend for ScriptedBackend {
    async fn complete(&self, _: &str, _: &[ChatMessage]) -> Result<String, BackendError> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        if !self.delay.is_zero() {
            tokio::time::sleep(self.delay).await;
        }
        match &self.reply {
            ScriptedReply::Text(t) => Ok(t.clone()),
            ScriptedReply::Fail(e) => Err(BackendError::Unavailable(e.clone())),
        }
    }
}
