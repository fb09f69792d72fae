//! Session hosting for the conversational scene guide: a registry of live
//! sessions with a tick loop, an HTTP API over it and a line-oriented REPL.

pub mod config;
pub mod http;
pub mod registry;
pub mod repl;

pub use config::{BackendConfig, BackendKind, CannedAnswer, Config, MockSection};
pub use registry::{
    Direction, Gateway, QueryResponse, SelectResponse, SessionCreated, SpeechCompleteResponse,
    SpeechEvent,
};
pub use repl::Repl;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GatewayError {
    #[error("unknown model `{0}`")]
    UnknownModel(String),
    #[error("unknown session `{0}`")]
    UnknownSession(String),
    #[error("a request for this session is still in progress")]
    Busy,
    #[error("no exploration options pending")]
    NoPendingOptions,
    #[error("option {index} out of range ({len} offered)")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("configuration: {0}")]
    Config(String),
    #[error("scene: {0}")]
    Scene(String),
    #[error("backend: {0}")]
    Backend(String),
}

impl GatewayError {
    /// Stable machine-readable name used in error documents.
    pub fn code(&self) -> &'static str {
        match self {
            GatewayError::UnknownModel(_) => "UnknownModel",
            GatewayError::UnknownSession(_) => "UnknownSession",
            GatewayError::Busy => "Busy",
            GatewayError::NoPendingOptions => "NoPendingOptions",
            GatewayError::IndexOutOfRange { .. } => "IndexOutOfRange",
            GatewayError::Config(_) => "Config",
            GatewayError::Scene(_) => "Scene",
            GatewayError::Backend(_) => "Backend",
        }
    }
}
