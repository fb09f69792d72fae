//! Text-to-flythrough compilation: keyword spotting, node ordering, scene
//! construction, the scene timeline, exploration plans and narration.

mod exploration;
mod keywords;
mod narration;
mod scene;
mod sorting;
mod timeline;

pub use exploration::{ExplorationPlan, OPTIONS_PER_ROUND};
pub use keywords::{detect_keywords, KeywordHits};
pub use narration::{
    generate_narration, join_options, NarrationError, NarrationPayload, NarrationTemplates,
    TaskType, Template, DEFAULT_TEMPLATES,
};
pub use scene::{
    add_to_timeline, build_scene, Scene, SceneKind, FOCUS_DISTANCE_FRACTION, IDLE_TURN_DEGREES,
    SLOW_TURN_DEGREES,
};
pub use sorting::{
    node_sorting, select_focus_node, sort_nodes, sort_nodes_with, update_minimum_index,
    WorkingIndexMap,
};
pub use timeline::{Advance, Signal, Timeline};

pub(crate) use keywords::{fold_text, mentions, position};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NarrativeError {
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("{0:?} scene needs a target node")]
    MissingTarget(SceneKind),
    #[error("node `{0}` has no instances to focus on")]
    NoInstances(String),
    #[error("completion signal received with no current scene")]
    SignalWithoutScene,
    #[error("no exploration options pending")]
    NoPendingOptions,
    #[error("option {index} out of range ({len} offered)")]
    IndexOutOfRange { index: usize, len: usize },
}
