//! Headless visualization state: camera algebra, cutting plane, scale levels,
//! navigation history and animation playback.

mod animation;
mod camera;
mod snapshot;
mod state;

pub use animation::{AnimationPlayer, AnimationSpec, Keyframe, Pose};
pub use camera::{
    apply_transform, initial_view_direction, CameraState, CuttingPlaneState, TRANSFORM_DURATION,
};
pub(crate) use snapshot::label_for;
pub use snapshot::{CameraSnapshot, LabelSnapshot, LogEntry, PlaneSnapshot, StateSnapshot};
pub use state::{
    cutting_sweep, framing_camera, framing_distance, HistoryEntry, VisualState,
    CUTTING_SWEEP_DURATION, FLY_TO_DURATION, FRAMING_HALF_ANGLE_DEG, HISTORY_CAP,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VisualError {
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("zoom factor must be positive, got {0}")]
    NonPositiveZoom(f64),
    #[error("already at the top level")]
    AtRoot,
    #[error("current node has no children")]
    NoChildren,
    #[error("nothing to go back to")]
    EmptyHistory,
}
