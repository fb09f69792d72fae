//! The read-only state document served to clients on every poll.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::narrative::SceneKind;

use super::camera::{CameraState, CuttingPlaneState};

fn arr(v: Vector3<f64>) -> [f64; 3] {
    [v.x, v.y, v.z]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CameraSnapshot {
    pub target: [f64; 3],
    pub distance: f64,
    pub yaw: f64,
    pub pitch: f64,
    pub roll: f64,
    pub view_direction: [f64; 3],
    pub position: [f64; 3],
}

impl From<&CameraState> for CameraSnapshot {
    fn from(c: &CameraState) -> Self {
        Self {
            target: arr(c.target),
            distance: c.distance,
            yaw: c.yaw,
            pitch: c.pitch,
            roll: c.roll,
            view_direction: arr(c.view_direction()),
            position: arr(c.position()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaneSnapshot {
    pub normal: [f64; 3],
    pub offset: f64,
    pub enabled: bool,
}

impl From<&CuttingPlaneState> for PlaneSnapshot {
    fn from(p: &CuttingPlaneState) -> Self {
        Self {
            normal: arr(p.normal),
            offset: p.offset,
            enabled: p.enabled,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelSnapshot {
    pub id: String,
    pub name: String,
    pub label: String,
    pub center: [f64; 3],
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LogEntry {
    pub speaker: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSnapshot {
    pub model_name: String,
    /// Committed camera: where the camera ends once queued animation finishes.
    pub camera: CameraSnapshot,
    /// Camera as currently shown, mid-animation.
    pub view: CameraSnapshot,
    pub plane: PlaneSnapshot,
    pub view_plane: PlaneSnapshot,
    pub current_node: String,
    pub scale_level: usize,
    pub pending_options: Vec<String>,
    pub current_scene: Option<SceneKind>,
    pub current_speech: Option<String>,
    pub queued_scenes: usize,
    pub highlight: Vec<String>,
    /// Current node first, then its children.
    pub labels: Vec<LabelSnapshot>,
    pub awaiting_detail: bool,
    pub animating: bool,
    pub history_depth: usize,
    pub conversation_tail: Vec<LogEntry>,
}

pub(crate) fn label_for(node: &crate::scene::SceneNode) -> LabelSnapshot {
    LabelSnapshot {
        id: node.id.to_string(),
        name: node.name.clone(),
        label: node.label.clone(),
        center: arr(node.bounding_sphere.center),
        radius: node.bounding_sphere.radius,
    }
}
