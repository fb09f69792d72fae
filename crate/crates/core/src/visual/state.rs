use std::collections::VecDeque;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::router::{ScaleDirection, Transform};
use crate::scene::{BoundingSphere, NodeId, SceneTree};

use super::animation::{AnimationSpec, Keyframe, Pose};
use super::camera::{apply_transform, CameraState, CuttingPlaneState};
use super::VisualError;

pub const FLY_TO_DURATION: f64 = 2.0;
pub const CUTTING_SWEEP_DURATION: f64 = 3.0;
pub const HISTORY_CAP: usize = 64;
/// Half of the vertical field of view used when framing a bounding sphere.
pub const FRAMING_HALF_ANGLE_DEG: f64 = 30.0;
const CUTTING_SWEEP_STEPS: usize = 6;
const MIN_FRAMING_DISTANCE: f64 = 1e-3;

/// Camera distance at which a sphere of `radius` exactly fills the frame.
pub fn framing_distance(radius: f64) -> f64 {
    (radius / FRAMING_HALF_ANGLE_DEG.to_radians().sin()).max(MIN_FRAMING_DISTANCE)
}

pub fn framing_camera(from: &CameraState, sphere: &BoundingSphere) -> CameraState {
    CameraState {
        target: sphere.center,
        distance: framing_distance(sphere.radius),
        ..*from
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub camera: CameraState,
    pub plane: CuttingPlaneState,
    pub node: NodeId,
    pub scale_level: usize,
}

/// Headless view state of one session: where the camera is, the cutting
/// plane, which node is in focus and how we got here.
///
/// Every mutating operation records the previous state in a bounded history
/// so `return_back` can undo it exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct VisualState {
    tree: Arc<SceneTree>,
    pub camera: CameraState,
    pub plane: CuttingPlaneState,
    current_node: NodeId,
    scale_level: usize,
    history: VecDeque<HistoryEntry>,
}

impl VisualState {
    pub fn new(tree: Arc<SceneTree>) -> Self {
        let root = tree.root();
        let camera = framing_camera(
            &CameraState::looking_at(root.bounding_sphere.center, 1.0),
            &root.bounding_sphere,
        );
        let current_node = root.id.clone();
        Self {
            tree,
            camera,
            plane: CuttingPlaneState::default(),
            current_node,
            scale_level: 0,
            history: VecDeque::new(),
        }
    }

    pub fn tree(&self) -> &Arc<SceneTree> {
        &self.tree
    }

    pub fn current_node(&self) -> &NodeId {
        &self.current_node
    }

    pub fn scale_level(&self) -> usize {
        self.scale_level
    }

    pub fn history(&self) -> &VecDeque<HistoryEntry> {
        &self.history
    }

    pub fn pose(&self) -> Pose {
        Pose {
            camera: self.camera,
            plane: self.plane,
        }
    }

    fn snapshot(&self) -> HistoryEntry {
        HistoryEntry {
            camera: self.camera,
            plane: self.plane,
            node: self.current_node.clone(),
            scale_level: self.scale_level,
        }
    }

    pub fn push_history(&mut self) {
        if self.history.len() == HISTORY_CAP {
            self.history.pop_front();
        }
        let entry = self.snapshot();
        self.history.push_back(entry);
    }

    fn set_node(&mut self, node: &NodeId) -> Result<(), VisualError> {
        let depth = self
            .tree
            .depth(node.as_str())
            .map_err(|_| VisualError::UnknownNode(node.to_string()))?;
        self.current_node = node.clone();
        self.scale_level = depth;
        Ok(())
    }

    fn travel(&mut self, to: Pose, highlight: Vec<NodeId>, duration: f64) -> AnimationSpec {
        let mut anim = AnimationSpec::new(self.pose());
        if to != self.pose() {
            anim.push(Keyframe::new(to.camera, to.plane, highlight, duration));
        }
        self.camera = to.camera;
        self.plane = to.plane;
        anim
    }

    pub fn apply_transform(&mut self, t: &Transform) -> Result<AnimationSpec, VisualError> {
        let (camera, anim) = apply_transform(&self.camera, &self.plane, t)?;
        self.push_history();
        self.camera = camera;
        Ok(anim)
    }

    /// Retargets the camera to frame `node`'s bounding sphere.
    pub fn fly_to(&mut self, node: &str) -> Result<AnimationSpec, VisualError> {
        let target = self
            .tree
            .node(node)
            .ok_or_else(|| VisualError::UnknownNode(node.to_owned()))?;
        let camera = framing_camera(&self.camera, &target.bounding_sphere);
        let id = target.id.clone();
        self.push_history();
        self.set_node(&id)?;
        let plane = self.plane;
        Ok(self.travel(Pose { camera, plane }, Vec::new(), FLY_TO_DURATION))
    }

    /// Moves one level up to the parent, or down to the child whose
    /// bounding-sphere centre is nearest the camera.
    pub fn change_scale(
        &mut self,
        direction: ScaleDirection,
    ) -> Result<AnimationSpec, VisualError> {
        let tree = Arc::clone(&self.tree);
        let current = tree
            .node(self.current_node.as_str())
            .ok_or_else(|| VisualError::UnknownNode(self.current_node.to_string()))?;
        let next = match direction {
            ScaleDirection::Up => {
                if self.scale_level == 0 {
                    return Err(VisualError::AtRoot);
                }
                current.parent_id.clone().ok_or(VisualError::AtRoot)?
            }
            ScaleDirection::Down => {
                let eye = self.camera.position();
                current
                    .child_ids
                    .iter()
                    .filter_map(|c| tree.node(c.as_str()))
                    .map(|c| (c, (c.bounding_sphere.center - eye).norm()))
                    .fold(
                        None::<(&crate::scene::SceneNode, f64)>,
                        |best, (c, d)| match best {
                            Some((_, bd)) if bd <= d => best,
                            _ => Some((c, d)),
                        },
                    )
                    .map(|(c, _)| c.id.clone())
                    .ok_or(VisualError::NoChildren)?
            }
        };
        let sphere = tree
            .node(next.as_str())
            .map(|n| n.bounding_sphere)
            .unwrap_or(current.bounding_sphere);
        self.push_history();
        self.set_node(&next)?;
        let camera = framing_camera(&self.camera, &sphere);
        let plane = self.plane;
        Ok(self.travel(Pose { camera, plane }, Vec::new(), FLY_TO_DURATION))
    }

    /// Restores load-time defaults and clears the history.
    pub fn reset(&mut self) -> AnimationSpec {
        let fresh = Self::new(Arc::clone(&self.tree));
        let anim = self.travel(fresh.pose(), Vec::new(), FLY_TO_DURATION);
        *self = fresh;
        anim
    }

    pub fn return_back(&mut self) -> Result<AnimationSpec, VisualError> {
        let entry = self.history.pop_back().ok_or(VisualError::EmptyHistory)?;
        let to = Pose {
            camera: entry.camera,
            plane: entry.plane,
        };
        self.current_node = entry.node;
        self.scale_level = entry.scale_level;
        Ok(self.travel(to, Vec::new(), FLY_TO_DURATION))
    }

    /// Enables the plane along the view direction and sweeps it from the
    /// current node's sphere border to its centre.
    pub fn set_cutting_plane(&mut self) -> AnimationSpec {
        let node = self
            .tree
            .node(self.current_node.as_str())
            .expect("current node exists in tree");
        let radius = node.bounding_sphere.radius;
        let highlight = node.child_ids.clone();
        self.push_history();
        let sweep = cutting_sweep(self.pose(), radius, highlight);
        let end = sweep.end_pose();
        self.camera = end.camera;
        self.plane = end.plane;
        sweep
    }

    /// Commits the end pose of a scene built elsewhere, recording history.
    pub fn commit(&mut self, end: Pose, node: Option<&NodeId>) -> Result<(), VisualError> {
        self.push_history();
        if let Some(node) = node {
            self.set_node(node)?;
        }
        self.camera = end.camera;
        self.plane = end.plane;
        Ok(())
    }
}

/// Keyframes moving the plane from `radius` down to zero in equal steps.
pub fn cutting_sweep(start: Pose, radius: f64, highlight: Vec<NodeId>) -> AnimationSpec {
    let mut anim = AnimationSpec::new(start);
    let normal = start.camera.view_direction();
    let step = CUTTING_SWEEP_DURATION / CUTTING_SWEEP_STEPS as f64;
    for i in 0..CUTTING_SWEEP_STEPS {
        let frac = 1.0 - i as f64 / (CUTTING_SWEEP_STEPS - 1) as f64;
        let plane = CuttingPlaneState {
            normal,
            offset: radius * frac,
            enabled: true,
        };
        anim.push(Keyframe::new(start.camera, plane, highlight.clone(), step));
    }
    anim
}
