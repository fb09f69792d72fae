//! Scene construction: turning a node into a narrated camera move.

use serde::{Deserialize, Serialize};

use crate::scene::{NodeId, SceneNode, SceneTree};
use crate::visual::{
    cutting_sweep, framing_camera, AnimationSpec, CuttingPlaneState, Keyframe, Pose,
    FLY_TO_DURATION,
};

use super::timeline::Timeline;
use super::NarrativeError;

/// Yaw added by the slow turn that follows a Focus or Overview move.
pub const SLOW_TURN_DEGREES: f64 = 15.0;
pub const SLOW_TURN_DURATION: f64 = 3.0;
/// Gentle rotation shown while a speech-only scene plays.
pub const IDLE_TURN_DEGREES: f64 = 10.0;
pub const IDLE_TURN_DURATION: f64 = 4.0;
/// Close-up distance as a fraction of the node's bounding radius.
pub const FOCUS_DISTANCE_FRACTION: f64 = 0.25;
const MIN_FOCUS_DISTANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SceneKind {
    Focus,
    Overview,
    CuttingPlane,
    SpeechOnly,
}

impl SceneKind {
    pub fn needs_target(self) -> bool {
        !matches!(self, SceneKind::SpeechOnly)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub kind: SceneKind,
    pub target_node_id: Option<NodeId>,
    pub speech: String,
    pub animation: AnimationSpec,
    pub speech_done: bool,
    pub animation_done: bool,
}

impl Scene {
    pub fn new(
        kind: SceneKind,
        target: Option<NodeId>,
        speech: impl Into<String>,
        animation: AnimationSpec,
    ) -> Result<Self, NarrativeError> {
        if kind.needs_target() && target.is_none() {
            return Err(NarrativeError::MissingTarget(kind));
        }
        Ok(Self {
            kind,
            target_node_id: target,
            speech: speech.into(),
            animation,
            speech_done: false,
            animation_done: false,
        })
    }

    pub fn is_complete(&self) -> bool {
        self.speech_done && self.animation_done
    }
}

/// Builds a scene starting from `from`. `speech` overrides the node
/// description as narration.
pub fn build_scene(
    kind: SceneKind,
    node: Option<&str>,
    tree: &SceneTree,
    from: Pose,
    speech: Option<&str>,
) -> Result<Scene, NarrativeError> {
    let node = match node {
        Some(id) => Some(
            tree.node(id)
                .ok_or_else(|| NarrativeError::UnknownNode(id.to_owned()))?,
        ),
        None if kind.needs_target() => return Err(NarrativeError::MissingTarget(kind)),
        None => None,
    };
    let speech = speech
        .map(str::to_owned)
        .or_else(|| node.map(|n| n.description.clone()))
        .unwrap_or_default();

    let animation = match (kind, node) {
        (SceneKind::Focus, Some(n)) => focus_animation(n, from)?,
        (SceneKind::Overview, Some(n)) => overview_animation(n, from),
        (SceneKind::CuttingPlane, Some(n)) => cutting_animation(n, from),
        _ => idle_animation(from),
    };
    let target = match kind {
        SceneKind::SpeechOnly => None,
        _ => node.map(|n| n.id.clone()),
    };
    Scene::new(kind, target, speech, animation)
}

fn slow_turn(anim: &mut AnimationSpec, highlight: Vec<NodeId>, degrees: f64, duration: f64) {
    let end = anim.end_pose();
    anim.push(Keyframe::new(
        end.camera.with_yaw_offset(degrees),
        end.plane,
        highlight,
        duration,
    ));
}

/// Approaches the instance nearest the camera, then turns slowly around it.
fn focus_animation(node: &SceneNode, from: Pose) -> Result<AnimationSpec, NarrativeError> {
    if node.instance_count == 0 {
        return Err(NarrativeError::NoInstances(node.id.to_string()));
    }
    let eye = from.camera.position();
    let target = node
        .instances
        .iter()
        .map(|i| i.position)
        .min_by(|a, b| (a - eye).norm().total_cmp(&(b - eye).norm()))
        .unwrap_or(node.bounding_sphere.center);
    let mut camera = from.camera;
    camera.target = target;
    camera.distance =
        (node.bounding_sphere.radius * FOCUS_DISTANCE_FRACTION).max(MIN_FOCUS_DISTANCE);

    let highlight = vec![node.id.clone()];
    let mut anim = AnimationSpec::new(from);
    anim.push(Keyframe::new(
        camera,
        from.plane,
        highlight.clone(),
        FLY_TO_DURATION,
    ));
    slow_turn(&mut anim, highlight, SLOW_TURN_DEGREES, SLOW_TURN_DURATION);
    Ok(anim)
}

/// Frames the bounding sphere, parks the plane on its border and highlights
/// the children.
fn overview_animation(node: &SceneNode, from: Pose) -> AnimationSpec {
    let camera = framing_camera(&from.camera, &node.bounding_sphere);
    let plane = CuttingPlaneState::at_border(camera.view_direction(), node.bounding_sphere.radius);
    let highlight = node.child_ids.clone();
    let mut anim = AnimationSpec::new(from);
    anim.push(Keyframe::new(
        camera,
        plane,
        highlight.clone(),
        FLY_TO_DURATION,
    ));
    slow_turn(&mut anim, highlight, SLOW_TURN_DEGREES, SLOW_TURN_DURATION);
    anim
}

/// Frames the sphere when needed, then sweeps the plane into it.
fn cutting_animation(node: &SceneNode, from: Pose) -> AnimationSpec {
    let camera = framing_camera(&from.camera, &node.bounding_sphere);
    let highlight = node.child_ids.clone();
    let mut anim = AnimationSpec::new(from);
    if camera != from.camera {
        anim.push(Keyframe::new(
            camera,
            from.plane,
            highlight.clone(),
            FLY_TO_DURATION,
        ));
    }
    let start = anim.end_pose();
    anim.keyframes
        .extend(cutting_sweep(start, node.bounding_sphere.radius, highlight).keyframes);
    anim
}

/// Swings out by the idle angle and back, so the pose ends where it began.
fn idle_animation(from: Pose) -> AnimationSpec {
    let mut anim = AnimationSpec::new(from);
    slow_turn(
        &mut anim,
        Vec::new(),
        IDLE_TURN_DEGREES,
        IDLE_TURN_DURATION / 2.0,
    );
    anim.push(Keyframe::new(
        from.camera,
        from.plane,
        Vec::new(),
        IDLE_TURN_DURATION / 2.0,
    ));
    anim
}

/// Enqueues an Overview scene for internal nodes and a Focus scene for
/// leaves, starting from `from`. Returns the enqueued scene.
pub fn add_to_timeline(
    timeline: &mut Timeline,
    node: &str,
    tree: &SceneTree,
    from: Pose,
) -> Result<Scene, NarrativeError> {
    let n = tree
        .node(node)
        .ok_or_else(|| NarrativeError::UnknownNode(node.to_owned()))?;
    let kind = if n.is_leaf() {
        SceneKind::Focus
    } else {
        SceneKind::Overview
    };
    let scene = build_scene(kind, Some(node), tree, from, None)?;
    timeline.push(scene.clone());
    Ok(scene)
}
