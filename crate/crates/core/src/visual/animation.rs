//! Keyframed camera/plane animations and the player that ticks them.

use serde::{Deserialize, Serialize};

use crate::scene::NodeId;

use super::camera::{CameraState, CuttingPlaneState};

/// Slack for deciding an animation has reached its end under accumulated
/// floating-point tick error.
const END_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub camera: CameraState,
    pub plane: CuttingPlaneState,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Keyframe {
    pub camera: CameraState,
    pub plane: CuttingPlaneState,
    pub highlight: Vec<NodeId>,
    /// Seconds to travel from the previous pose to this one.
    pub duration: f64,
}

impl Keyframe {
    pub fn new(
        camera: CameraState,
        plane: CuttingPlaneState,
        highlight: Vec<NodeId>,
        duration: f64,
    ) -> Self {
        assert!(duration > 0.0, "keyframe duration must be positive");
        Self {
            camera,
            plane,
            highlight,
            duration,
        }
    }

    pub fn pose(&self) -> Pose {
        Pose {
            camera: self.camera,
            plane: self.plane,
        }
    }
}

/// An ordered keyframe track starting from a known pose. No keyframes means
/// a no-op animation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnimationSpec {
    pub start: Pose,
    pub keyframes: Vec<Keyframe>,
}

impl AnimationSpec {
    pub fn new(start: Pose) -> Self {
        Self {
            start,
            keyframes: Vec::new(),
        }
    }

    pub fn push(&mut self, keyframe: Keyframe) -> &mut Self {
        self.keyframes.push(keyframe);
        self
    }

    pub fn is_empty(&self) -> bool {
        self.keyframes.is_empty()
    }

    pub fn duration(&self) -> f64 {
        self.keyframes.iter().map(|k| k.duration).sum()
    }

    pub fn end_pose(&self) -> Pose {
        self.keyframes.last().map_or(self.start, Keyframe::pose)
    }

    /// Pose and highlight set at `elapsed` seconds, clamped to the track.
    pub fn sample(&self, elapsed: f64) -> (Pose, &[NodeId]) {
        let mut from = self.start;
        let mut remaining = elapsed.max(0.0);
        for (i, kf) in self.keyframes.iter().enumerate() {
            let last = i + 1 == self.keyframes.len();
            if remaining < kf.duration && !(last && remaining >= kf.duration - END_EPSILON) {
                let t = remaining / kf.duration;
                let plane = if t > 0.0 {
                    CuttingPlaneState {
                        offset: from.plane.offset + (kf.plane.offset - from.plane.offset) * t,
                        ..kf.plane
                    }
                } else {
                    from.plane
                };
                let pose = Pose {
                    camera: from.camera.lerp(&kf.camera, t),
                    plane,
                };
                return (pose, &kf.highlight);
            }
            remaining -= kf.duration;
            from = kf.pose();
        }
        let highlight = self
            .keyframes
            .last()
            .map_or(&[][..], |k| k.highlight.as_slice());
        (self.end_pose(), highlight)
    }
}

/// Plays one animation at a time and reports completion exactly once.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AnimationPlayer {
    track: Option<AnimationSpec>,
    elapsed: f64,
    finished: bool,
}

impl AnimationPlayer {
    pub fn play(&mut self, spec: AnimationSpec) {
        self.track = Some(spec);
        self.elapsed = 0.0;
        self.finished = false;
    }

    pub fn stop(&mut self) {
        *self = Self::default();
    }

    /// Whether an animation is loaded and has not yet signalled completion.
    pub fn is_active(&self) -> bool {
        self.track.is_some() && !self.finished
    }

    pub fn elapsed(&self) -> f64 {
        self.elapsed
    }

    pub fn track(&self) -> Option<&AnimationSpec> {
        self.track.as_ref()
    }

    /// Advances the clock; returns `true` on the tick that finishes the track.
    pub fn tick(&mut self, dt: f64) -> bool {
        let Some(track) = &self.track else {
            return false;
        };
        if self.finished {
            return false;
        }
        self.elapsed += dt;
        if self.elapsed >= track.duration() - END_EPSILON {
            self.finished = true;
            return true;
        }
        false
    }

    pub fn pose(&self) -> Option<Pose> {
        let track = self.track.as_ref()?;
        if self.finished {
            return Some(track.end_pose());
        }
        Some(track.sample(self.elapsed).0)
    }

    pub fn highlight(&self) -> &[NodeId] {
        match &self.track {
            Some(t) if self.finished => t.keyframes.last().map_or(&[], |k| &k.highlight),
            Some(t) => t.sample(self.elapsed).1,
            None => &[],
        }
    }
}
