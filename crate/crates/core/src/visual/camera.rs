//! Orbit camera and cutting plane.
//!
//! The camera orbits a target point. Its orientation is composed from three
//! angles in degrees: yaw about world up (+Y), then pitch about the camera's
//! right axis, then roll about the view axis. With all angles zero the camera
//! looks along (0, 0, -1). Positive yaw swings the camera towards +X so the
//! object's right-hand side comes into view; positive pitch raises the camera
//! so it looks down onto the object.

use nalgebra::{Rotation3, Vector3};
use serde::{Deserialize, Serialize};

use crate::router::Transform;

use super::animation::{AnimationSpec, Keyframe, Pose};
use super::VisualError;

pub const TRANSFORM_DURATION: f64 = 1.0;

pub fn initial_view_direction() -> Vector3<f64> {
    Vector3::new(0.0, 0.0, -1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CameraState {
    pub target: Vector3<f64>,
    pub distance: f64,
    pub yaw: f64,
    pub pitch: f64,
    pub roll: f64,
}

impl CameraState {
    pub fn looking_at(target: Vector3<f64>, distance: f64) -> Self {
        Self {
            target,
            distance,
            yaw: 0.0,
            pitch: 0.0,
            roll: 0.0,
        }
    }

    pub fn rotation(&self) -> Rotation3<f64> {
        Rotation3::from_axis_angle(&Vector3::y_axis(), self.yaw.to_radians())
            * Rotation3::from_axis_angle(&Vector3::x_axis(), (-self.pitch).to_radians())
            * Rotation3::from_axis_angle(&Vector3::z_axis(), self.roll.to_radians())
    }

    pub fn view_direction(&self) -> Vector3<f64> {
        self.rotation() * initial_view_direction()
    }

    pub fn up(&self) -> Vector3<f64> {
        self.rotation() * Vector3::y()
    }

    pub fn position(&self) -> Vector3<f64> {
        self.target - self.view_direction() * self.distance
    }

    pub fn lerp(&self, to: &Self, t: f64) -> Self {
        let mix = |a: f64, b: f64| a + (b - a) * t;
        Self {
            target: self.target + (to.target - self.target) * t,
            distance: mix(self.distance, to.distance),
            yaw: mix(self.yaw, to.yaw),
            pitch: mix(self.pitch, to.pitch),
            roll: mix(self.roll, to.roll),
        }
    }

    pub fn with_yaw_offset(mut self, degrees: f64) -> Self {
        self.yaw += degrees;
        self
    }
}

/// Clip plane anchored at the focused node's bounding-sphere centre.
///
/// The plane sits at `center - offset * normal`; geometry between the camera
/// and the plane is clipped. With the normal along the view direction, an
/// offset equal to the sphere radius puts the plane on the near border
/// (nothing clipped) and an offset of zero cuts through the centre.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CuttingPlaneState {
    pub normal: Vector3<f64>,
    pub offset: f64,
    pub enabled: bool,
}

impl Default for CuttingPlaneState {
    fn default() -> Self {
        Self {
            normal: initial_view_direction(),
            offset: 0.0,
            enabled: false,
        }
    }
}

impl CuttingPlaneState {
    pub fn at_border(view: Vector3<f64>, radius: f64) -> Self {
        Self {
            normal: view.normalize(),
            offset: radius,
            enabled: true,
        }
    }
}

/// Orbit and zoom the camera. Distance is divided by the zoom factor and the
/// angles are added to the current orbit angles.
pub fn apply_transform(
    camera: &CameraState,
    plane: &CuttingPlaneState,
    t: &Transform,
) -> Result<(CameraState, AnimationSpec), VisualError> {
    if !t.zoom_factor.is_finite() || t.zoom_factor <= 0.0 {
        return Err(VisualError::NonPositiveZoom(t.zoom_factor));
    }
    let next = CameraState {
        target: camera.target,
        distance: camera.distance / t.zoom_factor,
        yaw: camera.yaw + t.yaw,
        pitch: camera.pitch + t.pitch,
        roll: camera.roll + t.roll,
    };
    let mut anim = AnimationSpec::new(Pose {
        camera: *camera,
        plane: *plane,
    });
    if next != *camera {
        anim.push(Keyframe::new(next, *plane, Vec::new(), TRANSFORM_DURATION));
    }
    Ok((next, anim))
}
