//! Pinhole camera: look-at placement, perspective projection, viewport
//! mapping.

use nalgebra::{Point3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Pinhole camera with a vertical field of view and near/far clip depths.
///
/// View space is right-handed with the camera looking along `forward`;
/// depth is the distance along `forward`, positive in front. Pixel
/// coordinates put the origin at the top-left corner, x right, y down,
/// with pixel centers at half-integer positions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Camera {
    pub position: Point3<f64>,
    pub target: Point3<f64>,
    pub fov_y_degrees: f64,
    pub near: f64,
    pub far: f64,
    pub width: u32,
    pub height: u32,
    // Orthonormal basis derived from (position, target, up).
    right: Vector3<f64>,
    up: Vector3<f64>,
    forward: Vector3<f64>,
}

/// Result of projecting an unclipped point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectedPoint {
    /// Pixel coordinates; may fall outside the image for points outside
    /// the field of view.
    pub x: f64,
    pub y: f64,
    /// View-space depth along the camera forward axis.
    pub depth: f64,
}

impl Camera {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        position: Point3<f64>,
        target: Point3<f64>,
        up_hint: Vector3<f64>,
        fov_y_degrees: f64,
        near: f64,
        far: f64,
        width: u32,
        height: u32,
    ) -> Result<Camera> {
        if !(near > 0.0 && near < far) {
            return Err(Error::InvalidArgument(format!(
                "need 0 < near < far, got near {near} far {far}"
            )));
        }
        if !(fov_y_degrees > 0.0 && fov_y_degrees < 180.0) {
            return Err(Error::InvalidArgument(format!(
                "field of view must be in (0, 180) degrees, got {fov_y_degrees}"
            )));
        }
        if width == 0 || height == 0 {
            return Err(Error::InvalidArgument(
                "image dimensions must be at least 1 pixel".into(),
            ));
        }
        let gaze = target - position;
        if gaze.norm_squared() == 0.0 {
            return Err(Error::InvalidArgument(
                "camera position and target coincide".into(),
            ));
        }
        let forward = gaze.normalize();
        let right = forward.cross(&up_hint);
        if right.norm_squared() < 1e-12 {
            return Err(Error::InvalidArgument(
                "up vector is parallel to the view direction".into(),
            ));
        }
        let right = right.normalize();
        let up = right.cross(&forward);
        Ok(Camera {
            position,
            target,
            fov_y_degrees,
            near,
            far,
            width,
            height,
            right,
            up,
            forward,
        })
    }

    pub fn aspect(&self) -> f64 {
        self.width as f64 / self.height as f64
    }

    fn tan_half_fov(&self) -> f64 {
        (self.fov_y_degrees.to_radians() / 2.0).tan()
    }

    /// World point in camera coordinates: (right, up, depth).
    pub fn view_coords(&self, p: &Point3<f64>) -> Vector3<f64> {
        let rel = p - self.position;
        Vector3::new(rel.dot(&self.right), rel.dot(&self.up), rel.dot(&self.forward))
    }

    /// Maps view coordinates to pixel coordinates (no clipping).
    pub fn pixel_from_view(&self, view: &Vector3<f64>) -> (f64, f64) {
        let tan_half = self.tan_half_fov();
        let ndc_x = view.x / (view.z * tan_half * self.aspect());
        let ndc_y = view.y / (view.z * tan_half);
        let x = (ndc_x + 1.0) * 0.5 * self.width as f64;
        let y = (1.0 - ndc_y) * 0.5 * self.height as f64;
        (x, y)
    }

    /// Perspective projection. Returns `None` ("clipped") when the view
    /// depth falls outside the open interval `(near, far)`; points outside
    /// the lateral field of view still project, to off-image coordinates.
    pub fn project(&self, p: &Point3<f64>) -> Option<ProjectedPoint> {
        let view = self.view_coords(p);
        if view.z <= self.near || view.z >= self.far {
            return None;
        }
        let (x, y) = self.pixel_from_view(&view);
        Some(ProjectedPoint { x, y, depth: view.z })
    }

    /// World-space corners of the view rectangle at the given view depth,
    /// in (+x,+y), (-x,+y), (-x,-y), (+x,-y) view order.
    pub fn frustum_corners_at(&self, depth: f64) -> [Point3<f64>; 4] {
        let center = self.position + self.forward * depth;
        let half_h = depth * self.tan_half_fov();
        let half_w = half_h * self.aspect();
        [
            center + self.right * half_w + self.up * half_h,
            center - self.right * half_w + self.up * half_h,
            center - self.right * half_w - self.up * half_h,
            center + self.right * half_w - self.up * half_h,
        ]
    }

    /// Pixels per world unit for geometry at the given view depth.
    pub fn pixels_per_unit_at(&self, depth: f64) -> f64 {
        self.height as f64 / (2.0 * depth * self.tan_half_fov())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simple_camera(fov: f64, width: u32, height: u32) -> Camera {
        Camera::new(
            Point3::origin(),
            Point3::new(0.0, 0.0, -1.0),
            Vector3::y(),
            fov,
            0.1,
            100.0,
            width,
            height,
        )
        .unwrap()
    }

    #[test]
    fn optical_axis_hits_image_center() {
        let cam = simple_camera(60.0, 640, 480);
        let p = cam.project(&Point3::new(0.0, 0.0, -50.0)).unwrap();
        assert!((p.x - 320.0).abs() < 0.5);
        assert!((p.y - 240.0).abs() < 0.5);
        assert!((p.depth - 50.0).abs() < 1e-12);
    }

    #[test]
    fn point_behind_camera_is_clipped() {
        let cam = simple_camera(60.0, 640, 480);
        assert!(cam.project(&Point3::new(0.0, 0.0, 5.0)).is_none());
    }

    #[test]
    fn near_far_bounds_are_exclusive() {
        let cam = simple_camera(60.0, 640, 480);
        assert!(cam.project(&Point3::new(0.0, 0.0, -0.05)).is_none());
        assert!(cam.project(&Point3::new(0.0, 0.0, -0.1)).is_none());
        assert!(cam.project(&Point3::new(0.0, 0.0, -100.0)).is_none());
        assert!(cam.project(&Point3::new(0.0, 0.0, -99.9)).is_some());
    }

    #[test]
    fn fov_edge_projects_to_image_edge() {
        // At 90 degrees on a square image the half-angle is 45 degrees, so
        // a point offset by its own depth lands exactly on the right edge.
        let cam = simple_camera(90.0, 256, 256);
        let d = 10.0;
        let p = cam
            .project(&Point3::new(d * 45.0f64.to_radians().tan(), 0.0, -d))
            .unwrap();
        assert!((p.x - 256.0).abs() < 1e-9);
        // And the mirrored point lands on the left edge.
        let q = cam.project(&Point3::new(-d, 0.0, -d)).unwrap();
        assert!(q.x.abs() < 1e-9);
    }

    #[test]
    fn y_axis_points_down_in_pixels() {
        let cam = simple_camera(60.0, 640, 480);
        let above = cam.project(&Point3::new(0.0, 1.0, -10.0)).unwrap();
        let below = cam.project(&Point3::new(0.0, -1.0, -10.0)).unwrap();
        assert!(above.y < 240.0);
        assert!(below.y > 240.0);
    }

    #[test]
    fn invalid_parameters_rejected() {
        let origin = Point3::origin();
        let t = Point3::new(0.0, 0.0, -1.0);
        let up = Vector3::y();
        assert!(Camera::new(origin, t, up, 60.0, 1.0, 0.5, 64, 64).is_err());
        assert!(Camera::new(origin, t, up, 0.0, 0.1, 10.0, 64, 64).is_err());
        assert!(Camera::new(origin, t, up, 190.0, 0.1, 10.0, 64, 64).is_err());
        assert!(Camera::new(origin, t, up, 60.0, 0.1, 10.0, 0, 64).is_err());
        assert!(Camera::new(origin, origin, up, 60.0, 0.1, 10.0, 64, 64).is_err());
        assert!(Camera::new(origin, t, Vector3::z(), 60.0, 0.1, 10.0, 64, 64).is_err());
    }

    #[test]
    fn frustum_corners_match_projection() {
        let cam = Camera::new(
            Point3::new(1.0, 3.0, 8.0),
            Point3::new(0.0, 1.0, 0.0),
            Vector3::y(),
            55.0,
            0.1,
            100.0,
            320,
            240,
        )
        .unwrap();
        // Corners at depth d sit just inside the frustum; nudged toward the
        // axis they project within the image, nudged outward they do not.
        for corner in cam.frustum_corners_at(12.0) {
            let view = cam.view_coords(&corner);
            let (x, y) = cam.pixel_from_view(&view);
            assert!((x - 0.0).abs() < 1e-6 || (x - 320.0).abs() < 1e-6);
            assert!((y - 0.0).abs() < 1e-6 || (y - 240.0).abs() < 1e-6);
        }
    }
}
