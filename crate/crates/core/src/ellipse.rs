//! Ellipses stored by center, semi-axes and major-axis direction, and the
//! dilation maps that send an ellipse onto the unit disk.

use std::f64::consts::{FRAC_PI_2, TAU};

use serde::{Deserialize, Serialize};

use crate::affine::AffineContraction;
use crate::angle::ProjectiveAngle;
use crate::error::{LabError, Result};
use crate::linalg::{rotation, vec2, Mat2, Svd2, Vec2};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ellipse {
    pub center: Vec2,
    pub semi_major: f64,
    pub semi_minor: f64,
    /// Direction of the major axis.
    pub orientation: ProjectiveAngle,
}

impl Ellipse {
    /// Semi-axes are swapped (and the orientation turned) if given in the wrong order.
    pub fn new(center: Vec2, semi_major: f64, semi_minor: f64, orientation: ProjectiveAngle) -> Result<Self> {
        if !(semi_major > 0.0 && semi_minor > 0.0) || !semi_major.is_finite() || !semi_minor.is_finite() {
            return Err(LabError::InvalidArgument(format!(
                "ellipse semi-axes must be positive, got {semi_major}, {semi_minor}"
            )));
        }
        if semi_minor > semi_major {
            return Ok(Ellipse { center, semi_major: semi_minor, semi_minor: semi_major, orientation: orientation.perpendicular() });
        }
        Ok(Ellipse { center, semi_major, semi_minor, orientation })
    }

    pub fn unit_disk() -> Self {
        Self::circle(vec2(0.0, 0.0), 1.0)
    }

    /// Circles carry a vertical orientation unless told otherwise.
    pub fn circle(center: Vec2, radius: f64) -> Self {
        Ellipse { center, semi_major: radius, semi_minor: radius, orientation: ProjectiveAngle::VERTICAL }
    }

    /// Image of the unit disk under an affine map.
    pub fn image_of_disk(map: &AffineContraction) -> Result<Self> {
        Self::image_of_disk_with_det(map, crate::linalg::det(&map.matrix))
    }

    pub fn image_of_disk_with_det(map: &AffineContraction, det: f64) -> Result<Self> {
        if det == 0.0 {
            return Err(LabError::SingularMatrix);
        }
        let svd = Svd2::with_det(&map.matrix, det);
        Ellipse::new(map.offset, svd.sigma1, svd.sigma2, ProjectiveAngle::new(svd.left))
    }

    pub fn major_axis(&self) -> Vec2 {
        self.orientation.unit()
    }

    /// Points "clockwise" from the major axis, so that `(major, minor)` is the
    /// frame sent to `(vertical, horizontal)` by a rotation.
    pub fn minor_axis(&self) -> Vec2 {
        let (s, c) = self.orientation.value().sin_cos();
        vec2(s, -c)
    }

    pub fn is_circle(&self) -> bool {
        (self.semi_major - self.semi_minor).abs() <= 1e-14 * self.semi_major
    }

    pub fn area(&self) -> f64 {
        std::f64::consts::PI * self.semi_major * self.semi_minor
    }

    /// `≤ 1` exactly on the closed ellipse.
    pub fn quadratic_form(&self, p: &Vec2) -> f64 {
        let q = p - self.center;
        let u = q.dot(&self.major_axis()) / self.semi_major;
        let v = q.dot(&self.minor_axis()) / self.semi_minor;
        u * u + v * v
    }

    pub fn contains(&self, p: &Vec2) -> bool {
        self.quadratic_form(p) <= 1.0
    }

    /// Boundary parametrisation; `s = 0` is the forward end of the major axis.
    pub fn boundary_point(&self, s: f64) -> Vec2 {
        let (sn, cs) = s.sin_cos();
        self.center + self.major_axis() * (self.semi_major * cs) + self.minor_axis() * (self.semi_minor * sn)
    }

    pub fn boundary(&self, n: usize) -> Vec<Vec2> {
        (0..n).map(|i| self.boundary_point(TAU * i as f64 / n as f64)).collect()
    }

    /// Linear part of the map taking the unit disk onto this ellipse (major axis to `e1`).
    pub fn frame_matrix(&self) -> Mat2 {
        let a = self.major_axis() * self.semi_major;
        let b = self.minor_axis() * self.semi_minor;
        Mat2::new(a.x, b.x, a.y, b.y)
    }

    /// Linear part of `D_Y`: the major axis goes to the vertical diameter, the
    /// minor axis to the horizontal one.
    pub fn dilation_matrix(&self) -> Mat2 {
        Mat2::new(1.0 / self.semi_minor, 0.0, 0.0, 1.0 / self.semi_major)
            * rotation(FRAC_PI_2 - self.orientation.value())
    }

    pub fn dilate(&self, p: &Vec2) -> Vec2 {
        let q = p - self.center;
        vec2(q.dot(&self.minor_axis()) / self.semi_minor, q.dot(&self.major_axis()) / self.semi_major)
    }

    pub fn undilate(&self, z: &Vec2) -> Vec2 {
        self.center + self.minor_axis() * (z.x * self.semi_minor) + self.major_axis() * (z.y * self.semi_major)
    }

    /// Image of the ellipse under an affine map.
    ///
    /// For near-circular images the major direction is not determined by the
    /// SVD; the image of this ellipse's own major axis is used instead.
    pub fn transformed(&self, map: &AffineContraction) -> Result<Self> {
        let m = map.matrix * self.frame_matrix();
        let det = crate::linalg::det(&m);
        if det == 0.0 {
            return Err(LabError::SingularMatrix);
        }
        let svd = Svd2::with_det(&m, det);
        let center = map.apply(&self.center);
        let mut orientation = ProjectiveAngle::new(svd.left);
        if (svd.sigma1 - svd.sigma2) <= 1e-12 * svd.sigma1 {
            if let Some(o) = ProjectiveAngle::from_vector(&(map.matrix * self.major_axis())) {
                orientation = o;
            }
        }
        Ellipse::new(center, svd.sigma1, svd.sigma2, orientation)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Ellipse { semi_major: self.semi_major * factor, semi_minor: self.semi_minor * factor, ..*self }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Ellipse {
        Ellipse::new(vec2(0.2, -0.1), 0.5, 0.2, ProjectiveAngle::new(0.7)).unwrap()
    }

    #[test]
    fn boundary_lies_on_the_form() {
        let e = sample();
        for p in e.boundary(64) {
            assert!((e.quadratic_form(&p) - 1.0).abs() < 1e-13);
        }
        assert_eq!(e.quadratic_form(&e.center), 0.0);
    }

    #[test]
    fn dilation_sends_axes_to_coordinate_diameters() {
        let e = sample();
        let top = e.dilate(&(e.center + e.major_axis() * e.semi_major));
        let right = e.dilate(&(e.center + e.minor_axis() * e.semi_minor));
        assert!((top - vec2(0.0, 1.0)).norm() < 1e-14);
        assert!((right - vec2(1.0, 0.0)).norm() < 1e-14);
        let p = vec2(0.33, 0.05);
        assert!((e.dilation_matrix() * (p - e.center) - e.dilate(&p)).norm() < 1e-14);
        assert!((e.undilate(&e.dilate(&p)) - p).norm() < 1e-14);
        assert!(crate::linalg::det(&e.dilation_matrix()) > 0.0);
    }

    #[test]
    fn wrong_axis_order_is_repaired() {
        let e = Ellipse::new(vec2(0.0, 0.0), 0.1, 0.3, ProjectiveAngle::new(0.0)).unwrap();
        assert_eq!(e.semi_major, 0.3);
        assert!(e.orientation.distance(ProjectiveAngle::VERTICAL) < 1e-15);
        assert!(Ellipse::new(vec2(0.0, 0.0), 0.0, 0.3, ProjectiveAngle::new(0.0)).is_err());
    }

    #[test]
    fn transform_matches_pointwise_image() {
        let e = sample();
        let map = AffineContraction::new(Mat2::new(0.3, 0.1, 0.05, 0.25), vec2(-0.4, -0.4));
        let img = e.transformed(&map).unwrap();
        for p in e.boundary(64) {
            assert!((img.quadratic_form(&map.apply(&p)) - 1.0).abs() < 1e-12);
        }
    }
}
