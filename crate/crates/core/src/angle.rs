//! Directions in the projective line, stored in the chart (−π/2, π/2].

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::linalg::{unit, Vec2};

/// A line direction; `θ` and `θ + π` are the same element of PR¹.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProjectiveAngle(f64);

/// Reduce any real to the chart (−π/2, π/2].
pub fn normalize(theta: f64) -> f64 {
    let mut r = theta.rem_euclid(PI);
    if r > FRAC_PI_2 {
        r -= PI;
    }
    // rem_euclid lands on [0, π); the only value mapping to −π/2 is π/2 itself
    if r <= -FRAC_PI_2 {
        r += PI;
    }
    r
}

/// Distance between two directions in PR¹, in [0, π/2].
pub fn distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(PI);
    d.min(PI - d)
}

/// Signed difference `a − b` reduced to (−π/2, π/2].
pub fn signed_diff(a: f64, b: f64) -> f64 {
    normalize(a - b)
}

impl ProjectiveAngle {
    pub fn new(theta: f64) -> Self {
        ProjectiveAngle(normalize(theta))
    }

    pub const VERTICAL: ProjectiveAngle = ProjectiveAngle(FRAC_PI_2);
    pub const HORIZONTAL: ProjectiveAngle = ProjectiveAngle(0.0);

    /// Direction of a nonzero vector; `None` for the zero vector.
    pub fn from_vector(v: &Vec2) -> Option<Self> {
        if v.x == 0.0 && v.y == 0.0 || !v.x.is_finite() || !v.y.is_finite() {
            return None;
        }
        Some(Self::new(v.y.atan2(v.x)))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn unit(self) -> Vec2 {
        unit(self.0)
    }

    pub fn perpendicular(self) -> Self {
        Self::new(self.0 + FRAC_PI_2)
    }

    pub fn distance(self, other: Self) -> f64 {
        distance(self.0, other.0)
    }

    /// Open negative quadrant (−π/2, 0).
    pub fn in_q2(self) -> bool {
        self.0 > -FRAC_PI_2 && self.0 < 0.0
    }

    /// Closed negative quadrant, where the vertical direction counts as −π/2.
    pub fn in_closed_q2(self) -> bool {
        self.0 <= 0.0 || self.0 == FRAC_PI_2
    }

    /// Open positive quadrant (0, π/2).
    pub fn in_q1(self) -> bool {
        self.0 > 0.0 && self.0 < FRAC_PI_2
    }
}

impl fmt::Display for ProjectiveAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.12}", self.0)
    }
}

impl From<ProjectiveAngle> for f64 {
    fn from(a: ProjectiveAngle) -> f64 {
        a.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vec2;
    use proptest::prelude::*;

    #[test]
    fn chart_endpoints() {
        assert_eq!(normalize(FRAC_PI_2), FRAC_PI_2);
        assert_eq!(normalize(-FRAC_PI_2), FRAC_PI_2);
        assert_eq!(normalize(0.0), 0.0);
        assert!((normalize(PI) - 0.0).abs() < 1e-15);
        assert!(ProjectiveAngle::new(-0.3).in_q2());
        assert!(!ProjectiveAngle::new(0.3).in_q2());
        assert!(!ProjectiveAngle::VERTICAL.in_q2());
        assert!(ProjectiveAngle::VERTICAL.in_closed_q2());
    }

    #[test]
    fn vector_direction_ignores_sign() {
        let a = ProjectiveAngle::from_vector(&vec2(1.0, 1.0)).unwrap();
        let b = ProjectiveAngle::from_vector(&vec2(-1.0, -1.0)).unwrap();
        assert!(a.distance(b) < 1e-15);
        assert!(ProjectiveAngle::from_vector(&vec2(0.0, 0.0)).is_none());
    }

    proptest! {
        #[test]
        fn normalize_lands_in_chart(t in -100.0f64..100.0) {
            let r = normalize(t);
            prop_assert!(r > -FRAC_PI_2 && r <= FRAC_PI_2);
            prop_assert!(distance(r, t) < 1e-12);
        }

        #[test]
        fn distance_is_a_metric_on_the_circle(a in -4.0f64..4.0, b in -4.0f64..4.0, c in -4.0f64..4.0) {
            prop_assert!((distance(a, b) - distance(b, a)).abs() < 1e-15);
            prop_assert!(distance(a, b) <= FRAC_PI_2 + 1e-15);
            prop_assert!(distance(a, c) <= distance(a, b) + distance(b, c) + 1e-12);
        }
    }
}
