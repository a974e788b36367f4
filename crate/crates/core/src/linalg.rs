//! Small 2×2 linear algebra on top of nalgebra's fixed-size types.

use nalgebra::{Matrix2, Vector2};

pub type Vec2 = Vector2<f64>;
pub type Mat2 = Matrix2<f64>;

#[inline]
pub fn vec2(x: f64, y: f64) -> Vec2 {
    Vec2::new(x, y)
}

/// Counter-clockwise rotation by `angle`.
#[inline]
pub fn rotation(angle: f64) -> Mat2 {
    let (s, c) = angle.sin_cos();
    Mat2::new(c, -s, s, c)
}

/// Quarter turn counter-clockwise.
#[inline]
pub fn perp(v: &Vec2) -> Vec2 {
    vec2(-v.y, v.x)
}

#[inline]
pub fn unit(angle: f64) -> Vec2 {
    let (s, c) = angle.sin_cos();
    vec2(c, s)
}

#[inline]
pub fn det(m: &Mat2) -> f64 {
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
}

/// Adjugate; `adjugate(m) = det(m) · m⁻¹`, so it acts on directions like the inverse.
#[inline]
pub fn adjugate(m: &Mat2) -> Mat2 {
    Mat2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)])
}

pub fn inverse(m: &Mat2) -> Option<Mat2> {
    let d = det(m);
    let scale = m.abs().max();
    if d == 0.0 || !d.is_finite() || d.abs() <= 1e-300 * scale.max(1.0) {
        return None;
    }
    Some(adjugate(m) / d)
}

/// Closed-form singular value decomposition.
///
/// `m = R(left) · diag(sigma1, signed_sigma2) · R(right)` where `R` is a
/// counter-clockwise rotation. `sigma1 >= |signed_sigma2|`.
#[derive(Debug, Clone, Copy)]
pub struct Svd2 {
    pub sigma1: f64,
    pub sigma2: f64,
    pub signed_sigma2: f64,
    /// Angle of the first left singular vector (major axis of the image of the unit disk).
    pub left: f64,
    pub right: f64,
}

impl Svd2 {
    pub fn new(m: &Mat2) -> Self {
        Self::with_det(m, det(m))
    }

    /// Uses a separately tracked determinant for the small singular value; for
    /// long products the entrywise `ad - bc` loses most of its digits.
    pub fn with_det(m: &Mat2, det: f64) -> Self {
        let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
        let e = 0.5 * (a + d);
        let f = 0.5 * (a - d);
        let g = 0.5 * (c + b);
        let h = 0.5 * (c - b);
        let q = e.hypot(h);
        let r = f.hypot(g);
        let sigma1 = q + r;
        let a1 = g.atan2(f);
        let a2 = h.atan2(e);
        let signed_sigma2 = if sigma1 > 0.0 { det / sigma1 } else { 0.0 };
        Svd2 {
            sigma1,
            sigma2: signed_sigma2.abs(),
            signed_sigma2,
            left: 0.5 * (a2 + a1),
            right: 0.5 * (a2 - a1),
        }
    }

    pub fn u1(&self) -> Vec2 {
        unit(self.left)
    }

    pub fn u2(&self) -> Vec2 {
        perp(&self.u1())
    }

    /// Right singular vector paired with `sigma1`.
    pub fn v1(&self) -> Vec2 {
        let (s, c) = self.right.sin_cos();
        vec2(c, -s)
    }

    pub fn v2(&self) -> Vec2 {
        let (s, c) = self.right.sin_cos();
        vec2(s, c)
    }

    pub fn reconstruct(&self) -> Mat2 {
        rotation(self.left) * Mat2::new(self.sigma1, 0.0, 0.0, self.signed_sigma2) * rotation(self.right)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::SymmetricEigen;

    fn mats() -> Vec<Mat2> {
        vec![
            Mat2::new(0.30, 0.10, 0.05, 0.25),
            Mat2::new(0.25, 0.08, 0.10, 0.30),
            Mat2::new(0.8, 0.0, 0.0, 1.0 / 3.0),
            Mat2::new(-0.2, 0.7, 0.4, 0.1),
            Mat2::new(1.0, 2.0, 3.0, 4.0),
            Mat2::new(0.5, 0.5, 0.5, 0.5 + 1e-9),
        ]
    }

    #[test]
    fn svd_reconstructs() {
        for m in mats() {
            let s = Svd2::new(&m);
            assert!((s.reconstruct() - m).abs().max() < 1e-14, "{m}");
            assert!(s.sigma1 >= s.sigma2);
            assert!((s.u1().dot(&s.u2())).abs() < 1e-15);
            assert!((m * s.v1() - s.u1() * s.sigma1).norm() < 1e-14);
            assert!((m * s.v2() - s.u2() * s.signed_sigma2).norm() < 1e-14);
        }
    }

    #[test]
    fn singular_values_match_eigenvalues_of_gram_matrix() {
        for m in mats() {
            let s = Svd2::new(&m);
            let eig = SymmetricEigen::new(m.transpose() * m);
            let mut ev: Vec<f64> = eig.eigenvalues.iter().map(|x| x.max(0.0).sqrt()).collect();
            ev.sort_by(|a, b| b.partial_cmp(a).unwrap());
            assert!((s.sigma1 - ev[0]).abs() < 1e-12);
            assert!((s.sigma2 - ev[1]).abs() < 1e-9);
        }
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        assert!(inverse(&Mat2::new(1.0, 2.0, 2.0, 4.0)).is_none());
        let m = Mat2::new(0.3, 0.1, 0.05, 0.25);
        let inv = inverse(&m).unwrap();
        assert!((inv * m - Mat2::identity()).abs().max() < 1e-14);
    }
}
