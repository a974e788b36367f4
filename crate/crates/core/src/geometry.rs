//! Ellipse toolkit behind continuity in the direction parameter: angle
//! transfer under anisotropic scaling, rotated containment, composition of
//! dilations, and the continuity modulus of `θ ↦ ν(a, θ, t)`.

use std::f64::consts::{FRAC_PI_2, TAU};

use serde::Serialize;

use crate::affine::{axes_of, compose_letters, AffineContraction, CodeStream, IfsSystem};
use crate::angle::ProjectiveAngle;
use crate::ellipse::Ellipse;
use crate::error::{LabError, Result};
use crate::linalg::{vec2, Mat2, Vec2};
use crate::measure::prokhorov_auto;
use crate::projective::phi_reversed;
use crate::scenery::{frame_times, nu_frame, Sample};

/// `δφ = arctan((α₂/α₁) tan δθ)`: the angle a line at `δθ` from the weakly
/// contracted direction makes with its image direction after `A⁻¹`.
pub fn angle_transfer(alpha1: f64, alpha2: f64, dtheta: f64) -> Result<f64> {
    if !(alpha1 >= alpha2 && alpha2 > 0.0) {
        return Err(LabError::InvalidArgument(format!("need α₁ ≥ α₂ > 0, got {alpha1}, {alpha2}")));
    }
    if !(dtheta.abs() < FRAC_PI_2) {
        return Err(LabError::InvalidArgument(format!("|δθ| must be below π/2, got {dtheta}")));
    }
    Ok((alpha2 / alpha1 * dtheta.tan()).atan())
}

/// Sufficient condition for a `(1 − ε)`-shrunk copy turned by `θ` to fit:
/// `(α₁/α₂)|tan θ| < 1/(1 − ε) − 1`, strict.
pub fn containment_criterion(alpha1: f64, alpha2: f64, eps: f64, theta: f64) -> bool {
    alpha1 / alpha2 * theta.tan().abs() < 1.0 / (1.0 - eps) - 1.0
}

/// The pair from the rotated-containment statement: `Y` with semi-axes
/// `(α₁, α₂)` and vertical major axis, and `Z`, its `(1 − ε)` copy turned by `θ`.
pub fn rotated_pair(alpha1: f64, alpha2: f64, eps: f64, theta: f64) -> Result<(Ellipse, Ellipse)> {
    let c = vec2(0.0, 0.0);
    let y = Ellipse::new(c, alpha1, alpha2, ProjectiveAngle::VERTICAL)?;
    let z = Ellipse::new(c, (1.0 - eps) * alpha1, (1.0 - eps) * alpha2, ProjectiveAngle::new(FRAC_PI_2 + theta))?;
    Ok((y, z))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Containment {
    pub contained: bool,
    /// `1 −` the largest quadratic form of `outer` on the sampled boundary of `inner`.
    pub margin: f64,
}

/// Boundary-sampling oracle; tangency within 1e-12 counts as contained.
pub fn ellipse_contains(outer: &Ellipse, inner: &Ellipse, n_boundary: usize) -> Containment {
    let worst = (0..n_boundary.max(1))
        .map(|i| outer.quadratic_form(&inner.boundary_point(TAU * i as f64 / n_boundary.max(1) as f64)))
        .fold(f64::NEG_INFINITY, f64::max);
    let margin = 1.0 - worst;
    Containment { contained: margin >= -1e-12, margin }
}

fn dilation_map(y: &Ellipse) -> AffineContraction {
    let m = y.dilation_matrix();
    AffineContraction::new(m, -(m * y.center))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DilationComposition {
    /// `max |D_inner(p) − D_W(D_outer(p))|` over the test points.
    pub deviation: f64,
    /// Distance of `D_inner ∘ (D_W ∘ D_outer)⁻¹` from the orthogonal group.
    /// Both sides send `Y_inner` onto the unit disk, so this is always tiny.
    pub orthogonal_residual: f64,
    pub w: Ellipse,
}

/// Compares `D_inner` with `D_W ∘ D_outer`, `W = D_outer(Y_inner)`.
///
/// Equal for coaxial pairs. For general pairs the two sides differ by a
/// rotation or reflection of the disk: `D_outer` sends the axes of `Y_inner`
/// to conjugate diameters of `W`, which are not its axes.
pub fn dilation_composition_check(inner: &Ellipse, outer: &Ellipse, points: &[Vec2]) -> Result<DilationComposition> {
    if !ellipse_contains(outer, inner, 512).contained {
        return Err(LabError::Precondition("the inner ellipse is not contained in the outer one".into()));
    }
    let d_outer = dilation_map(outer);
    let w = inner.transformed(&d_outer)?;
    let composite = dilation_map(&w).compose(&d_outer);
    let direct = dilation_map(inner);
    let deviation = points.iter().map(|p| (direct.apply(p) - composite.apply(p)).norm()).fold(0.0, f64::max);
    let q = direct.matrix * composite.matrix.try_inverse().ok_or(LabError::SingularMatrix)?;
    let orthogonal_residual = (q.transpose() * q - Mat2::identity()).abs().max();
    Ok(DilationComposition { deviation, orthogonal_residual, w })
}

/// `sup |D_W(x) − x|` over a grid of `n_samples` points of `W` (plus its boundary).
///
/// The axis conditions fix `D_W` only up to the half-turn `z ↦ −z`; the lift
/// closer to the identity is the one measured, as the chart of directions
/// would otherwise flip `D_W` as the orientation crosses the vertical.
pub fn near_identity_sup(w: &Ellipse, n_samples: usize) -> Result<f64> {
    if !ellipse_contains(&Ellipse::unit_disk(), w, 512).contained {
        return Err(LabError::Precondition("W must lie in the unit disk".into()));
    }
    let side = (n_samples as f64).sqrt().ceil().max(2.0) as usize;
    let mut pts = Vec::with_capacity(side * side + 256);
    for i in 0..side {
        for j in 0..side {
            let z = vec2(-1.0 + 2.0 * i as f64 / (side - 1) as f64, -1.0 + 2.0 * j as f64 / (side - 1) as f64);
            if z.norm() <= 1.0 {
                pts.push(w.undilate(&z));
            }
        }
    }
    pts.extend(w.boundary(256));
    let sup = |sign: f64| pts.iter().map(|x| (w.dilate(x) * sign - x).norm()).fold(0.0, f64::max);
    Ok(sup(1.0).min(sup(-1.0)))
}

#[derive(Debug, Clone, Serialize)]
pub struct ContinuityReport {
    pub sup: f64,
    /// Times with their frame distance.
    pub per_time: Vec<(f64, f64)>,
    /// Times without a cylinder window or without sample mass.
    pub skipped: Vec<f64>,
}

/// `sup_t d(ν(a, θ, t), ν(a, θ′, t))` over `t = dt, 2dt, …, T`.
pub fn continuity_modulus(
    ifs: &IfsSystem,
    sample: &Sample,
    code: &CodeStream,
    theta: ProjectiveAngle,
    theta2: ProjectiveAngle,
    t_max: f64,
    dt: f64,
    tol: f64,
) -> Result<ContinuityReport> {
    let mut per_time = Vec::new();
    let mut skipped = Vec::new();
    for t in frame_times(t_max, dt)? {
        let a = nu_frame(ifs, sample, code, theta, t);
        let b = nu_frame(ifs, sample, code, theta2, t);
        match (a, b) {
            (Ok(a), Ok(b)) => per_time.push((t, prokhorov_auto(&a.measure, &b.measure, tol)?.d)),
            (Err(LabError::Precondition(_) | LabError::EmptyEllipse), _) | (_, Err(LabError::Precondition(_) | LabError::EmptyEllipse)) => {
                skipped.push(t)
            }
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
    }
    if per_time.is_empty() {
        return Err(LabError::Precondition("no time carried a frame".into()));
    }
    let sup = per_time.iter().map(|x| x.1).fold(0.0, f64::max);
    Ok(ContinuityReport { sup, per_time, skipped })
}

#[derive(Debug, Clone, Serialize)]
pub struct CombinedLemmaReport {
    /// Containment verdict and margin at depths `1..=depth`.
    pub per_depth: Vec<(usize, bool, f64)>,
    /// Smallest `n₀` with containment at every depth from `n₀` on, if any.
    pub n0: Option<usize>,
    /// Whether the hypothesis `|tan θ − tan F_ss(a)| < 1/(1 − ε) − 1` held.
    pub hypothesis: bool,
}

/// Along the orbit of `(a, θ)`: is the `(1 − ε)`-shrunk pulled-back ellipse at
/// direction `φ_{aₙ} ∘ ⋯ ∘ φ_{a₁}(θ)` inside the one at `φ_{aₙ} ∘ ⋯ ∘ φ_{a₁}(θ(a₁⋯aₙ))`?
/// Both have semi-axes in the ratio `α₁ : α₂` and share their center, so they are
/// compared after normalizing the major semi-axis to 1.
pub fn combined_lemma(ifs: &IfsSystem, code: &CodeStream, theta: ProjectiveAngle, f_ss: ProjectiveAngle, eps: f64, depth: usize) -> Result<CombinedLemmaReport> {
    let hypothesis = (theta.value().tan() - f_ss.value().tan()).abs() < 1.0 / (1.0 - eps) - 1.0;
    let mut per_depth = Vec::with_capacity(depth);
    for n in 1..=depth {
        let w = code.word(ifs, n);
        let axes = axes_of(&compose_letters(ifs, &w));
        let ratio = axes.alpha2 / axes.alpha1;
        let c = vec2(0.0, 0.0);
        let y = Ellipse::new(c, 1.0, ratio, phi_reversed(ifs, &w, axes.minor_dir))?;
        let z = Ellipse::new(c, 1.0 - eps, (1.0 - eps) * ratio, phi_reversed(ifs, &w, theta))?;
        let k = ellipse_contains(&y, &z, 1024);
        per_depth.push((n, k.contained, k.margin));
    }
    let mut n0 = None;
    for &(n, ok, _) in per_depth.iter().rev() {
        if ok {
            n0 = Some(n);
        } else {
            break;
        }
    }
    Ok(CombinedLemmaReport { per_depth, n0, hypothesis })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::aux_rng;
    use crate::affine::uniform_in;
    use crate::fixtures;
    use crate::linalg::unit;
    use proptest::prelude::*;

    #[test]
    fn angle_transfer_basics() {
        assert_eq!(angle_transfer(3.0, 1.0, 0.0).unwrap(), 0.0);
        assert!((angle_transfer(2.0, 2.0, 0.7).unwrap() - 0.7).abs() < 1e-15);
        assert!(angle_transfer(1.0, 2.0, 0.1).is_err());
        assert!(angle_transfer(2.0, 1.0, FRAC_PI_2).is_err());
    }

    #[test]
    fn angle_transfer_on_the_carpet() {
        // X_w for a depth-3 word is diag(λ³, 3⁻³); θ(w) is vertical
        let lam: f64 = 0.8;
        let inv = Mat2::new(lam.powi(-3), 0.0, 0.0, 27.0);
        let (a1, a2) = (lam.powi(3), 3f64.powi(-3));
        for k in 1..20 {
            let d = -1.5 + 0.15 * k as f64;
            let v = inv * unit(FRAC_PI_2 + d);
            let got = v.y.atan2(v.x) - FRAC_PI_2;
            // v lies in the upper or lower half-plane along with unit(π/2 + d)
            let got = crate::angle::normalize(got);
            assert!((got - angle_transfer(a1, a2, d).unwrap()).abs() < 1e-9, "{d}");
        }
    }

    proptest! {
        #[test]
        fn angle_transfer_round_trip(ratio in 1.0f64..100.0, d in -1.5f64..1.5) {
            let fwd = angle_transfer(ratio, 1.0, d).unwrap();
            // the forward map stretches by the inverse ratio
            let back = (ratio * fwd.tan()).atan();
            prop_assert!((back - d).abs() <= 1e-12);
        }
    }

    #[test]
    fn criterion_edge_cases() {
        for eps in [0.01, 0.3, 0.9] {
            assert!(containment_criterion(5.0, 1.0, eps, 0.0));
        }
        // equality: (α₁/α₂) tan θ = ε/(1 − ε) exactly
        let theta = (0.25f64 / 0.75 / 4.0).atan();
        let lhs = 4.0 * theta.tan();
        let rhs = 1.0 / 0.75 - 1.0;
        if lhs == rhs {
            assert!(!containment_criterion(4.0, 1.0, 0.25, theta));
        }
        assert!(!containment_criterion(4.0, 1.0, 0.25, theta * 1.0000001));
    }

    #[test]
    fn criterion_is_sufficient_on_random_cases() {
        let mut rng = aux_rng(17, 0);
        let mut checked = 0;
        while checked < 2000 {
            let ratio = uniform_in(&mut rng, 1.0, 100.0);
            let eps = uniform_in(&mut rng, 1e-3, 0.9);
            let theta = uniform_in(&mut rng, -0.5, 0.5);
            if !containment_criterion(ratio, 1.0, eps, theta) {
                continue;
            }
            let (y, z) = rotated_pair(ratio, 1.0, eps, theta).unwrap();
            assert!(ellipse_contains(&y, &z, 256).contained, "{ratio} {eps} {theta}");
            checked += 1;
        }
    }

    #[test]
    fn containment_oracle() {
        let e = Ellipse::new(vec2(0.1, 0.2), 0.5, 0.1, ProjectiveAngle::new(0.4)).unwrap();
        let k = ellipse_contains(&e, &e, 256);
        assert!(k.contained && k.margin.abs() < 1e-12);
        assert!(ellipse_contains(&e, &e.scaled(0.9), 256).contained);
        // a thin ellipse turned well past what the criterion allows
        let (y, z) = rotated_pair(20.0, 1.0, 0.05, 0.2).unwrap();
        assert!(!containment_criterion(20.0, 1.0, 0.05, 0.2));
        assert!(!ellipse_contains(&y, &z, 256).contained);
    }

    #[test]
    fn dilation_composition() {
        let pts: Vec<Vec2> = (0..200).map(|i| unit(i as f64) * (0.01 * (i % 17) as f64)).collect();
        let y = Ellipse::new(vec2(0.0, 0.0), 0.8, 0.3, ProjectiveAngle::new(1.0)).unwrap();
        let same = dilation_composition_check(&y, &y, &pts).unwrap();
        assert!(same.deviation < 1e-12);
        let coaxial = dilation_composition_check(&y.scaled(0.6), &y, &pts).unwrap();
        assert!(coaxial.deviation < 1e-12, "{}", coaxial.deviation);
        let shifted = Ellipse { center: vec2(0.05, 0.0), ..y.scaled(0.5) };
        let c2 = dilation_composition_check(&shifted, &y, &pts).unwrap();
        assert!(c2.deviation < 1e-12);
        // a turned inner ellipse: the sides differ, but only by an orthogonal map
        let turned = Ellipse::new(vec2(0.0, 0.0), 0.4, 0.2, ProjectiveAngle::new(1.3)).unwrap();
        let c3 = dilation_composition_check(&turned, &y, &pts).unwrap();
        assert!(c3.deviation > 1e-3);
        assert!(c3.orthogonal_residual < 1e-9);
        assert!(dilation_composition_check(&y, &turned, &pts).is_err());
    }

    #[test]
    fn near_identity_sweep() {
        assert!(near_identity_sup(&Ellipse::unit_disk(), 400).unwrap() < 1e-15);
        let mut last = 0.0;
        for delta in [1e-3, 3e-3, 1e-2, 3e-2, 0.1, 0.3] {
            let w = Ellipse::new(vec2(0.0, 0.0), 1.0, 1.0 - delta, ProjectiveAngle::new(FRAC_PI_2 + delta)).unwrap();
            let s = near_identity_sup(&w, 400).unwrap();
            assert!(s >= last, "{delta}: {s} < {last}");
            last = s;
        }
        assert!(last > 0.1);
        let tilted = Ellipse::new(vec2(0.0, 0.0), 0.5, 0.4, ProjectiveAngle::new(0.0)).unwrap();
        assert!(near_identity_sup(&tilted, 400).unwrap() > 0.5);
    }

    #[test]
    fn combined_lemma_on_ex_pos() {
        let ex = fixtures::ex_pos();
        let code = CodeStream::random(3, 4);
        let fl = crate::projective::foliation_limits(&ex, &code, 60).unwrap();
        let eps = 0.05;
        let theta = ProjectiveAngle::new(fl.f_ss.value() + 0.01);
        let r = combined_lemma(&ex, &code, theta, fl.f_ss, eps, 25).unwrap();
        assert!(r.hypothesis);
        let n0 = r.n0.expect("containment from some depth on");
        assert!(n0 <= 25);
    }
}
