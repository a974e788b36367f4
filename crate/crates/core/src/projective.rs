//! Projective actions of the inverse matrices, the Furstenberg measure, the
//! skew product and the two foliation directions.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use rayon::prelude::*;
use serde::Serialize;

use crate::affine::{AffineContraction, CodeStream, IfsSystem};
use crate::angle::{self, ProjectiveAngle};
use crate::error::{LabError, Result};
use crate::linalg::{self, adjugate, rotation, unit, Mat2, Vec2};

/// Direction of `A⁻¹ (cos θ, sin θ)`.
pub fn phi_apply(map: &AffineContraction, theta: ProjectiveAngle) -> Result<ProjectiveAngle> {
    if linalg::det(&map.matrix) == 0.0 {
        return Err(LabError::SingularMatrix);
    }
    Ok(phi_matrix(&map.matrix, theta))
}

#[inline]
fn phi_matrix(m: &Mat2, theta: ProjectiveAngle) -> ProjectiveAngle {
    // the adjugate is a nonzero multiple of the inverse
    let v = adjugate(m) * theta.unit();
    ProjectiveAngle::new(v.y.atan2(v.x))
}

#[inline]
pub fn phi(ifs: &IfsSystem, i: usize, theta: ProjectiveAngle) -> ProjectiveAngle {
    phi_matrix(&ifs.map(i).matrix, theta)
}

/// `φ_{w₁} ∘ ⋯ ∘ φ_{wₙ}(θ)`: the last letter acts first.
pub fn phi_composed(ifs: &IfsSystem, w: &[usize], theta: ProjectiveAngle) -> ProjectiveAngle {
    let mut v = theta.unit();
    for &a in w.iter().rev() {
        v = adjugate(&ifs.map(a).matrix) * v;
        v /= v.norm();
    }
    ProjectiveAngle::new(v.y.atan2(v.x))
}

/// `φ_{wₙ} ∘ ⋯ ∘ φ_{w₁}(θ)`, the action of `A_w⁻¹`.
pub fn phi_reversed(ifs: &IfsSystem, w: &[usize], theta: ProjectiveAngle) -> ProjectiveAngle {
    let mut v = theta.unit();
    for &a in w {
        v = adjugate(&ifs.map(a).matrix) * v;
        v /= v.norm();
    }
    ProjectiveAngle::new(v.y.atan2(v.x))
}

/// Strict positivity of every entry, required together with the cone flag.
pub fn cone_ok(ifs: &IfsSystem) -> bool {
    ifs.cone_mode && ifs.maps().iter().all(|m| m.matrix.iter().all(|&x| x > 0.0))
}

fn refuse(ifs: &IfsSystem) -> LabError {
    LabError::ConeRefused(if ifs.cone_mode {
        "some matrix entry is not strictly positive".into()
    } else {
        "system is not in cone mode".into()
    })
}

/// Rotation angle `ψ` for which every `R(ψ) A_i R(−ψ)` is strictly positive,
/// picked to maximize the smallest entry over a grid of 720 angles.
pub fn cone_rotation(ifs: &IfsSystem) -> Option<f64> {
    let mut best: Option<(f64, f64)> = None;
    for i in 0..720 {
        let psi = -FRAC_PI_2 + PI * (i as f64 + 0.5) / 720.0;
        let r = rotation(psi);
        let rt = rotation(-psi);
        let worst = ifs
            .maps()
            .iter()
            .map(|m| (r * m.matrix * rt).min())
            .fold(f64::INFINITY, f64::min);
        if worst > 0.0 && best.is_none_or(|(_, w)| worst > w) {
            best = Some((psi, worst));
        }
    }
    // prefer the closed-form choice when it ties the grid optimum
    let exact = {
        let r = rotation(FRAC_PI_4);
        let rt = rotation(-FRAC_PI_4);
        ifs.maps().iter().map(|m| (r * m.matrix * rt).min()).fold(f64::INFINITY, f64::min)
    };
    match best {
        Some((_, w)) if exact > 0.0 && exact >= w - 1e-12 => Some(FRAC_PI_4),
        other => other.map(|(psi, _)| psi),
    }
}

/// Conjugate of every map by `R(ψ)`; directions shift by `+ψ`.
pub fn rotated_system(ifs: &IfsSystem, psi: f64) -> Result<IfsSystem> {
    let r = rotation(psi);
    let rt = rotation(-psi);
    let maps = ifs.maps().iter().map(|m| AffineContraction::new(r * m.matrix * rt, r * m.offset)).collect();
    IfsSystem::new(maps, ifs.probabilities().to_vec(), true)
}

#[derive(Debug, Clone, Serialize)]
pub struct EmpiricalAngleMeasure {
    pub angles: Vec<ProjectiveAngle>,
    pub weights: Vec<f64>,
}

impl EmpiricalAngleMeasure {
    pub fn uniform(angles: Vec<ProjectiveAngle>) -> Self {
        let w = 1.0 / angles.len().max(1) as f64;
        let weights = vec![w; angles.len()];
        EmpiricalAngleMeasure { angles, weights }
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FurstenbergOptions {
    /// Starting direction, in the negative quadrant.
    pub theta0: f64,
    /// Accept non-cone systems by first conjugating into the positive cone.
    pub rotate_into_cone: bool,
}

impl Default for FurstenbergOptions {
    fn default() -> Self {
        FurstenbergOptions { theta0: -FRAC_PI_4, rotate_into_cone: false }
    }
}

/// Sample `j` is `φ_{b₁} ∘ ⋯ ∘ φ_{b_m}(θ₀)` over the first `m = burn_in`
/// letters of code stream `j`.
pub fn furstenberg_sample(
    ifs: &IfsSystem,
    n_samples: usize,
    burn_in: usize,
    seed: u64,
    opts: FurstenbergOptions,
) -> Result<EmpiricalAngleMeasure> {
    let theta0 = ProjectiveAngle::new(opts.theta0);
    if !theta0.in_q2() {
        return Err(LabError::InvalidArgument(format!("starting direction {} is not in the negative quadrant", opts.theta0)));
    }
    let (system, psi) = if cone_ok(ifs) {
        (ifs.clone(), 0.0)
    } else if opts.rotate_into_cone {
        let psi = cone_rotation(ifs).ok_or_else(|| LabError::ConeRefused("no rotation makes every matrix positive".into()))?;
        (rotated_system(ifs, psi)?, psi)
    } else {
        return Err(refuse(ifs));
    };
    let angles = (0..n_samples as u64)
        .into_par_iter()
        .map(|j| {
            let w = CodeStream::random(seed, j).word(&system, burn_in);
            ProjectiveAngle::new(phi_composed(&system, &w, theta0).value() - psi)
        })
        .collect();
    Ok(EmpiricalAngleMeasure::uniform(angles))
}

/// Equal-width bins over the circular hull of the sample: the circle of
/// directions is cut at its largest empty gap.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AngleBins {
    pub start: f64,
    pub width: f64,
    pub n: usize,
}

impl AngleBins {
    pub fn over(angles: &[ProjectiveAngle], n: usize) -> Self {
        let mut v: Vec<f64> = angles.iter().map(|a| a.value()).collect();
        v.sort_by(f64::total_cmp);
        let mut start = v[0];
        let mut best_gap = v[0] + PI - v[v.len() - 1];
        for w in v.windows(2) {
            if w[1] - w[0] > best_gap {
                best_gap = w[1] - w[0];
                start = w[1];
            }
        }
        let span = PI - best_gap;
        // a degenerate hull still gets bins of positive width
        let pad = if span < 1e-9 { 1e-9 } else { span * 1e-9 };
        AngleBins { start: start - pad, width: (span + 2.0 * pad) / n as f64, n }
    }

    pub fn index(&self, theta: ProjectiveAngle) -> Option<usize> {
        let u = (theta.value() - self.start).rem_euclid(PI);
        let i = (u / self.width).floor();
        if i >= 0.0 && (i as usize) < self.n {
            Some(i as usize)
        } else {
            None
        }
    }
}

/// `sup_A |emp(A) − Σ pᵢ emp(φᵢ⁻¹ A)|` over the bins, i.e. the defect of the
/// sample in the stationarity equation `μ_F = Σ pᵢ (φᵢ)_* μ_F`.
pub fn furstenberg_residual(emp: &EmpiricalAngleMeasure, ifs: &IfsSystem, n_bins: usize) -> Result<f64> {
    if n_bins < 2 {
        return Err(LabError::InvalidArgument(format!("need at least 2 bins, got {n_bins}")));
    }
    if emp.is_empty() {
        return Err(LabError::InvalidArgument("empty angle sample".into()));
    }
    let bins = AngleBins::over(&emp.angles, n_bins);
    let total: f64 = emp.weights.iter().sum();
    let mut lhs = vec![0.0; n_bins];
    let mut pushed = vec![vec![0.0; n_bins]; ifs.k()];
    for (&a, &w) in emp.angles.iter().zip(&emp.weights) {
        if let Some(i) = bins.index(a) {
            lhs[i] += w;
        }
        for (k, row) in pushed.iter_mut().enumerate() {
            if let Some(i) = bins.index(phi(ifs, k, a)) {
                row[i] += w;
            }
        }
    }
    let mut worst: f64 = 0.0;
    for i in 0..n_bins {
        let rhs: f64 = ifs.probabilities().iter().zip(&pushed).map(|(p, row)| p * row[i]).sum();
        worst = worst.max((lhs[i] - rhs).abs() / total);
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkewPoint {
    pub code: CodeStream,
    pub theta: ProjectiveAngle,
}

/// `f(a, θ) = (σa, φ_{a₁}(θ))`.
pub fn skew_step(p: &SkewPoint, ifs: &IfsSystem) -> SkewPoint {
    let a1 = p.code.letter(ifs, 0);
    SkewPoint { code: p.code.shift(), theta: phi(ifs, a1, p.theta) }
}

pub fn skew_iterate(p: &SkewPoint, ifs: &IfsSystem, n: usize) -> SkewPoint {
    let w = p.code.word(ifs, n);
    SkewPoint { code: p.code.shift_by(n), theta: phi_reversed(ifs, &w, p.theta) }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct FoliationLimits {
    /// `F(a)`: limit of the major-axis directions of `X_{a₁⋯aₙ}`.
    pub f: ProjectiveAngle,
    /// `F_ss(a)`: limit of the minor-axis directions `θ(a₁⋯aₙ)`.
    pub f_ss: ProjectiveAngle,
    /// `lim φ_{a₁} ∘ ⋯ ∘ φ_{aₙ}(0)`, the direction contracted by the inverse products.
    pub backward: ProjectiveAngle,
    pub gap_f: f64,
    pub gap_ss: f64,
    pub gap_backward: f64,
}

fn direction_of_product(mats: impl Iterator<Item = Mat2>, start: Vec2) -> (ProjectiveAngle, ProjectiveAngle) {
    // returns the depth-n and depth-(n−1) directions of M₁ ⋯ Mₙ start
    let mats: Vec<Mat2> = mats.collect();
    let run = |n: usize| {
        let mut v = start;
        for m in mats[..n].iter().rev() {
            v = m * v;
            v /= v.norm();
        }
        ProjectiveAngle::new(v.y.atan2(v.x))
    };
    (run(mats.len()), run(mats.len().saturating_sub(1)))
}

pub fn foliation_limits(ifs: &IfsSystem, code: &CodeStream, depth: usize) -> Result<FoliationLimits> {
    if !cone_ok(ifs) {
        return Err(refuse(ifs));
    }
    if depth == 0 {
        return Err(LabError::InvalidArgument("depth must be at least 1".into()));
    }
    let w = code.word(ifs, depth);
    let e1 = unit(0.0);
    let (f, f1) = direction_of_product(w.iter().map(|&a| ifs.map(a).matrix), e1);
    let (s, s1) = direction_of_product(w.iter().map(|&a| adjugate(&ifs.map(a).matrix).transpose()), e1);
    let (b, b1) = direction_of_product(w.iter().map(|&a| adjugate(&ifs.map(a).matrix)), e1);
    Ok(FoliationLimits {
        f,
        f_ss: s,
        backward: b,
        gap_f: f.distance(f1),
        gap_ss: s.distance(s1),
        gap_backward: b.distance(b1),
    })
}

/// Attracting fixed direction of `φ` for a single matrix.
pub fn attracting_direction(m: &Mat2) -> ProjectiveAngle {
    let mut v = unit(-FRAC_PI_4);
    for _ in 0..2000 {
        v = adjugate(m) * v;
        v /= v.norm();
    }
    ProjectiveAngle::new(v.y.atan2(v.x))
}

/// Signed angular step used in tests of contraction.
pub fn angular_gap(a: ProjectiveAngle, b: ProjectiveAngle) -> f64 {
    angle::distance(a.value(), b.value())
}
