//! The diagonal carpet `T₀(x, y) = (λx, y/3)`, `T₁(x, y) = (λx + 1 − λ, y/3 + 2/3)`
//! handled through explicit digit formulas, independent of the generic IFS code.
//!
//! Zooming along squares reduces to a rectangle stretch: for the largest `n` with
//! the square `B(π(a), e⁻ᵗ)` meeting only the cylinder `E_{a₁⋯aₙ}`, the zoomed
//! measure is `μ` restricted to the rectangle `T_{a₁⋯aₙ}⁻¹(B)` around `π(σⁿa)`,
//! stretched onto [−1, 1]².

use rand::RngCore;
use rayon::prelude::*;
use serde::Serialize;

use crate::affine::aux_rng;
use crate::error::{LabError, Result};
use crate::linalg::{vec2, Vec2};
use crate::measure::{LineMeasure, WeightedPointMeasure};
use crate::scenery::{distribution_from, frame_times, EmpiricalDistribution, FrameBase, SceneryFrame};

/// `y`-range, in the coordinates of a level-`n` cylinder, that meets no other
/// level-`n` cylinder: the unit interval padded by half its length.
const SAFE_Y: (f64, f64) = (-0.5, 1.5);

/// Number of digits that pins both coordinates to double precision.
pub fn digit_depth(lambda: f64) -> usize {
    ((1e-17f64).ln() / lambda.ln()).ceil() as usize + 1
}

/// `(Σ cᵢ(1 − λ)λ^{i−1}, Σ 2cᵢ/3ⁱ)`, summed from the tail.
pub fn point_of_digits(digits: &[usize], lambda: f64) -> Vec2 {
    let (mut x, mut y) = (0.0, 0.0);
    for &c in digits.iter().rev() {
        let c = c as f64;
        x = c * (1.0 - lambda) + lambda * x;
        y = (2.0 * c + y) / 3.0;
    }
    vec2(x, y)
}

fn random_digits(seed: u64, stream: u64, len: usize) -> Vec<usize> {
    let mut rng = aux_rng(seed, stream);
    let mut out = Vec::with_capacity(len);
    while out.len() < len {
        let mut bits = rng.next_u64();
        for _ in 0..64.min(len - out.len()) {
            out.push((bits & 1) as usize);
            bits >>= 1;
        }
    }
    out
}

/// Equal-weight sample of the carpet measure with fair digits, sorted by `x`.
#[derive(Debug, Clone)]
pub struct CarpetSample {
    pub lambda: f64,
    pub points: Vec<Vec2>,
}

impl CarpetSample {
    pub fn new(lambda: f64, n_points: usize, seed: u64) -> Result<Self> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(LabError::InvalidArgument(format!("λ must lie in (0, 1), got {lambda}")));
        }
        let depth = digit_depth(lambda);
        let mut points: Vec<Vec2> =
            (0..n_points as u64).into_par_iter().map(|i| point_of_digits(&random_digits(seed, i, depth), lambda)).collect();
        points.par_sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
        Ok(CarpetSample { lambda, points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn measure(&self) -> WeightedPointMeasure {
        WeightedPointMeasure::uniform(self.points.clone())
    }

    /// Points in the closed axis-parallel rectangle.
    pub fn in_rect(&self, r: &Rect) -> impl Iterator<Item = &Vec2> + '_ {
        let lo = self.points.partition_point(|p| p.x < r.center.x - r.half_width);
        let hi = self.points.partition_point(|p| p.x <= r.center.x + r.half_width);
        let (cy, hh) = (r.center.y, r.half_height);
        self.points[lo..hi].iter().filter(move |p| (p.y - cy).abs() <= hh)
    }

    /// `x`-marginal: the Bernoulli convolution with parameter λ, rescaled to [0, 1].
    pub fn horizontal_marginal(&self) -> Result<LineMeasure> {
        LineMeasure::uniform_points(self.points.iter().map(|p| p.x).collect())
    }
}

/// An axis-parallel rectangle by center and half-sides.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Rect {
    pub center: Vec2,
    pub half_width: f64,
    pub half_height: f64,
    /// Cylinder depth this rectangle was pulled back through.
    pub n: usize,
}

impl Rect {
    /// The stretch onto [−1, 1]².
    pub fn stretch(&self, p: &Vec2) -> Vec2 {
        vec2((p.x - self.center.x) / self.half_width, (p.y - self.center.y) / self.half_height)
    }
}

/// Largest `n` for which the square of half-side `e⁻ᵗ` around `π(a)` meets only
/// the cylinder `E_{a₁⋯aₙ}`, read through `y(σⁿa) ± e⁻ᵗ3ⁿ ⊂ [−1/2, 3/2]`.
pub fn square_depth(digits: &[usize], lambda: f64, t: f64) -> Result<usize> {
    let tail = digit_depth(lambda);
    let r = (-t).exp();
    let fits = |n: usize| {
        let y = point_of_digits(&digits[n..n + tail], lambda).y;
        let h = r * 3f64.powi(n as i32);
        y - h >= SAFE_Y.0 && y + h <= SAFE_Y.1
    };
    let mut n = 0;
    while n + 1 + tail <= digits.len() && fits(n + 1) {
        n += 1;
    }
    if n + 1 + tail > digits.len() && fits(n + 1) {
        return Err(LabError::InvalidArgument(format!("{} digits are too few for t = {t}", digits.len())));
    }
    Ok(n)
}

/// `T_{a₁⋯aₙ}⁻¹(B(π(a), e⁻ᵗ))` for the square `B`.
pub fn pulled_back_rect(digits: &[usize], lambda: f64, t: f64, n: usize) -> Rect {
    let tail = digit_depth(lambda);
    let center = point_of_digits(&digits[n..n + tail], lambda);
    let r = (-t).exp();
    Rect { center, half_width: r * lambda.powi(-(n as i32)), half_height: r * 3f64.powi(n as i32), n }
}

/// The square frame at `π(a)` and time `t`, built as the stretched rectangle.
pub fn rectangle_frame(sample: &CarpetSample, digits: &[usize], t: f64) -> Result<SceneryFrame> {
    let n = square_depth(digits, sample.lambda, t)?;
    rectangle_frame_at_depth(sample, digits, t, n)
}

pub fn rectangle_frame_at_depth(sample: &CarpetSample, digits: &[usize], t: f64, n: usize) -> Result<SceneryFrame> {
    let rect = pulled_back_rect(digits, sample.lambda, t, n);
    let points: Vec<Vec2> = sample.in_rect(&rect).map(|p| rect.stretch(p)).collect();
    if points.is_empty() {
        let x = point_of_digits(&digits[..digit_depth(sample.lambda)], sample.lambda);
        return Err(LabError::EmptyWindow { x: x.x, y: x.y, t });
    }
    let base = point_of_digits(&digits[..digit_depth(sample.lambda).min(digits.len())], sample.lambda);
    Ok(SceneryFrame {
        measure: WeightedPointMeasure::uniform(points),
        t,
        base: FrameBase::Point([base.x, base.y]),
        derotation: 0.0,
        n: Some(n),
        theta: None,
    })
}

/// Square-mode scenery distribution at `π(a)` up to `T`.
pub fn rectangle_distribution(sample: &CarpetSample, digits: &[usize], t_max: f64, dt: f64) -> Result<EmpiricalDistribution> {
    let times = frame_times(t_max, dt)?;
    distribution_from(&times, |t| rectangle_frame(sample, digits, t))
}

/// Keeps the part of a frame inside the closed unit disk, renormalized.
pub fn restrict_to_disk(mu: &WeightedPointMeasure) -> Result<WeightedPointMeasure> {
    let r = mu.restrict(|p| p.norm() <= 1.0);
    if r.is_empty() {
        return Err(LabError::EmptyEllipse);
    }
    r.normalized()
}
