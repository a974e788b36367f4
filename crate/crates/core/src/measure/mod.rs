//! Finite measures on the plane and on the line, and the operations that
//! derive one from another.

mod density;
mod maxflow;
mod prokhorov;

pub use density::{density_diagnostic, silverman_bandwidth, DensityReport, KDE_GRID};
pub use maxflow::FlowNetwork;
pub use prokhorov::{
    prokhorov_auto, prokhorov_distance, prokhorov_line, prokhorov_report, ProkhorovReport, DEFAULT_TOL,
    SUPPORT_CAP,
};

use std::collections::BTreeMap;

use serde::Serialize;

use crate::angle::ProjectiveAngle;
use crate::error::{LabError, Result};
use crate::linalg::{rotation, vec2, Vec2};

/// Tolerance on total mass for a measure to count as normalized.
pub const MASS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct WeightedPointMeasure {
    pub points: Vec<Vec2>,
    pub weights: Vec<f64>,
}

impl WeightedPointMeasure {
    pub fn new(points: Vec<Vec2>, weights: Vec<f64>) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(LabError::InvalidArgument(format!(
                "{} points but {} weights",
                points.len(),
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(**w >= 0.0) || !w.is_finite()) {
            return Err(LabError::InvalidArgument(format!("negative or non-finite weight {w}")));
        }
        Ok(WeightedPointMeasure { points, weights })
    }

    /// Equal weights summing to one.
    pub fn uniform(points: Vec<Vec2>) -> Self {
        let w = 1.0 / points.len().max(1) as f64;
        let weights = vec![w; points.len()];
        WeightedPointMeasure { points, weights }
    }

    pub fn dirac(p: Vec2) -> Self {
        WeightedPointMeasure { points: vec![p], weights: vec![1.0] }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn check_normalized(&self) -> Result<()> {
        let m = self.total_mass();
        if (m - 1.0).abs() > MASS_TOL {
            return Err(LabError::Unnormalized(m));
        }
        Ok(())
    }

    /// Rescales to mass one; zero mass is an error.
    pub fn normalized(mut self) -> Result<Self> {
        let m = self.total_mass();
        if !(m > 0.0) {
            return Err(LabError::Unnormalized(m));
        }
        for w in &mut self.weights {
            *w /= m;
        }
        Ok(self)
    }

    /// Keeps the points satisfying `keep`, without renormalizing. Zero weights are dropped.
    pub fn restrict(&self, mut keep: impl FnMut(&Vec2) -> bool) -> Self {
        let mut out = WeightedPointMeasure::default();
        for (p, &w) in self.points.iter().zip(&self.weights) {
            if w > 0.0 && keep(p) {
                out.points.push(*p);
                out.weights.push(w);
            }
        }
        out
    }

    pub fn map_points(&self, f: impl Fn(&Vec2) -> Vec2) -> Self {
        WeightedPointMeasure { points: self.points.iter().map(f).collect(), weights: self.weights.clone() }
    }

    pub fn mass_where(&self, mut pred: impl FnMut(&Vec2) -> bool) -> f64 {
        self.points.iter().zip(&self.weights).filter(|(p, _)| pred(p)).map(|(_, w)| w).sum()
    }

    pub fn mean(&self) -> Vec2 {
        let m = self.total_mass();
        self.points.iter().zip(&self.weights).fold(vec2(0.0, 0.0), |acc, (p, w)| acc + p * *w) / m
    }

    /// `t·self + (1 − t)·other`.
    pub fn mix(&self, other: &Self, t: f64) -> Self {
        let mut out = self.clone();
        out.weights.iter_mut().for_each(|w| *w *= t);
        out.points.extend_from_slice(&other.points);
        out.weights.extend(other.weights.iter().map(|w| w * (1.0 - t)));
        out
    }

    pub fn max_radius(&self) -> f64 {
        self.points.iter().map(|p| p.norm()).fold(0.0, f64::max)
    }

    /// Exact planar rotation of the support.
    pub fn rotated(&self, angle: f64) -> Self {
        let r = rotation(angle);
        self.map_points(|p| r * p)
    }
}

/// Unit-mass measure on the line, kept sorted by position.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct LineMeasure {
    pub positions: Vec<f64>,
    pub weights: Vec<f64>,
}

impl LineMeasure {
    pub fn new(positions: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if positions.len() != weights.len() {
            return Err(LabError::InvalidArgument("positions and weights differ in length".into()));
        }
        if weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) || positions.iter().any(|x| !x.is_finite()) {
            return Err(LabError::InvalidArgument("negative or non-finite entry".into()));
        }
        let mut pairs: Vec<(f64, f64)> = positions.into_iter().zip(weights).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (positions, weights) = pairs.into_iter().unzip();
        Ok(LineMeasure { positions, weights })
    }

    pub fn uniform_points(positions: Vec<f64>) -> Result<Self> {
        let w = 1.0 / positions.len().max(1) as f64;
        let n = positions.len();
        Self::new(positions, vec![w; n])
    }

    pub fn dirac(x: f64) -> Self {
        LineMeasure { positions: vec![x], weights: vec![1.0] }
    }

    /// Lebesgue measure on [−1, 1] discretized at cell midpoints.
    pub fn lebesgue(cells: usize) -> Self {
        Self::from_density(cells, |_| 1.0).expect("constant density")
    }

    /// Midpoint quadrature of a density on [−1, 1].
    pub fn from_density(cells: usize, density: impl Fn(f64) -> f64) -> Result<Self> {
        let h = 2.0 / cells as f64;
        let positions: Vec<f64> = (0..cells).map(|i| -1.0 + h * (i as f64 + 0.5)).collect();
        let weights: Vec<f64> = positions.iter().map(|&x| density(x).max(0.0) * h).collect();
        LineMeasure { positions, weights }.normalized()
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn normalized(mut self) -> Result<Self> {
        let m = self.total_mass();
        if !(m > 0.0) {
            return Err(LabError::Unnormalized(m));
        }
        self.weights.iter_mut().for_each(|w| *w /= m);
        Ok(self)
    }

    pub fn mean(&self) -> f64 {
        self.positions.iter().zip(&self.weights).map(|(x, w)| x * w).sum::<f64>() / self.total_mass()
    }

    /// Index range of positions in the closed interval [lo, hi].
    fn closed_range(&self, lo: f64, hi: f64) -> std::ops::Range<usize> {
        let a = self.positions.partition_point(|&x| x < lo);
        let b = self.positions.partition_point(|&x| x <= hi);
        a..b.max(a)
    }

    fn open_range(&self, lo: f64, hi: f64) -> std::ops::Range<usize> {
        let a = self.positions.partition_point(|&x| x <= lo);
        let b = self.positions.partition_point(|&x| x < hi);
        a..b.max(a)
    }

    /// Mass of the closed interval [lo, hi].
    pub fn mass_in(&self, lo: f64, hi: f64) -> f64 {
        self.weights[self.closed_range(lo, hi)].iter().sum()
    }

    /// Mass of the open interval (lo, hi).
    pub fn mass_in_open(&self, lo: f64, hi: f64) -> f64 {
        self.weights[self.open_range(lo, hi)].iter().sum()
    }

    pub fn min_position(&self) -> Option<f64> {
        self.positions.first().copied()
    }

    pub fn max_position(&self) -> Option<f64> {
        self.positions.last().copied()
    }

    /// Embedding on the horizontal axis of the plane.
    pub fn to_planar(&self) -> WeightedPointMeasure {
        WeightedPointMeasure {
            points: self.positions.iter().map(|&x| vec2(x, 0.0)).collect(),
            weights: self.weights.clone(),
        }
    }

    pub fn quantile(&self, q: f64) -> f64 {
        let total = self.total_mass();
        let mut acc = 0.0;
        for (x, w) in self.positions.iter().zip(&self.weights) {
            acc += w;
            if acc >= q * total {
                return *x;
            }
        }
        *self.positions.last().unwrap_or(&0.0)
    }
}

/// A slice measure together with the strip it was cut from.
#[derive(Debug, Clone, Serialize)]
pub struct SliceMeasure {
    pub base: LineMeasure,
    pub theta: ProjectiveAngle,
    pub x: f64,
    pub strip_width: f64,
    /// Unnormalized mass of the strip before rescaling.
    pub strip_mass: f64,
}

/// Aggregates mass onto the centers of a square grid of side `2 / grid_n`
/// anchored at (−1, −1). Points outside [−1, 1]² fall into cells of the same
/// lattice.
pub fn coarsen(mu: &WeightedPointMeasure, grid_n: usize) -> WeightedPointMeasure {
    let h = 2.0 / grid_n.max(1) as f64;
    let mut cells: BTreeMap<(i64, i64), f64> = BTreeMap::new();
    for (p, &w) in mu.points.iter().zip(&mu.weights) {
        let key = (((p.x + 1.0) / h).floor() as i64, ((p.y + 1.0) / h).floor() as i64);
        *cells.entry(key).or_insert(0.0) += w;
    }
    let (points, weights) = cells
        .into_iter()
        .map(|((i, j), w)| (vec2(-1.0 + h * (i as f64 + 0.5), -1.0 + h * (j as f64 + 0.5)), w))
        .unzip();
    WeightedPointMeasure { points, weights }
}

/// One-dimensional version of [`coarsen`] with cells of width `2 / grid_n`.
pub fn coarsen_line(m: &LineMeasure, grid_n: usize) -> LineMeasure {
    let h = 2.0 / grid_n.max(1) as f64;
    let mut cells: BTreeMap<i64, f64> = BTreeMap::new();
    for (x, &w) in m.positions.iter().zip(&m.weights) {
        *cells.entry(((x + 1.0) / h).floor() as i64).or_insert(0.0) += w;
    }
    let (positions, weights) = cells.into_iter().map(|(i, w)| (-1.0 + h * (i as f64 + 0.5), w)).unzip();
    LineMeasure { positions, weights }
}

/// Pushforward under `y ↦ ⟨y, (cos θ, sin θ)⟩`.
pub fn project_measure(mu: &WeightedPointMeasure, theta: ProjectiveAngle) -> Result<LineMeasure> {
    let r = mu.max_radius();
    if r > 1.0 + 1e-12 {
        return Err(LabError::OutsideDisk(r));
    }
    project_unchecked(mu, theta)
}

pub(crate) fn project_unchecked(mu: &WeightedPointMeasure, theta: ProjectiveAngle) -> Result<LineMeasure> {
    let e = theta.unit();
    LineMeasure::new(mu.points.iter().map(|p| p.dot(&e)).collect(), mu.weights.clone())
}

/// Direction along the fibres of the projection at angle `theta`.
pub fn fibre_direction(theta: ProjectiveAngle) -> Vec2 {
    let (s, c) = theta.value().sin_cos();
    vec2(s, -c)
}

/// Restriction of `mu` to the strip `|π_θ(y) − x| ≤ ε/2`, read off along the
/// fibre through `x`. Chords of the unit disk already sit in [−1, 1], so the
/// coordinate along the fibre is used unscaled.
pub fn slice_measure(mu: &WeightedPointMeasure, theta: ProjectiveAngle, x: f64, eps: f64) -> Result<SliceMeasure> {
    if !(eps > 0.0) {
        return Err(LabError::InvalidArgument(format!("strip width must be positive, got {eps}")));
    }
    let e = theta.unit();
    let f = fibre_direction(theta);
    let mut positions = Vec::new();
    let mut weights = Vec::new();
    for (p, &w) in mu.points.iter().zip(&mu.weights) {
        if w > 0.0 && (p.dot(&e) - x).abs() <= eps / 2.0 {
            positions.push(p.dot(&f));
            weights.push(w);
        }
    }
    let strip_mass: f64 = weights.iter().sum();
    if positions.is_empty() || !(strip_mass > 0.0) {
        return Err(LabError::EmptySlice);
    }
    let base = LineMeasure::new(positions, weights)?.normalized()?;
    Ok(SliceMeasure { base, theta, x, strip_width: eps, strip_mass })
}

/// Zoom into `m` at `x`: restrict to (x − e⁻ᵗ, x + e⁻ᵗ), recentre and stretch onto [−1, 1].
pub fn scenery_1d(m: &LineMeasure, x: f64, t: f64) -> Result<LineMeasure> {
    let r = (-t).exp();
    let range = m.open_range(x - r, x + r);
    let positions: Vec<f64> = m.positions[range.clone()].iter().map(|p| (p - x) / r).collect();
    let weights = m.weights[range].to_vec();
    if !(weights.iter().sum::<f64>() > 0.0) {
        return Err(LabError::EmptyWindow { x, y: 0.0, t });
    }
    LineMeasure { positions, weights }.normalized()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn coarsen_keeps_mass_and_single_points() {
        let mu = WeightedPointMeasure::dirac(vec2(-1.0 + 0.05, -1.0 + 0.05));
        let c = coarsen(&mu, 20);
        assert_eq!(c.points, mu.points);
        assert_eq!(c.weights, vec![1.0]);
    }

    #[test]
    fn scenery_1d_of_dirac_is_dirac_at_origin() {
        let m = LineMeasure::dirac(0.37);
        let z = scenery_1d(&m, 0.37, 5.0).unwrap();
        assert_eq!(z.positions, vec![0.0]);
        assert!(scenery_1d(&m, 0.9, 5.0).is_err());
    }

    #[test]
    fn uniform_line_measure_is_scale_invariant() {
        let m = LineMeasure::lebesgue(4096);
        let z = scenery_1d(&m, 0.0, 2.0).unwrap();
        let d = prokhorov_line(&z, &LineMeasure::lebesgue(512), 1e-3).unwrap();
        assert!(d < 0.01, "{d}");
    }

    #[test]
    fn projection_rejects_points_outside_the_disk() {
        let mu = WeightedPointMeasure::dirac(vec2(1.0, 1.0));
        assert!(matches!(project_measure(&mu, ProjectiveAngle::new(0.0)), Err(LabError::OutsideDisk(_))));
        let o = project_measure(&WeightedPointMeasure::dirac(vec2(0.0, 0.0)), ProjectiveAngle::new(1.1)).unwrap();
        assert_eq!(o.positions, vec![0.0]);
    }

    #[test]
    fn full_width_strip_matches_projected_interval() {
        let pts: Vec<Vec2> = (0..500).map(|i| {
            let a = i as f64 * 0.7;
            vec2(0.9 * (i as f64 / 500.0) * a.cos(), 0.9 * (i as f64 / 500.0) * a.sin())
        }).collect();
        let mu = WeightedPointMeasure::uniform(pts);
        let theta = ProjectiveAngle::new(0.3);
        let s = slice_measure(&mu, theta, 0.1, 0.4).unwrap();
        let proj = project_measure(&mu, theta).unwrap();
        assert!((s.strip_mass - proj.mass_in(-0.1, 0.3)).abs() < 1e-12);
        let whole = slice_measure(&mu, theta, 0.0, 4.0).unwrap();
        assert!((whole.strip_mass - 1.0).abs() < 1e-12);
    }

    fn arb_measure() -> impl Strategy<Value = WeightedPointMeasure> {
        proptest::collection::vec(((-0.7f64..0.7, -0.7f64..0.7), 0.01f64..1.0), 1..20).prop_map(|v| {
            let (pts, w): (Vec<_>, Vec<_>) = v.into_iter().map(|((x, y), w)| (vec2(x, y), w)).unzip();
            WeightedPointMeasure::new(pts, w).unwrap().normalized().unwrap()
        })
    }

    proptest! {
        #[test]
        fn coarsen_preserves_total_mass(mu in arb_measure(), n in 1usize..64) {
            prop_assert!((coarsen(&mu, n).total_mass() - mu.total_mass()).abs() <= 1e-15);
        }

        #[test]
        fn projection_is_linear_in_the_measure(a in arb_measure(), b in arb_measure(), t in 0.0f64..1.0, th in -1.5f64..1.5) {
            let theta = ProjectiveAngle::new(th);
            let mixed = project_measure(&a.mix(&b, t), theta).unwrap();
            let pa = project_measure(&a, theta).unwrap();
            let pb = project_measure(&b, theta).unwrap();
            for (lo, hi) in [(-1.0, -0.2), (-0.3, 0.4), (0.1, 1.0)] {
                let lhs = mixed.mass_in(lo, hi);
                let rhs = t * pa.mass_in(lo, hi) + (1.0 - t) * pb.mass_in(lo, hi);
                prop_assert!((lhs - rhs).abs() < 1e-12);
            }
        }

        #[test]
        fn restriction_never_makes_negative_weights(mu in arb_measure(), c in -0.7f64..0.7) {
            let r = mu.restrict(|p| p.x > c);
            prop_assert!(r.weights.iter().all(|w| *w > 0.0));
            if !r.is_empty() {
                let n = r.normalized().unwrap();
                prop_assert!((n.total_mass() - 1.0).abs() < 1e-12);
            }
        }
    }
}
