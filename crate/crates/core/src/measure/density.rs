//! Kernel density estimate on the line and a heuristic singularity score.

use serde::Serialize;

use super::LineMeasure;
use crate::error::{LabError, Result};

pub const KDE_GRID: usize = 512;
/// Densities below this multiple of the flat density on the hull count as "empty".
const LOW_DENSITY_FRACTION: f64 = 0.05;
const MIN_POINTS: usize = 100;

#[derive(Debug, Clone, Serialize)]
pub struct DensityReport {
    pub grid: Vec<f64>,
    pub density: Vec<f64>,
    pub bandwidth: f64,
    /// Fraction of the support hull where the estimate falls below the
    /// threshold. Heuristic: near 0 looks absolutely continuous at this
    /// resolution, near 1 looks singular.
    pub score: f64,
    pub threshold: f64,
    pub hull: (f64, f64),
}

fn weighted_std(m: &LineMeasure) -> f64 {
    let mean = m.mean();
    let var = m.positions.iter().zip(&m.weights).map(|(x, w)| w * (x - mean).powi(2)).sum::<f64>() / m.total_mass();
    var.max(0.0).sqrt()
}

/// Silverman's rule of thumb, `0.9 · min(σ, IQR / 1.34) · n^(−1/5)`.
pub fn silverman_bandwidth(m: &LineMeasure) -> f64 {
    let sd = weighted_std(m);
    let iqr = m.quantile(0.75) - m.quantile(0.25);
    let spread = if iqr > 0.0 { sd.min(iqr / 1.34) } else { sd };
    0.9 * spread * (m.len() as f64).powf(-0.2)
}

pub fn density_diagnostic(m: &LineMeasure, bandwidth: Option<f64>) -> Result<DensityReport> {
    if m.len() < MIN_POINTS {
        return Err(LabError::InvalidArgument(format!("need at least {MIN_POINTS} points, got {}", m.len())));
    }
    let (lo, hi) = (m.positions[0], m.positions[m.len() - 1]);
    let h = match bandwidth {
        Some(h) if h > 0.0 && h.is_finite() => h,
        Some(h) => return Err(LabError::InvalidArgument(format!("degenerate bandwidth {h}"))),
        None => silverman_bandwidth(m),
    };
    if hi - lo <= 0.0 {
        // a single atom: nothing of the hull is covered by mass spread out
        return Ok(DensityReport { grid: vec![lo], density: vec![f64::INFINITY], bandwidth: h, score: 1.0, threshold: 0.0, hull: (lo, hi) });
    }
    if !(h > 0.0) {
        return Err(LabError::InvalidArgument("degenerate bandwidth 0".into()));
    }
    let total = m.total_mass();
    let norm = 1.0 / (h * (2.0 * std::f64::consts::PI).sqrt() * total);
    let grid: Vec<f64> = (0..KDE_GRID).map(|i| lo + (hi - lo) * i as f64 / (KDE_GRID - 1) as f64).collect();
    let density: Vec<f64> = grid
        .iter()
        .map(|&x| {
            let a = m.positions.partition_point(|&p| p < x - 8.0 * h);
            let b = m.positions.partition_point(|&p| p <= x + 8.0 * h);
            let s: f64 = (a..b).map(|i| m.weights[i] * (-0.5 * ((x - m.positions[i]) / h).powi(2)).exp()).sum();
            s * norm
        })
        .collect();
    let threshold = LOW_DENSITY_FRACTION / (hi - lo);
    let low = density.iter().filter(|&&d| d < threshold).count();
    Ok(DensityReport { grid, density, bandwidth: h, score: low as f64 / KDE_GRID as f64, threshold, hull: (lo, hi) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_scores_near_zero() {
        let m = LineMeasure::lebesgue(10_000);
        let r = density_diagnostic(&m, None).unwrap();
        assert!(r.score < 0.01, "{}", r.score);
        let mid = r.density[KDE_GRID / 2];
        assert!((mid - 0.5).abs() < 0.01, "{mid}");
    }

    #[test]
    fn atoms_score_near_one() {
        let d = LineMeasure::uniform_points(vec![0.2; 200]).unwrap();
        assert_eq!(density_diagnostic(&d, None).unwrap().score, 1.0);
        // two far-apart clusters of atoms leave the middle empty
        let mut pos = vec![-0.9; 100];
        pos.extend(vec![0.9; 100]);
        let r = density_diagnostic(&LineMeasure::uniform_points(pos).unwrap(), Some(0.01)).unwrap();
        assert!(r.score > 0.9, "{}", r.score);
    }

    #[test]
    fn bad_inputs() {
        let few = LineMeasure::uniform_points(vec![0.0, 0.1]).unwrap();
        assert!(density_diagnostic(&few, None).is_err());
        let m = LineMeasure::lebesgue(200);
        assert!(density_diagnostic(&m, Some(0.0)).is_err());
        assert!(density_diagnostic(&m, Some(f64::NAN)).is_err());
    }
}
