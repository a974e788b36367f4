//! Brute-force Prokhorov distance for tiny supports, straight from the
//! definition: `d ≤ ε` iff `μ(A) ≤ ν(A^ε) + ε` and `ν(A) ≤ μ(A^ε) + ε` for every
//! subset `A` of the supports. No flows, no couplings.

use crate::error::{LabError, Result};
use crate::measure::WeightedPointMeasure;

pub const MAX_ORACLE_SUPPORT: usize = 10;

fn one_sided(mu: &WeightedPointMeasure, nu: &WeightedPointMeasure, eps: f64) -> bool {
    let n = mu.len();
    for mask in 1u32..(1 << n) {
        let mass_a: f64 = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| mu.weights[i]).sum();
        let mass_nbhd: f64 = nu
            .points
            .iter()
            .zip(&nu.weights)
            .filter(|(q, _)| (0..n).any(|i| mask >> i & 1 == 1 && (mu.points[i] - *q).norm() <= eps))
            .map(|(_, w)| w)
            .sum();
        if mass_a > mass_nbhd + eps + 1e-12 {
            return false;
        }
    }
    true
}

/// Whether both defining inequalities hold at `eps`.
pub fn prokhorov_holds(mu: &WeightedPointMeasure, nu: &WeightedPointMeasure, eps: f64) -> bool {
    one_sided(mu, nu, eps) && one_sided(nu, mu, eps)
}

/// Smallest `ε` on the grid of spacing `step` at which the inequalities hold.
/// The predicate is monotone in `ε`, so a coarse sweep brackets the answer and
/// a fine sweep of the bracket finishes it.
pub fn prokhorov_sweep(mu: &WeightedPointMeasure, nu: &WeightedPointMeasure, step: f64) -> Result<f64> {
    if mu.len() > MAX_ORACLE_SUPPORT || nu.len() > MAX_ORACLE_SUPPORT {
        return Err(LabError::SupportCap { size: mu.len().max(nu.len()), cap: MAX_ORACLE_SUPPORT });
    }
    if !(step > 0.0) {
        return Err(LabError::InvalidArgument(format!("sweep step must be positive, got {step}")));
    }
    let coarse = (step * 100.0).min(0.01);
    let mut k = 0usize;
    while !prokhorov_holds(mu, nu, k as f64 * coarse) {
        k += 1;
    }
    if k == 0 {
        return Ok(0.0);
    }
    let lo = (k - 1) as f64 * coarse;
    let mut j = 1usize;
    while !prokhorov_holds(mu, nu, lo + j as f64 * step) {
        j += 1;
    }
    Ok(lo + j as f64 * step)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vec2;

    #[test]
    fn known_values() {
        let a = WeightedPointMeasure::dirac(vec2(0.0, 0.0));
        assert_eq!(prokhorov_sweep(&a, &a, 1e-4).unwrap(), 0.0);
        let b = WeightedPointMeasure::dirac(vec2(0.3, 0.0));
        // two Diracs at distance 0.3: d = 0.3
        assert!((prokhorov_sweep(&a, &b, 1e-4).unwrap() - 0.3).abs() <= 1e-4 + 1e-12);
        let far = WeightedPointMeasure::dirac(vec2(5.0, 0.0));
        assert!((prokhorov_sweep(&a, &far, 1e-4).unwrap() - 1.0).abs() <= 1e-4 + 1e-12);
        // move mass 0.2 far away: d = 0.2
        let c = WeightedPointMeasure::new(vec![vec2(0.0, 0.0), vec2(4.0, 0.0)], vec![0.8, 0.2]).unwrap();
        assert!((prokhorov_sweep(&a, &c, 1e-4).unwrap() - 0.2).abs() <= 1e-4 + 1e-12);
        let big = WeightedPointMeasure::uniform(vec![vec2(0.0, 0.0); 11]);
        assert!(prokhorov_sweep(&big, &a, 1e-4).is_err());
    }
}
