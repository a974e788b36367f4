//! Prokhorov distance through Strassen's theorem: `d(μ, ν) ≤ ε` iff some
//! coupling moves mass at least `1 − ε` between points at distance `≤ ε`.
//! For finite supports that is a bipartite max-flow question, and the
//! smallest feasible `ε` is located by bisection.

use serde::Serialize;

use super::maxflow::FlowNetwork;
use super::{coarsen, coarsen_line, LineMeasure, WeightedPointMeasure};
use crate::error::{LabError, Result};

pub const DEFAULT_TOL: f64 = 1e-3;
pub const SUPPORT_CAP: usize = 2000;

/// Slack on the transported mass, absorbing rounding in the flow.
const FLOW_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct ProkhorovReport {
    pub d: f64,
    pub tol: f64,
    pub supports: (usize, usize),
    pub iterations: usize,
    /// Grid used for coarsening, if any; the coarsened supports moved by at
    /// most one half cell diagonal.
    pub grid_n: Option<usize>,
}

fn feasible(mu: &WeightedPointMeasure, nu: &WeightedPointMeasure, nu_order: &[usize], eps: f64) -> bool {
    let (n, m) = (mu.len(), nu.len());
    let (s, t) = (n + m, n + m + 1);
    let mut g = FlowNetwork::new(n + m + 2);
    for (i, &w) in mu.weights.iter().enumerate() {
        g.add_edge(s, i, w);
    }
    for (j, &w) in nu.weights.iter().enumerate() {
        g.add_edge(n + j, t, w);
    }
    let xs: Vec<f64> = nu_order.iter().map(|&j| nu.points[j].x).collect();
    let eps2 = eps * eps;
    for (i, p) in mu.points.iter().enumerate() {
        let lo = xs.partition_point(|&x| x < p.x - eps);
        let hi = xs.partition_point(|&x| x <= p.x + eps);
        for &j in &nu_order[lo..hi] {
            if (nu.points[j] - p).norm_squared() <= eps2 {
                g.add_edge(i, n + j, f64::INFINITY);
            }
        }
    }
    g.max_flow(s, t) >= 1.0 - eps - FLOW_SLACK
}

fn run(mu: &WeightedPointMeasure, nu: &WeightedPointMeasure, tol: f64) -> (f64, usize) {
    let mut order: Vec<usize> = (0..nu.len()).collect();
    order.sort_by(|&a, &b| nu.points[a].x.total_cmp(&nu.points[b].x));
    let mut iterations = 1;
    if feasible(mu, nu, &order, 0.0) {
        return (0.0, iterations);
    }
    // exponential search keeps the edge sets small when the answer is small
    let (mut lo, mut hi) = (0.0, tol.min(1.0));
    loop {
        iterations += 1;
        if hi >= 1.0 || feasible(mu, nu, &order, hi) {
            break;
        }
        lo = hi;
        hi = (2.0 * hi).min(1.0);
    }
    while hi - lo > tol {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        if feasible(mu, nu, &order, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (0.5 * (lo + hi), iterations)
}

/// Prokhorov distance within `tol` of the true value. Supports beyond
/// [`SUPPORT_CAP`] are refused; see [`prokhorov_auto`].
pub fn prokhorov_distance(mu: &WeightedPointMeasure, nu: &WeightedPointMeasure, tol: f64) -> Result<f64> {
    Ok(prokhorov_report(mu, nu, tol)?.d)
}

pub fn prokhorov_report(mu: &WeightedPointMeasure, nu: &WeightedPointMeasure, tol: f64) -> Result<ProkhorovReport> {
    mu.check_normalized()?;
    nu.check_normalized()?;
    if !(tol > 0.0) {
        return Err(LabError::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    for m in [mu, nu] {
        if m.len() > SUPPORT_CAP {
            return Err(LabError::SupportCap { size: m.len(), cap: SUPPORT_CAP });
        }
    }
    let (d, iterations) = run(mu, nu, tol);
    Ok(ProkhorovReport { d, tol, supports: (mu.len(), nu.len()), iterations, grid_n: None })
}

/// Like [`prokhorov_distance`] but coarsens both measures on the finest
/// common grid that fits under the support cap.
pub fn prokhorov_auto(mu: &WeightedPointMeasure, nu: &WeightedPointMeasure, tol: f64) -> Result<ProkhorovReport> {
    if mu.len() <= SUPPORT_CAP && nu.len() <= SUPPORT_CAP {
        return prokhorov_report(mu, nu, tol);
    }
    let fits = |g: usize| coarsen(mu, g).len() <= SUPPORT_CAP && coarsen(nu, g).len() <= SUPPORT_CAP;
    let (mut lo, mut hi) = (1usize, 4096usize);
    if fits(hi) {
        lo = hi;
    }
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut r = prokhorov_report(&coarsen(mu, lo), &coarsen(nu, lo), tol)?;
    r.grid_n = Some(lo);
    Ok(r)
}

/// Prokhorov distance between measures on the line, coarsening on a grid of
/// width `2 / SUPPORT_CAP` when needed.
pub fn prokhorov_line(a: &LineMeasure, b: &LineMeasure, tol: f64) -> Result<f64> {
    let prep = |m: &LineMeasure| if m.len() > SUPPORT_CAP { coarsen_line(m, SUPPORT_CAP / 2) } else { m.clone() };
    prokhorov_distance(&prep(a).to_planar(), &prep(b).to_planar(), tol)
}
