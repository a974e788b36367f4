//! Slices along lines, the roof function, the suspension flow over the skew
//! product and its factor onto slice frames.

use rayon::prelude::*;
use serde::Serialize;

use crate::affine::{aux_rng, compose_letters, limit_point, uniform_in, validate_system, CodeStream, IfsSystem};
use crate::angle::ProjectiveAngle;
use crate::error::{LabError, Result};
use crate::linalg::{self, perp, vec2, Svd2, Vec2};
use crate::measure::{slice_measure, LineMeasure, WeightedPointMeasure};
use crate::projective::{skew_step, SkewPoint};

/// Largest half-length of a segment centred at `p` in direction `e` (unit) that
/// fits in the closed unit disk; `p` must lie in the disk.
pub fn disk_half_chord(p: &Vec2, e: &Vec2) -> f64 {
    let pe = p.dot(e);
    let disc = pe * pe + 1.0 - p.norm_squared();
    disc.max(0.0).sqrt() - pe.abs()
}

/// `r₁ = inf{t : L(a, θ, t) ⊂ X}` and `r₂ = inf{t : L(a, θ, t) ⊂ X_{a₁}}` where
/// `L(a, θ, t)` is the segment of total length `e⁻ᵗ` centred at `π(a)`.
pub fn line_entry_times(ifs: &IfsSystem, code: &CodeStream, theta: ProjectiveAngle) -> Result<(f64, f64)> {
    let p = limit_point(ifs, code);
    let e = theta.unit();
    if p.norm() >= 1.0 {
        return Err(LabError::Precondition(format!("π(a) = ({}, {}) is not inside the unit disk", p.x, p.y)));
    }
    let r1 = -(2.0 * disk_half_chord(&p, &e)).ln();
    // segment ⊂ T(X) iff its preimage ⊂ X
    let t = ifs.map(code.letter(ifs, 0)).inverse()?;
    let q = t.apply(&p);
    if q.norm() >= 1.0 {
        return Err(LabError::Precondition("π(a) lies outside its first-level cylinder".into()));
    }
    let e2 = t.matrix * e;
    let len = e2.norm();
    let h2 = disk_half_chord(&q, &(e2 / len)) / len;
    let r2 = -(2.0 * h2).ln();
    Ok((r1, r2))
}

/// `r(a, θ) = r₂ − r₁`.
pub fn roof(ifs: &IfsSystem, p: &SkewPoint) -> Result<f64> {
    let (r1, r2) = line_entry_times(ifs, &p.code, p.theta)?;
    Ok(r2 - r1)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuspensionPoint {
    pub base: SkewPoint,
    pub height: f64,
}

/// `ψ_s`: raise the height by `s`, passing through the identification
/// `((a, θ), r(a, θ)) ≡ (f(a, θ), 0)` as often as needed.
pub fn suspension_step(p: &SuspensionPoint, s: f64, ifs: &IfsSystem) -> Result<SuspensionPoint> {
    if !(s >= 0.0) {
        return Err(LabError::InvalidArgument(format!("the flow runs forward only, got s = {s}")));
    }
    let mut base = p.base.clone();
    let mut h = p.height + s;
    loop {
        let r = roof(ifs, &base)?;
        if h < r {
            return Ok(SuspensionPoint { base, height: h });
        }
        h -= r;
        base = skew_step(&base, ifs);
    }
}

/// Two flow points that should coincide can straddle a roof by rounding: one
/// sits at height `r(a, θ)` below the identification, the other just past it.
/// Steps whichever is behind across the roof it sits on, if within `1e-9`.
pub fn align_at_roof(ifs: &IfsSystem, a: &mut SuspensionPoint, b: &mut SuspensionPoint) -> Result<()> {
    let step_if_behind = |x: &mut SuspensionPoint, ahead: u64| -> Result<()> {
        if x.base.code.offset + 1 == ahead {
            let r = roof(ifs, &x.base)?;
            if (r - x.height).abs() < 1e-9 {
                *x = SuspensionPoint { base: skew_step(&x.base, ifs), height: x.height - r };
            }
        }
        Ok(())
    };
    let off_b = b.base.code.offset;
    step_if_behind(a, off_b)?;
    let off_a = a.base.code.offset;
    step_if_behind(b, off_a)
}

/// A slice frame `μ_{θ,a,t}` on [−1, 1].
#[derive(Debug, Clone, Serialize)]
pub struct SliceFrame {
    pub measure: LineMeasure,
    pub theta: ProjectiveAngle,
    pub code: CodeStream,
    pub t: f64,
}

/// Strip half-width used with an `n`-point sample: `max(2⁻¹⁰, 4n^{−1/3})` for the full width.
pub fn default_strip_width(n: usize) -> f64 {
    (2f64.powi(-10)).max(4.0 * (n.max(1) as f64).powf(-1.0 / 3.0))
}

/// Where slice points come from.
pub enum SliceSource<'a> {
    /// Cut a strip of full width `eps` out of a fixed sample.
    Sample { mu: &'a WeightedPointMeasure, eps: f64 },
    /// Draw `n` exact conditional samples in a strip of full width `eps`.
    Exact { n: usize, eps: f64, seed: u64 },
}

/// A rectangle aligned with a line: `|⟨y − c, e⟩| ≤ half_len`, `|⟨y − c, e⊥⟩| ≤ half_width`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LineWindow {
    pub center: Vec2,
    pub theta: ProjectiveAngle,
    pub half_len: f64,
    pub half_width: f64,
}

impl LineWindow {
    pub fn along(&self, p: &Vec2) -> f64 {
        (p - self.center).dot(&self.theta.unit())
    }

    pub fn across(&self, p: &Vec2) -> f64 {
        (p - self.center).dot(&perp(&self.theta.unit()))
    }

    pub fn contains(&self, p: &Vec2) -> bool {
        self.along(p).abs() <= self.half_len && self.across(p).abs() <= self.half_width
    }

    /// False only if the ellipse `A·X + d` certainly misses the window.
    fn may_meet(&self, a: &linalg::Mat2, det: f64, d: &Vec2) -> bool {
        let e = self.theta.unit();
        let n = perp(&e);
        let q = d - self.center;
        // rectangle axes
        if q.dot(&e).abs() > self.half_len + (a.transpose() * e).norm() {
            return false;
        }
        if q.dot(&n).abs() > self.half_width + (a.transpose() * n).norm() {
            return false;
        }
        // minor axis of the ellipse
        let s = Svd2::with_det(a, det);
        let u = s.u2();
        let reach = self.half_len * u.dot(&e).abs() + self.half_width * u.dot(&n).abs();
        q.dot(&u).abs() <= reach + s.sigma2
    }
}

/// Cap on the frontier used to start trials below the root.
const FRONTIER_CAP: usize = 4096;
const MAX_TRIALS_PER_POINT: u64 = 50_000_000;

/// Exact i.i.d. samples from `μ` restricted to a window, optionally to the
/// cylinder of a fixed prefix as well. Cylinders are pruned only when their
/// ellipse misses the window, so every accepted point is an honest draw.
pub fn window_sample(ifs: &IfsSystem, win: &LineWindow, prefix: &[usize], n: usize, seed: u64) -> Result<Vec<Vec2>> {
    let report = validate_system(ifs);
    if !report.separation_ok || !report.norm_ok {
        return Err(LabError::Precondition("exact window sampling needs every T_i(X) inside X".into()));
    }
    ifs.check_word(prefix)?;
    let depth = ifs.depth_for(1e-17);
    // breadth-first frontier of cylinders that may meet the window, with their masses
    let mass = |w: &[usize]| w.iter().map(|&a| ifs.probabilities()[a]).product::<f64>();
    let mut frontier: Vec<Vec<usize>> = vec![prefix.to_vec()];
    loop {
        let mut next = Vec::new();
        for w in &frontier {
            for i in 0..ifs.k() {
                let mut c = w.clone();
                c.push(i);
                let comp = compose_letters(ifs, &c);
                if win.may_meet(&comp.map.matrix, comp.det, &comp.map.offset) {
                    next.push(c);
                }
            }
        }
        if next.is_empty() {
            return Err(LabError::EmptySlice);
        }
        if next.len() > FRONTIER_CAP || next[0].len() >= depth {
            break;
        }
        frontier = next;
    }
    let mut cumulative = Vec::with_capacity(frontier.len());
    let mut acc = 0.0;
    for w in &frontier {
        acc += mass(w);
        cumulative.push(acc);
    }
    let comps: Vec<_> = frontier.iter().map(|w| compose_letters(ifs, w)).collect();
    let start_len = frontier[0].len();
    (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = aux_rng(seed, i);
            for _ in 0..MAX_TRIALS_PER_POINT {
                let u = uniform_in(&mut rng, 0.0, acc);
                let j = cumulative.partition_point(|&c| c <= u).min(comps.len() - 1);
                let (mut m, mut c, mut det) = (comps[j].map.matrix, comps[j].map.offset, comps[j].det);
                let mut alive = true;
                for _ in start_len..depth {
                    let t = ifs.map(ifs.letter_for(uniform_in(&mut rng, 0.0, 1.0)));
                    c += m * t.offset;
                    m *= t.matrix;
                    det *= t.det();
                    if !win.may_meet(&m, det, &c) {
                        alive = false;
                        break;
                    }
                }
                if alive && win.contains(&c) {
                    return Ok(c);
                }
            }
            Err(LabError::EmptySlice)
        })
        .collect()
}

/// Positions along the line, relative to the window center, of points inside it.
pub fn window_positions(win: &LineWindow, points: &[Vec2]) -> Vec<f64> {
    points.iter().filter(|p| win.contains(p)).map(|p| win.along(p)).collect()
}

fn rescaled(positions: Vec<f64>, half_len: f64) -> Result<LineMeasure> {
    if positions.is_empty() {
        return Err(LabError::EmptySlice);
    }
    LineMeasure::uniform_points(positions.into_iter().map(|s| s / half_len).collect())
}

/// `μ_{θ,a,t}`: the slice through `π(a)` along direction `θ`, restricted to the
/// segment of half-length `e⁻ᵗ/2` about `π(a)` and stretched onto [−1, 1].
pub fn slice_frame(ifs: &IfsSystem, source: &SliceSource, code: &CodeStream, theta: ProjectiveAngle, t: f64) -> Result<SliceFrame> {
    slice_frame_with_prefix(ifs, source, code, theta, t, &[])
}

/// As [`slice_frame`]; an exact source can be confined to a cylinder.
pub fn slice_frame_with_prefix(
    ifs: &IfsSystem,
    source: &SliceSource,
    code: &CodeStream,
    theta: ProjectiveAngle,
    t: f64,
    prefix: &[usize],
) -> Result<SliceFrame> {
    let c = limit_point(ifs, code);
    let half_len = (-t).exp() / 2.0;
    let measure = match *source {
        SliceSource::Sample { mu, eps } => {
            // the projection normal to the line, so fibres run along θ
            let proj = ProjectiveAngle::new(theta.value() + std::f64::consts::FRAC_PI_2);
            let x = c.dot(&proj.unit());
            let s0 = c.dot(&theta.unit());
            let sl = slice_measure(mu, proj, x, eps)?;
            let mut pos = Vec::new();
            let mut wts = Vec::new();
            for (s, w) in sl.base.positions.iter().zip(&sl.base.weights) {
                // fibre coordinate runs along ±θ; fix the sign to follow θ
                let along = (s - s0) * crate::measure::fibre_direction(proj).dot(&theta.unit());
                if along.abs() <= half_len {
                    pos.push(along / half_len);
                    wts.push(*w);
                }
            }
            if pos.is_empty() {
                return Err(LabError::EmptySlice);
            }
            LineMeasure::new(pos, wts)?.normalized()?
        }
        SliceSource::Exact { n, eps, seed } => {
            let win = LineWindow { center: c, theta, half_len, half_width: eps / 2.0 };
            let pts = window_sample(ifs, &win, prefix, n, seed)?;
            rescaled(window_positions(&win, &pts), half_len)?
        }
    };
    Ok(SliceFrame { measure, theta, code: code.clone(), t })
}

/// Both sides of `μ_{θ,a,r₂(a,θ)} = μ_{φ_{a₁}(θ), σa, r₁(σa, φ_{a₁}(θ))}` drawn
/// independently. The right-hand strip is the image of the left one under
/// `T_{a₁}⁻¹`, of width `ε·|det A⁻¹| / |A⁻¹e_θ|`, and the right side is reflected
/// when `A⁻¹e_θ` points against `e_{φ(θ)}`.
pub fn self_affinity_pair(
    ifs: &IfsSystem,
    code: &CodeStream,
    theta: ProjectiveAngle,
    n: usize,
    eps: f64,
    seed: u64,
) -> Result<(SliceFrame, SliceFrame)> {
    let a1 = code.letter(ifs, 0);
    let (_, r2) = line_entry_times(ifs, code, theta)?;
    let left = slice_frame_with_prefix(ifs, &SliceSource::Exact { n, eps, seed }, code, theta, r2, &[a1])?;
    let inv = ifs.map(a1).inverse()?;
    let image = inv.matrix * theta.unit();
    let theta2 = crate::projective::phi(ifs, a1, theta);
    let code2 = code.shift();
    let (r1b, _) = line_entry_times(ifs, &code2, theta2)?;
    let delta = eps * linalg::det(&inv.matrix).abs() / image.norm();
    let mut right = slice_frame(ifs, &SliceSource::Exact { n, eps: delta, seed: seed ^ 0x5eed }, &code2, theta2, r1b)?;
    if image.dot(&theta2.unit()) < 0.0 {
        right.measure = LineMeasure::new(right.measure.positions.iter().map(|s| -s).collect(), right.measure.weights.clone())?;
    }
    Ok((left, right))
}

/// `F((a, θ), h) = μ_{a,θ,r₁(a,θ)+h}`: heights count from the moment the segment enters `X`.
pub fn factor_slice(ifs: &IfsSystem, p: &SuspensionPoint, source: &SliceSource) -> Result<SliceFrame> {
    let (r1, _) = line_entry_times(ifs, &p.base.code, p.base.theta)?;
    slice_frame(ifs, source, &p.base.code, p.base.theta, r1 + p.height)
}

/// `F₂(m) = (L × m)|_X`, normalized: horizontal coordinate uniform, vertical
/// coordinate distributed by `m`, kept if inside the unit disk.
pub fn factor_f2(m: &LineMeasure, n_pts: usize, seed: u64) -> Result<WeightedPointMeasure> {
    if m.is_empty() {
        return Err(LabError::InvalidArgument("F₂ needs a nonempty measure".into()));
    }
    let total = m.total_mass();
    let mut cumulative = Vec::with_capacity(m.len());
    let mut acc = 0.0;
    for w in &m.weights {
        acc += w / total;
        cumulative.push(acc);
    }
    let mut rng = aux_rng(seed, 0xf2);
    let mut pts = Vec::with_capacity(n_pts);
    let mut tries: u64 = 0;
    while pts.len() < n_pts {
        tries += 1;
        if tries > 1000 * n_pts as u64 + 1000 {
            return Err(LabError::Precondition("F₂: the measure puts no mass on chords of the disk".into()));
        }
        let u = uniform_in(&mut rng, 0.0, 1.0);
        let y = m.positions[cumulative.partition_point(|&c| c <= u).min(m.len() - 1)];
        let x = uniform_in(&mut rng, -1.0, 1.0);
        let p = vec2(x, y);
        if p.norm() <= 1.0 {
            pts.push(p);
        }
    }
    Ok(WeightedPointMeasure::uniform(pts))
}

#[derive(Debug, Clone, Serialize)]
pub struct LocalDimension {
    pub slope: f64,
    pub stderr: f64,
    pub radii_used: usize,
    /// Radii dropped because their window carried no mass.
    pub dropped: Vec<f64>,
}

/// Least-squares slope of `log m(B(x, r))` against `log r` on a log-spaced grid.
pub fn local_dimension(m: &LineMeasure, x: f64, r_min: f64, r_max: f64, n_r: usize) -> Result<LocalDimension> {
    if !(r_min > 0.0 && r_max > r_min) || n_r < 3 {
        return Err(LabError::InvalidArgument(format!("need 0 < r_min < r_max and n_r ≥ 3, got {r_min}, {r_max}, {n_r}")));
    }
    let total = m.total_mass();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut dropped = Vec::new();
    for i in 0..n_r {
        let r = r_min * (r_max / r_min).powf(i as f64 / (n_r - 1) as f64);
        let mass = m.mass_in(x - r, x + r) / total;
        if mass > 0.0 {
            xs.push(r.ln());
            ys.push(mass.ln());
        } else {
            dropped.push(r);
        }
    }
    if xs.len() < 3 {
        return Err(LabError::InvalidArgument(format!("only {} radii carry mass", xs.len())));
    }
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let resid: f64 = xs.iter().zip(&ys).map(|(a, b)| (b - my - slope * (a - mx)).powi(2)).sum();
    let stderr = if xs.len() > 2 { (resid / (k - 2.0) / sxx).sqrt() } else { 0.0 };
    Ok(LocalDimension { slope, stderr, radii_used: xs.len(), dropped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::sample_measure;
    use crate::fixtures;
    use crate::measure::{prokhorov_auto, prokhorov_line, DEFAULT_TOL};
    use crate::projective::{furstenberg_sample, FurstenbergOptions};
    use proptest::prelude::*;

    fn ex_theta(n: usize, seed: u64) -> Vec<ProjectiveAngle> {
        let ex = fixtures::ex_pos();
        furstenberg_sample(&ex, n, 40, seed, FurstenbergOptions::default()).unwrap().angles
    }

    /// Entry time by bisection on "both endpoints lie in the ellipse".
    fn bisect_entry(ell: &crate::ellipse::Ellipse, p: &Vec2, e: &Vec2) -> f64 {
        let inside = |t: f64| {
            let h = (-t).exp() / 2.0;
            ell.quadratic_form(&(p + e * h)) <= 1.0 && ell.quadratic_form(&(p - e * h)) <= 1.0
        };
        let (mut lo, mut hi) = (-5.0, 40.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if inside(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    #[test]
    fn centre_of_the_disk_enters_at_minus_log_two() {
        assert!((disk_half_chord(&vec2(0.0, 0.0), &vec2(0.6, 0.8)) - 1.0).abs() < 1e-15);
        let r1 = -(2.0 * disk_half_chord(&vec2(0.0, 0.0), &vec2(1.0, 0.0))).ln();
        assert!((r1 + 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn entry_times_match_bisection() {
        let ex = fixtures::ex_pos();
        let thetas = ex_theta(50, 2);
        for (s, th) in thetas.iter().enumerate() {
            let code = CodeStream::random(8, s as u64);
            let (r1, r2) = line_entry_times(&ex, &code, *th).unwrap();
            let p = limit_point(&ex, &code);
            let x = crate::ellipse::Ellipse::unit_disk();
            let xa = crate::affine::cylinder_ellipse(&ex, &crate::affine::SymbolWord::new(vec![code.letter(&ex, 0)])).unwrap();
            assert!((r1 - bisect_entry(&x, &p, &th.unit())).abs() < 1e-9);
            assert!((r2 - bisect_entry(&xa, &p, &th.unit())).abs() < 1e-9);
            assert!(r2 > r1);
        }
    }

    #[test]
    fn flow_identification() {
        let ex = fixtures::ex_pos();
        let base = SkewPoint { code: CodeStream::random(3, 3), theta: ex_theta(1, 5)[0] };
        let p = SuspensionPoint { base: base.clone(), height: 0.1 };
        assert_eq!(suspension_step(&p, 0.0, &ex).unwrap(), p);
        let r = roof(&ex, &base).unwrap();
        let q = suspension_step(&p, r - 0.1, &ex).unwrap();
        assert_eq!(q.base, skew_step(&base, &ex));
        assert!(q.height.abs() < 1e-12);
        assert!(suspension_step(&p, -1.0, &ex).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn flow_is_additive(s in 0.0f64..6.0, u in 0.0f64..6.0, stream in 0u64..1000, h in 0.0f64..1.0) {
            let ex = fixtures::ex_pos();
            let base = SkewPoint { code: CodeStream::random(11, stream), theta: ProjectiveAngle::new(-0.3 - 0.5 * h) };
            let r = roof(&ex, &base).unwrap();
            let p = SuspensionPoint { base, height: h * r * 0.999 };
            let mut once = suspension_step(&p, s + u, &ex).unwrap();
            let mut twice = suspension_step(&suspension_step(&p, s, &ex).unwrap(), u, &ex).unwrap();
            align_at_roof(&ex, &mut once, &mut twice).unwrap();
            prop_assert_eq!(&once.base.code, &twice.base.code);
            prop_assert!(once.base.theta.distance(twice.base.theta) <= 1e-9);
            prop_assert!((once.height - twice.height).abs() <= 1e-9);
        }
    }

    #[test]
    fn window_sampler_matches_rejection_from_a_big_sample() {
        let ex = fixtures::ex_pos();
        let code = CodeStream::random(4, 1);
        let c = limit_point(&ex, &code);
        let win = LineWindow { center: c, theta: ProjectiveAngle::new(-0.7), half_len: 0.3, half_width: 0.05 };
        let exact = window_sample(&ex, &win, &[], 3000, 9).unwrap();
        assert!(exact.iter().all(|p| win.contains(p)));
        let big = sample_measure(&ex, 200_000, 40, 10).unwrap();
        let naive: Vec<Vec2> = big.points.iter().filter(|p| win.contains(p)).copied().collect();
        assert!(naive.len() > 2000);
        let d = prokhorov_auto(&WeightedPointMeasure::uniform(exact), &WeightedPointMeasure::uniform(naive), DEFAULT_TOL).unwrap();
        assert!(d.d < 0.05, "{}", d.d);
        assert!(window_sample(&fixtures::pu(0.8), &win, &[], 10, 1).is_err());
    }

    #[test]
    fn product_measure_slices_are_uniform() {
        // uniform on a square: every slice is uniform
        let mut rng = aux_rng(5, 5);
        let pts: Vec<Vec2> = (0..200_000).map(|_| vec2(uniform_in(&mut rng, -0.7, 0.7), uniform_in(&mut rng, -0.7, 0.7))).collect();
        let mu = WeightedPointMeasure::uniform(pts);
        // a system whose constant code 0 sits at the origin
        let sys = IfsSystem::new(
            vec![
                crate::affine::AffineContraction::new(linalg::Mat2::identity() * 0.3, vec2(0.0, 0.0)),
                crate::affine::AffineContraction::new(linalg::Mat2::identity() * 0.3, vec2(0.5, 0.5)),
            ],
            vec![0.5, 0.5],
            false,
        )
        .unwrap();
        let code = CodeStream::constant(0, 200);
        assert!(limit_point(&sys, &code).norm() < 1e-15);
        let f = slice_frame(&sys, &SliceSource::Sample { mu: &mu, eps: 0.02 }, &code, ProjectiveAngle::HORIZONTAL, 1.0).unwrap();
        assert!((f.measure.total_mass() - 1.0).abs() < 1e-12);
        let d = prokhorov_line(&f.measure, &LineMeasure::lebesgue(2000), DEFAULT_TOL).unwrap();
        assert!(d < 0.06, "{}", d);
    }

    #[test]
    fn slices_are_self_affine() {
        let ex = fixtures::ex_pos();
        let th = ex_theta(3, 7);
        for (s, theta) in th.iter().enumerate() {
            let (l, r) = self_affinity_pair(&ex, &CodeStream::random(2, s as u64), *theta, 2000, 1e-3, 40 + s as u64).unwrap();
            let d = prokhorov_line(&l.measure, &r.measure, DEFAULT_TOL).unwrap();
            assert!(d <= 0.1, "{}", d);
        }
    }

    #[test]
    fn f2_of_simple_measures() {
        let u = factor_f2(&LineMeasure::lebesgue(4000), 100_000, 1).unwrap();
        let mut rng = aux_rng(2, 2);
        let mut disk = Vec::new();
        while disk.len() < 100_000 {
            let p = vec2(uniform_in(&mut rng, -1.0, 1.0), uniform_in(&mut rng, -1.0, 1.0));
            if p.norm() <= 1.0 {
                disk.push(p);
            }
        }
        let d = prokhorov_auto(&u, &WeightedPointMeasure::uniform(disk), DEFAULT_TOL).unwrap();
        assert!(d.d <= 0.05, "{}", d.d);
        let flat = factor_f2(&LineMeasure::dirac(0.0), 1000, 1).unwrap();
        assert!(flat.points.iter().all(|p| p.y == 0.0 && p.x.abs() <= 1.0));
        assert!((flat.total_mass() - 1.0).abs() < 1e-12);
        assert!(factor_f2(&LineMeasure::dirac(3.0), 10, 1).is_err());
    }

    #[test]
    fn local_dimension_of_lebesgue_and_atoms() {
        let leb = LineMeasure::lebesgue(200_000);
        let d = local_dimension(&leb, 0.1, 1e-3, 0.3, 12).unwrap();
        assert!((d.slope - 1.0).abs() < 0.05, "{}", d.slope);
        let atom = LineMeasure::dirac(0.2);
        let d = local_dimension(&atom, 0.2, 1e-3, 0.3, 12).unwrap();
        assert!(d.slope.abs() < 1e-12);
        let sparse = LineMeasure::uniform_points(vec![0.5, 0.9]).unwrap();
        let d = local_dimension(&sparse, 0.5, 1e-3, 0.5, 12).unwrap();
        assert!(d.dropped.is_empty());
    }

    #[test]
    fn factor_map_is_equivariant() {
        let ex = fixtures::ex_pos();
        let th = ex_theta(2, 9);
        for (s, theta) in th.iter().enumerate() {
            let p = SuspensionPoint { base: SkewPoint { code: CodeStream::random(6, s as u64), theta: *theta }, height: 0.2 };
            let q = suspension_step(&p, 0.5, &ex).unwrap();
            let src = SliceSource::Exact { n: 2000, eps: 1e-3, seed: 3 };
            let a = factor_slice(&ex, &q, &src).unwrap();
            let (r1, _) = line_entry_times(&ex, &p.base.code, p.base.theta).unwrap();
            let b = slice_frame(&ex, &SliceSource::Exact { n: 2000, eps: 1e-3, seed: 4 }, &p.base.code, p.base.theta, r1 + 0.7).unwrap();
            let d = prokhorov_line(&a.measure, &b.measure, DEFAULT_TOL).unwrap();
            assert!(d <= 0.1, "{}", d);
        }
    }
}
