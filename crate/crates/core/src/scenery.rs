//! The zoom flow `S_{t,x}`, pull-backs of small balls through cylinder maps,
//! the dilated measures `ν(a, θ, t)` and empirical scenery distributions.

use std::f64::consts::TAU;

use serde::Serialize;

use crate::affine::{axes_of, compose_letters, limit_point, CodeStream, IfsSystem, SingularAxes};
use crate::angle::ProjectiveAngle;
use crate::ellipse::Ellipse;
use crate::error::{LabError, Result};
use crate::linalg::{self, rotation, unit, vec2, Svd2, Vec2};
use crate::measure::WeightedPointMeasure;
use crate::projective::phi_reversed;

/// Safety margin in the quadratic form when deciding ball-in-ellipse containment.
pub const CONTAINMENT_MARGIN: f64 = 1e-10;
/// Relative slack accepted in `e^{-t} ≤ α₂` for the pull-back.
const PULLBACK_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum FrameBase {
    Point([f64; 2]),
    Code(CodeStream),
}

#[derive(Debug, Clone)]
pub struct SceneryFrame {
    pub measure: WeightedPointMeasure,
    pub t: f64,
    pub base: FrameBase,
    /// Rotation already applied to the frame, 0 if none.
    pub derotation: f64,
    /// Cylinder depth and direction for frames built through a pull-back.
    pub n: Option<usize>,
    pub theta: Option<ProjectiveAngle>,
}

impl SceneryFrame {
    fn plain(measure: WeightedPointMeasure, t: f64, x: Vec2) -> Self {
        SceneryFrame { measure, t, base: FrameBase::Point([x.x, x.y]), derotation: 0.0, n: None, theta: None }
    }
}

/// `S_{t,x}(μ)`: restrict to the closed ball `B(x, e⁻ᵗ)`, recentre, dilate by `eᵗ`, renormalize.
pub fn zoom_frame(mu: &WeightedPointMeasure, x: Vec2, t: f64) -> Result<SceneryFrame> {
    let r = (-t).exp();
    let scale = t.exp();
    let mut out = WeightedPointMeasure::default();
    for (p, &w) in mu.points.iter().zip(&mu.weights) {
        let q = p - x;
        if w > 0.0 && q.norm() <= r {
            out.points.push(q * scale);
            out.weights.push(w);
        }
    }
    if out.is_empty() {
        return Err(LabError::EmptyWindow { x: x.x, y: x.y, t });
    }
    Ok(SceneryFrame::plain(out.normalized()?, t, x))
}

/// Square version of the zoom: the square of side `2e⁻ᵗ` centred at `x` is
/// stretched onto [−1, 1]².
pub fn square_frame(mu: &WeightedPointMeasure, x: Vec2, t: f64) -> Result<SceneryFrame> {
    let r = (-t).exp();
    let scale = t.exp();
    let mut out = WeightedPointMeasure::default();
    for (p, &w) in mu.points.iter().zip(&mu.weights) {
        let q = p - x;
        if w > 0.0 && q.x.abs() <= r && q.y.abs() <= r {
            out.points.push(q * scale);
            out.weights.push(w);
        }
    }
    if out.is_empty() {
        return Err(LabError::EmptyWindow { x: x.x, y: x.y, t });
    }
    Ok(SceneryFrame::plain(out.normalized()?, t, x))
}

/// Largest value of the ellipse's quadratic form on the circle `|p − c| = r`.
/// The ball lies in the ellipse iff this is at most 1.
pub fn ball_max_form(e: &Ellipse, c: &Vec2, r: f64) -> f64 {
    // work in the ellipse frame to keep digits on thin ellipses
    let q = c - e.center;
    let u0 = q.dot(&e.major_axis());
    let v0 = q.dot(&e.minor_axis());
    let (a2, b2) = (e.semi_major * e.semi_major, e.semi_minor * e.semi_minor);
    let f = |s: f64| {
        let (sn, cs) = s.sin_cos();
        let u = u0 + r * cs;
        let v = v0 + r * sn;
        u * u / a2 + v * v / b2
    };
    let df = |s: f64| {
        let (sn, cs) = s.sin_cos();
        2.0 * r * (-(u0 + r * cs) * sn / a2 + (v0 + r * sn) * cs / b2)
    };
    let d2f = |s: f64| {
        let (sn, cs) = s.sin_cos();
        2.0 * r * ((r * sn * sn - (u0 + r * cs) * cs) / a2 + (r * cs * cs - (v0 + r * sn) * sn) / b2)
    };
    const N: usize = 64;
    let mut scored: Vec<(f64, f64)> = (0..N).map(|i| TAU * i as f64 / N as f64).map(|s| (f(s), s)).collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best = scored[0].0;
    for &(_, s0) in scored.iter().take(4) {
        let mut s = s0;
        for _ in 0..30 {
            let h = d2f(s);
            if h >= 0.0 {
                break;
            }
            let step = df(s) / h;
            s -= step.clamp(-0.1, 0.1);
            if step.abs() < 1e-15 {
                break;
            }
        }
        best = best.max(f(s));
    }
    best
}

pub fn ball_in_ellipse(e: &Ellipse, c: &Vec2, r: f64) -> bool {
    ball_max_form(e, c, r) <= 1.0 - CONTAINMENT_MARGIN
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Window {
    pub n: usize,
    /// False when the ball is not even inside the unit disk; `n` is then 0.
    pub inside: bool,
}

/// Largest `n` with `B(π(a), e⁻ᵗ) ⊂ X_{a₁⋯aₙ}`.
pub fn window_n(ifs: &IfsSystem, code: &CodeStream, t: f64) -> Window {
    let c = limit_point(ifs, code);
    window_at(ifs, code, &c, t)
}

fn window_at(ifs: &IfsSystem, code: &CodeStream, c: &Vec2, t: f64) -> Window {
    let r = (-t).exp();
    if !ball_in_ellipse(&Ellipse::unit_disk(), c, r) {
        return Window { n: 0, inside: false };
    }
    let mut n = 0;
    let mut word = Vec::new();
    loop {
        word.push(code.letter(ifs, n));
        let comp = compose_letters(ifs, &word);
        let Ok(e) = Ellipse::image_of_disk_with_det(&comp.map, comp.det) else { break };
        // a ball wider than the minor axis cannot fit
        if e.semi_minor < r || !ball_in_ellipse(&e, c, r) {
            break;
        }
        n += 1;
        if n > 10_000 {
            break;
        }
    }
    Window { n, inside: true }
}

#[derive(Debug, Clone, Serialize)]
pub struct PullBack {
    pub ellipse: Ellipse,
    pub n: usize,
    pub axes: Option<SingularAxes>,
    /// Angle between the stated major direction and the one read off the SVD
    /// of the inverse composite.
    pub orientation_gap: f64,
}

/// `T_{a₁⋯aₙ}⁻¹(B(π(a), e⁻ᵗ))` with `n` from [`window_n`].
pub fn pull_back_ball(ifs: &IfsSystem, code: &CodeStream, t: f64) -> Result<PullBack> {
    let w = window_n(ifs, code, t);
    if !w.inside {
        return Err(LabError::Precondition(format!("ball of radius e^-{t} around the code point leaves the unit disk")));
    }
    pull_back_ball_at_depth(ifs, code, t, w.n)
}

/// Same as [`pull_back_ball`] at an explicit depth; requires `e⁻ᵗ ≤ α₂(a₁⋯aₙ)`.
///
/// The ellipse is centred at `π(σⁿa)`, has semi-axes `e⁻ᵗ/α₂` and `e⁻ᵗ/α₁`,
/// and its major axis points along `φ_{aₙ} ∘ ⋯ ∘ φ_{a₁}(θ(a₁⋯aₙ))`.
pub fn pull_back_ball_at_depth(ifs: &IfsSystem, code: &CodeStream, t: f64, n: usize) -> Result<PullBack> {
    let r = (-t).exp();
    let center = limit_point(ifs, &code.shift_by(n));
    if n == 0 {
        return Ok(PullBack { ellipse: Ellipse::circle(center, r), n, axes: None, orientation_gap: 0.0 });
    }
    let word = code.word(ifs, n);
    let comp = compose_letters(ifs, &word);
    let axes = axes_of(&comp);
    if r > axes.alpha2 * (1.0 + PULLBACK_SLACK) {
        return Err(LabError::Precondition(format!(
            "e^-t = {r:e} exceeds the minor semi-axis {:e} of the depth-{n} cylinder",
            axes.alpha2
        )));
    }
    let orientation = phi_reversed(ifs, &word, axes.minor_dir);
    let inv = linalg::inverse(&comp.map.matrix).ok_or(LabError::SingularMatrix)?;
    let svd_inv = Svd2::with_det(&inv, 1.0 / comp.det);
    let orientation_gap = orientation.distance(ProjectiveAngle::new(svd_inv.left));
    let ellipse = Ellipse::new(center, r / axes.alpha2, r / axes.alpha1, orientation)?;
    Ok(PullBack { ellipse, n, axes: Some(axes), orientation_gap })
}

/// `D_Y(μ|_Y)`, renormalized.
pub fn dilate_ellipse_measure(mu: &WeightedPointMeasure, y: &Ellipse) -> Result<WeightedPointMeasure> {
    let mut out = WeightedPointMeasure::default();
    for (p, &w) in mu.points.iter().zip(&mu.weights) {
        if w > 0.0 && y.quadratic_form(p) <= 1.0 {
            out.points.push(y.dilate(p));
            out.weights.push(w);
        }
    }
    if out.is_empty() {
        return Err(LabError::EmptyEllipse);
    }
    out.normalized()
}

/// Uniform bucket grid over a point cloud for thin-window queries.
#[derive(Debug, Clone)]
pub struct PointIndex {
    lo: Vec2,
    cell: f64,
    nx: usize,
    ny: usize,
    start: Vec<usize>,
    order: Vec<usize>,
}

impl PointIndex {
    pub fn new(mu: &WeightedPointMeasure) -> Self {
        let n = mu.len().max(1);
        let (mut lo, mut hi) = (vec2(f64::INFINITY, f64::INFINITY), vec2(f64::NEG_INFINITY, f64::NEG_INFINITY));
        for p in &mu.points {
            lo = lo.inf(p);
            hi = hi.sup(p);
        }
        if mu.is_empty() {
            lo = vec2(0.0, 0.0);
            hi = vec2(1.0, 1.0);
        }
        let span = (hi - lo).max().max(1e-12);
        let side = ((n as f64 / 4.0).sqrt().ceil() as usize).clamp(1, 4096);
        let cell = span / side as f64 * (1.0 + 1e-12);
        let nx = (((hi.x - lo.x) / cell).floor() as usize + 1).max(1);
        let ny = (((hi.y - lo.y) / cell).floor() as usize + 1).max(1);
        let key = |p: &Vec2| {
            let i = (((p.x - lo.x) / cell) as usize).min(nx - 1);
            let j = (((p.y - lo.y) / cell) as usize).min(ny - 1);
            j * nx + i
        };
        let mut count = vec![0usize; nx * ny + 1];
        for p in &mu.points {
            count[key(p) + 1] += 1;
        }
        for i in 0..nx * ny {
            count[i + 1] += count[i];
        }
        let mut fill = count.clone();
        let mut order = vec![0; mu.len()];
        for (idx, p) in mu.points.iter().enumerate() {
            let k = key(p);
            order[fill[k]] = idx;
            fill[k] += 1;
        }
        PointIndex { lo, cell, nx, ny, start: count, order }
    }

    /// Indices of points that may lie in the oriented rectangle with the given
    /// center, unit axes and half-lengths. Candidates only; callers test exactly.
    pub fn candidates_in_rect(&self, center: &Vec2, axis_u: &Vec2, half_u: f64, half_v: f64, out: &mut Vec<usize>) {
        out.clear();
        let axis_v = vec2(-axis_u.y, axis_u.x);
        let wx = half_u * axis_u.x.abs() + half_v * axis_v.x.abs();
        let wy = half_u * axis_u.y.abs() + half_v * axis_v.y.abs();
        if center.x + wx < self.lo.x || center.y + wy < self.lo.y {
            return;
        }
        if center.x - wx > self.lo.x + self.cell * self.nx as f64 || center.y - wy > self.lo.y + self.cell * self.ny as f64 {
            return;
        }
        let to_i = |x: f64, lo: f64, n: usize| (((x - lo) / self.cell).floor().max(0.0) as usize).min(n - 1);
        let (i0, i1) = (to_i(center.x - wx, self.lo.x, self.nx), to_i(center.x + wx, self.lo.x, self.nx));
        let (j0, j1) = (to_i(center.y - wy, self.lo.y, self.ny), to_i(center.y + wy, self.lo.y, self.ny));
        let half_diag = self.cell * std::f64::consts::FRAC_1_SQRT_2;
        for j in j0..=j1 {
            for i in i0..=i1 {
                let c = self.lo + vec2((i as f64 + 0.5) * self.cell, (j as f64 + 0.5) * self.cell) - center;
                if c.dot(axis_u).abs() > half_u + half_diag || c.dot(&axis_v).abs() > half_v + half_diag {
                    continue;
                }
                let k = j * self.nx + i;
                out.extend_from_slice(&self.order[self.start[k]..self.start[k + 1]]);
            }
        }
    }
}

/// [`dilate_ellipse_measure`] through an index; same result, far fewer point tests.
pub fn dilate_ellipse_indexed(mu: &WeightedPointMeasure, index: &PointIndex, y: &Ellipse) -> Result<WeightedPointMeasure> {
    let mut cand = Vec::new();
    index.candidates_in_rect(&y.center, &y.major_axis(), y.semi_major, y.semi_minor, &mut cand);
    cand.sort_unstable();
    let mut out = WeightedPointMeasure::default();
    for &i in &cand {
        let (p, w) = (&mu.points[i], mu.weights[i]);
        if w > 0.0 && y.quadratic_form(p) <= 1.0 {
            out.points.push(y.dilate(p));
            out.weights.push(w);
        }
    }
    if out.is_empty() {
        return Err(LabError::EmptyEllipse);
    }
    out.normalized()
}

/// The ellipse `Y` behind `ν(a, θ, t)` at depth `n`: centred at `π(σⁿa)`,
/// major axis `e⁻ᵗ/α₂` along `φ_{aₙ} ∘ ⋯ ∘ φ_{a₁}(θ)`, minor axis `e⁻ᵗ/α₁`.
pub fn nu_ellipse(ifs: &IfsSystem, code: &CodeStream, theta: ProjectiveAngle, t: f64, n: usize) -> Result<Ellipse> {
    let r = (-t).exp();
    let center = limit_point(ifs, &code.shift_by(n));
    if n == 0 {
        return Ok(Ellipse { center, semi_major: r, semi_minor: r, orientation: theta });
    }
    let word = code.word(ifs, n);
    let axes = axes_of(&compose_letters(ifs, &word));
    Ellipse::new(center, r / axes.alpha2, r / axes.alpha1, phi_reversed(ifs, &word, theta))
}

/// Source of sample points for frames: a measure with an optional index.
pub struct Sample<'a> {
    pub mu: &'a WeightedPointMeasure,
    pub index: Option<&'a PointIndex>,
}

impl<'a> Sample<'a> {
    pub fn plain(mu: &'a WeightedPointMeasure) -> Self {
        Sample { mu, index: None }
    }

    pub fn dilate(&self, y: &Ellipse) -> Result<WeightedPointMeasure> {
        match self.index {
            Some(ix) => dilate_ellipse_indexed(self.mu, ix, y),
            None => dilate_ellipse_measure(self.mu, y),
        }
    }
}

/// `ν(a, θ, t)` with the depth taken from [`window_n`].
pub fn nu_frame(ifs: &IfsSystem, sample: &Sample, code: &CodeStream, theta: ProjectiveAngle, t: f64) -> Result<SceneryFrame> {
    let w = window_n(ifs, code, t);
    if !w.inside {
        return Err(LabError::Precondition(format!("no cylinder window at t = {t}")));
    }
    nu_frame_at_depth(ifs, sample, code, theta, t, w.n)
}

pub fn nu_frame_at_depth(
    ifs: &IfsSystem,
    sample: &Sample,
    code: &CodeStream,
    theta: ProjectiveAngle,
    t: f64,
    n: usize,
) -> Result<SceneryFrame> {
    let y = nu_ellipse(ifs, code, theta, t, n)?;
    let measure = sample.dilate(&y)?;
    Ok(SceneryFrame { measure, t, base: FrameBase::Code(code.clone()), derotation: 0.0, n: Some(n), theta: Some(theta) })
}

/// `S_{t,a}(μ)` computed as `R_{θ⊥}(ν(a, θ(a₁⋯aₙ), t))`, which stays exact at
/// depths no direct sample can reach.
pub fn deep_zoom_frame(ifs: &IfsSystem, sample: &Sample, code: &CodeStream, t: f64) -> Result<SceneryFrame> {
    let w = window_n(ifs, code, t);
    if !w.inside || w.n == 0 {
        return Err(LabError::Precondition(format!("no cylinder window at t = {t}")));
    }
    let maps = DecompositionMaps::new(ifs, code, t, w.n)?;
    let nu = nu_frame_at_depth(ifs, sample, code, maps.theta_w, t, w.n)?;
    Ok(SceneryFrame { measure: nu.measure.rotated(maps.rotation), ..nu })
}

/// Both sides of `S_{t,a} = R_{θ⊥} ∘ D ∘ T_w⁻¹` as point maps.
#[derive(Debug, Clone)]
pub struct DecompositionMaps {
    pub center: Vec2,
    pub t: f64,
    pub n: usize,
    pub inverse: crate::affine::AffineContraction,
    pub y: Ellipse,
    pub theta_w: ProjectiveAngle,
    /// Lift of `θ⊥(a₁⋯aₙ)` used by the rotation.
    pub rotation: f64,
}

impl DecompositionMaps {
    pub fn new(ifs: &IfsSystem, code: &CodeStream, t: f64, n: usize) -> Result<Self> {
        let word = code.word(ifs, n);
        let comp = compose_letters(ifs, &word);
        if comp.det <= 0.0 {
            return Err(LabError::Precondition("the decomposition needs an orientation-preserving cylinder map".into()));
        }
        let inverse = comp.map.inverse()?;
        let axes = axes_of(&comp);
        let pb = pull_back_ball_at_depth(ifs, code, t, n)?;
        let y = pb.ellipse;
        // θ⊥ is the major direction of X_w; its lift is fixed by requiring
        // the composite to send u₂ = direction θ(w) to the upward vertical
        let beta = axes.major_dir.value();
        let u2 = linalg::perp(&unit(beta));
        let sign = (inverse.matrix * u2).dot(&y.major_axis());
        let rotation = if sign >= 0.0 { beta } else { beta + std::f64::consts::PI };
        Ok(DecompositionMaps { center: comp.map.apply(&y.center), t, n, inverse, y, theta_w: axes.minor_dir, rotation })
    }

    pub fn lhs(&self, p: &Vec2, base: &Vec2) -> Vec2 {
        (p - base) * self.t.exp()
    }

    pub fn rhs(&self, p: &Vec2) -> Vec2 {
        rotation(self.rotation) * self.y.dilate(&self.inverse.apply(p))
    }
}

/// Largest distance between `S_{t,a}(y) = eᵗ(y − π(a))` and `R_{θ⊥} D T_w⁻¹(y)`
/// over `n_pts` points of the ball `B(π(a), e⁻ᵗ)`.
pub fn decompose_check(ifs: &IfsSystem, code: &CodeStream, t: f64, n_pts: usize) -> Result<f64> {
    let base = limit_point(ifs, code);
    let w = window_at(ifs, code, &base, t);
    if !w.inside || w.n == 0 {
        return Err(LabError::Precondition(format!("the ball at t = {t} is not inside any first-level cylinder")));
    }
    let maps = DecompositionMaps::new(ifs, code, t, w.n)?;
    let r = (-t).exp();
    let mut worst: f64 = (maps.rhs(&base) - vec2(0.0, 0.0)).norm();
    // a deterministic spiral through the closed ball, boundary included
    for i in 0..n_pts {
        let rho = r * ((i as f64 + 0.5) / n_pts as f64).sqrt();
        let rho = if i + 1 == n_pts { r } else { rho };
        let ang = i as f64 * 2.399_963_229_728_653;
        let p = base + unit(ang) * rho;
        worst = worst.max((maps.lhs(&p, &base) - maps.rhs(&p)).norm());
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WindowMode {
    Ball,
    Square,
}

#[derive(Debug, Clone)]
pub struct EmpiricalDistribution {
    pub frames: Vec<SceneryFrame>,
    /// Times whose window came out empty; recorded, never interpolated.
    pub skipped: Vec<f64>,
}

impl EmpiricalDistribution {
    pub fn times(&self) -> Vec<f64> {
        self.frames.iter().map(|f| f.t).collect()
    }
}

/// Frame times `dt, 2dt, …` up to `T`.
pub fn frame_times(t_max: f64, dt: f64) -> Result<Vec<f64>> {
    if !(dt > 0.0) || !(t_max >= dt) {
        return Err(LabError::InvalidArgument(format!("need dt > 0 and T >= dt, got dt = {dt}, T = {t_max}")));
    }
    let count = (t_max / dt + 1e-9).floor() as usize;
    Ok((1..=count).map(|k| k as f64 * dt).collect())
}

/// Builds frames with `make` at every time, skipping empty windows.
pub fn distribution_from(times: &[f64], make: impl Fn(f64) -> Result<SceneryFrame> + Sync) -> Result<EmpiricalDistribution> {
    use rayon::prelude::*;
    let results: Vec<(f64, Result<SceneryFrame>)> = times.par_iter().map(|&t| (t, make(t))).collect();
    let mut frames = Vec::new();
    let mut skipped = Vec::new();
    for (t, r) in results {
        match r {
            Ok(f) => frames.push(f),
            Err(LabError::EmptyWindow { .. }) | Err(LabError::EmptyEllipse) => {
                log::warn!("empty window at t = {t}; frame skipped");
                skipped.push(t);
            }
            Err(e) => return Err(e),
        }
    }
    Ok(EmpiricalDistribution { frames, skipped })
}

pub fn scenery_distribution(mu: &WeightedPointMeasure, x: Vec2, t_max: f64, dt: f64, mode: WindowMode) -> Result<EmpiricalDistribution> {
    let times = frame_times(t_max, dt)?;
    distribution_from(&times, |t| match mode {
        WindowMode::Ball => zoom_frame(mu, x, t),
        WindowMode::Square => square_frame(mu, x, t),
    })
}

/// Grid of the functional battery: 5×5 cells over [−1, 1]².
pub const BATTERY_GRID: usize = 5;
pub const BATTERY_LEN: usize = BATTERY_GRID * BATTERY_GRID + 2;

/// Cell masses on the 5×5 grid, then `E|z|` and `E|z|²`.
pub fn battery(mu: &WeightedPointMeasure) -> [f64; BATTERY_LEN] {
    let mut out = [0.0; BATTERY_LEN];
    let h = 2.0 / BATTERY_GRID as f64;
    let total = mu.total_mass();
    for (p, &w) in mu.points.iter().zip(&mu.weights) {
        let w = w / total;
        let i = (((p.x + 1.0) / h).floor() as isize).clamp(0, BATTERY_GRID as isize - 1) as usize;
        let j = (((p.y + 1.0) / h).floor() as isize).clamp(0, BATTERY_GRID as isize - 1) as usize;
        out[j * BATTERY_GRID + i] += w;
        let r = p.norm();
        out[BATTERY_LEN - 2] += w * r;
        out[BATTERY_LEN - 1] += w * r * r;
    }
    out
}

/// Battery averaged over the frames, each frame first rotated by `-derotate`.
pub fn mean_battery(d: &EmpiricalDistribution, derotate: f64) -> [f64; BATTERY_LEN] {
    let mut acc = [0.0; BATTERY_LEN];
    for f in &d.frames {
        let m = if derotate != 0.0 { f.measure.rotated(-derotate) } else { f.measure.clone() };
        for (a, b) in acc.iter_mut().zip(battery(&m)) {
            *a += b;
        }
    }
    acc.iter_mut().for_each(|a| *a /= d.frames.len() as f64);
    acc
}

/// Mean absolute difference of the averaged batteries, after optional de-rotation of each distribution.
pub fn distribution_distance(d1: &EmpiricalDistribution, d2: &EmpiricalDistribution, derotate: Option<(f64, f64)>) -> Result<f64> {
    if d1.frames.is_empty() || d2.frames.is_empty() {
        return Err(LabError::InvalidArgument("both distributions need frames".into()));
    }
    let (r1, r2) = derotate.unwrap_or((0.0, 0.0));
    let b1 = mean_battery(d1, r1);
    let b2 = mean_battery(d2, r2);
    Ok(b1.iter().zip(&b2).map(|(a, b)| (a - b).abs()).sum::<f64>() / BATTERY_LEN as f64)
}

pub fn rotate_measure(mu: &WeightedPointMeasure, angle: f64) -> WeightedPointMeasure {
    mu.rotated(angle)
}
