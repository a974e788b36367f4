//! Affine iterated function systems, symbolic codes and the coding map.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::angle::ProjectiveAngle;
use crate::ellipse::Ellipse;
use crate::error::{LabError, Result};
use crate::linalg::{self, vec2, Mat2, Svd2, Vec2};
use crate::measure::WeightedPointMeasure;

/// Quadratic-form margin required for the separation certificate.
pub const SEPARATION_MARGIN: f64 = 1e-6;
pub const SEPARATION_SAMPLES: usize = 256;
/// Point placement error targeted by [`IfsSystem::default_depth`].
pub const DEPTH_ACCURACY: f64 = 1e-6;

/// `x ↦ A x + d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineContraction {
    pub matrix: Mat2,
    pub offset: Vec2,
}

impl AffineContraction {
    pub fn new(matrix: Mat2, offset: Vec2) -> Self {
        AffineContraction { matrix, offset }
    }

    pub fn identity() -> Self {
        AffineContraction { matrix: Mat2::identity(), offset: vec2(0.0, 0.0) }
    }

    #[inline]
    pub fn apply(&self, p: &Vec2) -> Vec2 {
        self.matrix * p + self.offset
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineContraction) -> AffineContraction {
        AffineContraction { matrix: self.matrix * other.matrix, offset: self.matrix * other.offset + self.offset }
    }

    pub fn inverse(&self) -> Result<AffineContraction> {
        let inv = linalg::inverse(&self.matrix).ok_or(LabError::SingularMatrix)?;
        Ok(AffineContraction { matrix: inv, offset: -(inv * self.offset) })
    }

    pub fn norm(&self) -> f64 {
        Svd2::new(&self.matrix).sigma1
    }

    pub fn det(&self) -> f64 {
        linalg::det(&self.matrix)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IfsSystem {
    maps: Vec<AffineContraction>,
    probabilities: Vec<f64>,
    cumulative: Vec<f64>,
    pub cone_mode: bool,
}

impl IfsSystem {
    pub fn new(maps: Vec<AffineContraction>, probabilities: Vec<f64>, cone_mode: bool) -> Result<Self> {
        if maps.is_empty() {
            return Err(LabError::InvalidArgument("an IFS needs at least one map".into()));
        }
        if maps.len() != probabilities.len() {
            return Err(LabError::InvalidArgument(format!(
                "{} maps but {} probabilities",
                maps.len(),
                probabilities.len()
            )));
        }
        if probabilities.iter().any(|p| !(*p > 0.0) || !p.is_finite()) {
            return Err(LabError::InvalidArgument("probabilities must be positive".into()));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(LabError::Unnormalized(total));
        }
        let mut cumulative = Vec::with_capacity(probabilities.len());
        let mut acc = 0.0;
        for p in &probabilities {
            acc += p;
            cumulative.push(acc);
        }
        *cumulative.last_mut().unwrap() = 1.0;
        Ok(IfsSystem { maps, probabilities, cumulative, cone_mode })
    }

    pub fn k(&self) -> usize {
        self.maps.len()
    }

    pub fn maps(&self) -> &[AffineContraction] {
        &self.maps
    }

    pub fn map(&self, i: usize) -> &AffineContraction {
        &self.maps[i]
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// Letter drawn by a uniform variate in [0, 1).
    #[inline]
    pub fn letter_for(&self, u: f64) -> usize {
        self.cumulative.partition_point(|&c| c <= u).min(self.k() - 1)
    }

    pub fn alpha_max(&self) -> f64 {
        self.maps.iter().map(|m| m.norm()).fold(0.0, f64::max)
    }

    /// Smallest `n` with `α_max^n < accuracy`.
    pub fn depth_for(&self, accuracy: f64) -> usize {
        let a = self.alpha_max();
        if !(a < 1.0) || a <= 0.0 {
            return 1;
        }
        ((accuracy.ln() / a.ln()).floor() as usize + 1).max(1)
    }

    pub fn default_depth(&self) -> usize {
        self.depth_for(DEPTH_ACCURACY)
    }

    pub fn check_word(&self, w: &[usize]) -> Result<()> {
        match w.iter().find(|&&a| a >= self.k()) {
            Some(&letter) => Err(LabError::InvalidWord { letter, k: self.k() }),
            None => Ok(()),
        }
    }
}

/// A finite word; letters are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct SymbolWord(pub Vec<usize>);

impl SymbolWord {
    pub fn new(letters: Vec<usize>) -> Self {
        SymbolWord(letters)
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &SymbolWord) -> SymbolWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        SymbolWord(v)
    }
}

/// An infinite code: an explicit prefix followed by i.i.d. letters.
///
/// Letter `j` of the random tail is a pure function of `(seed, stream, offset + j)`,
/// read from a counter-based generator, so codes can be extended, shifted and
/// split across threads without coordination.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CodeStream {
    pub prefix: Vec<usize>,
    pub seed: u64,
    pub stream: u64,
    /// Position in the random tail where this code starts.
    pub offset: u64,
}

/// Uniform in [0, 1) from the top 53 bits.
#[inline]
fn unit_f64(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

impl CodeStream {
    pub fn random(seed: u64, stream: u64) -> Self {
        CodeStream { prefix: Vec::new(), seed, stream, offset: 0 }
    }

    pub fn with_prefix(prefix: Vec<usize>, seed: u64, stream: u64) -> Self {
        CodeStream { prefix, seed, stream, offset: 0 }
    }

    /// The eventually constant code `i i i …`; the tail is never consulted.
    pub fn constant(i: usize, len: usize) -> Self {
        CodeStream { prefix: vec![i; len], seed: 0, stream: 0, offset: 0 }
    }

    fn tail_rng(&self, pos: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng.set_word_pos(2 * pos as u128);
        rng
    }

    /// First `n` letters.
    pub fn word(&self, ifs: &IfsSystem, n: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.prefix.iter().take(n).copied().collect();
        if out.len() < n {
            let mut rng = self.tail_rng(self.offset);
            while out.len() < n {
                out.push(ifs.letter_for(unit_f64(rng.next_u64())));
            }
        }
        out
    }

    pub fn letter(&self, ifs: &IfsSystem, j: usize) -> usize {
        if j < self.prefix.len() {
            return self.prefix[j];
        }
        let pos = self.offset + (j - self.prefix.len()) as u64;
        ifs.letter_for(unit_f64(self.tail_rng(pos).next_u64()))
    }

    /// The shift `σ`.
    pub fn shift(&self) -> Self {
        self.shift_by(1)
    }

    pub fn shift_by(&self, n: usize) -> Self {
        let dropped = n.min(self.prefix.len());
        let mut out = self.clone();
        out.prefix.drain(..dropped);
        out.offset += (n - dropped) as u64;
        out
    }

    /// Same code with its first `n` letters made explicit.
    pub fn materialize(&self, ifs: &IfsSystem, n: usize) -> Self {
        if self.prefix.len() >= n {
            return self.clone();
        }
        let extra = n - self.prefix.len();
        let mut out = self.clone();
        out.prefix = self.word(ifs, n);
        out.offset += extra as u64;
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub norm_ok: bool,
    pub cone_ok: bool,
    pub separation_ok: bool,
    /// Maps whose operator norm is not below 1, with the norm.
    pub norm_witnesses: Vec<(usize, f64)>,
    /// Maps with a non-positive entry.
    pub cone_witnesses: Vec<usize>,
    /// Offending pairs `(i, j)` or `(i, i)` for an image leaving the disk, with the margin found.
    pub separation_witnesses: Vec<(usize, usize, f64)>,
    /// Smallest quadratic-form margin over all separation checks.
    pub separation_margin: f64,
}

impl ValidationReport {
    pub fn all_ok(&self) -> bool {
        self.norm_ok && self.cone_ok && self.separation_ok
    }
}

/// Checks contraction, positivity of entries and the separation condition:
/// the images `T_i(X)` of the unit disk are pairwise disjoint and inside `X`.
/// Conditions are sampled on `SEPARATION_SAMPLES` boundary points per ellipse and
/// must clear `SEPARATION_MARGIN` in the quadratic form.
pub fn validate_system(ifs: &IfsSystem) -> ValidationReport {
    let mut norm_witnesses = Vec::new();
    let mut cone_witnesses = Vec::new();
    for (i, m) in ifs.maps().iter().enumerate() {
        let n = m.norm();
        if !(n < 1.0) {
            norm_witnesses.push((i, n));
        }
        if m.matrix.iter().any(|&x| !(x > 0.0)) {
            cone_witnesses.push(i);
        }
    }
    let images: Vec<Option<Ellipse>> = ifs.maps().iter().map(|m| Ellipse::image_of_disk(m).ok()).collect();
    let disk = Ellipse::unit_disk();
    let mut separation_witnesses = Vec::new();
    let mut margin = f64::INFINITY;
    for (i, ei) in images.iter().enumerate() {
        let Some(ei) = ei else {
            separation_witnesses.push((i, i, f64::NEG_INFINITY));
            margin = f64::NEG_INFINITY;
            continue;
        };
        // inside X: every boundary point has form value below 1 - margin
        let inside = ei.boundary(SEPARATION_SAMPLES).iter().map(|p| 1.0 - disk.quadratic_form(p)).fold(f64::INFINITY, f64::min);
        margin = margin.min(inside);
        if inside < SEPARATION_MARGIN {
            separation_witnesses.push((i, i, inside));
        }
        for (j, ej) in images.iter().enumerate().skip(i + 1) {
            let Some(ej) = ej else { continue };
            // disjoint: each boundary sits outside the other ellipse
            let a = ej.boundary(SEPARATION_SAMPLES).iter().map(|p| ei.quadratic_form(p) - 1.0).fold(f64::INFINITY, f64::min);
            let b = ei.boundary(SEPARATION_SAMPLES).iter().map(|p| ej.quadratic_form(p) - 1.0).fold(f64::INFINITY, f64::min);
            let m = a.min(b);
            margin = margin.min(m);
            if m < SEPARATION_MARGIN {
                separation_witnesses.push((i, j, m));
            }
        }
    }
    ValidationReport {
        norm_ok: norm_witnesses.is_empty(),
        cone_ok: cone_witnesses.is_empty(),
        separation_ok: separation_witnesses.is_empty(),
        norm_witnesses,
        cone_witnesses,
        separation_witnesses,
        separation_margin: margin,
    }
}

/// Composite with the product of the factor determinants tracked alongside.
#[derive(Debug, Clone, Copy)]
pub struct Composite {
    pub map: AffineContraction,
    pub det: f64,
}

pub(crate) fn compose_letters(ifs: &IfsSystem, w: &[usize]) -> Composite {
    let mut m = Mat2::identity();
    let mut c = vec2(0.0, 0.0);
    let mut det = 1.0;
    for &a in w {
        let t = ifs.map(a);
        c += m * t.offset;
        m *= t.matrix;
        det *= t.det();
    }
    Composite { map: AffineContraction::new(m, c), det }
}

/// `T_{a₁} ∘ ⋯ ∘ T_{aₙ}`; the empty word gives the identity.
pub fn compose_word(ifs: &IfsSystem, w: &SymbolWord) -> Result<AffineContraction> {
    ifs.check_word(w.letters())?;
    Ok(compose_letters(ifs, w.letters()).map)
}

/// `T_{a₁⋯aₙ}(0)` evaluated inside-out.
#[inline]
pub(crate) fn point_of_word(ifs: &IfsSystem, w: &[usize]) -> Vec2 {
    let mut x = vec2(0.0, 0.0);
    for &a in w.iter().rev() {
        x = ifs.map(a).apply(&x);
    }
    x
}

/// `T_{a₁⋯aₙ}(0)` together with `α₁(a₁⋯aₙ)`, which bounds its distance to `π(a)`.
pub fn attractor_point(ifs: &IfsSystem, code: &CodeStream, depth: usize) -> Result<(Vec2, f64)> {
    if depth == 0 {
        return Err(LabError::InvalidArgument("depth must be at least 1".into()));
    }
    let w = code.word(ifs, depth);
    ifs.check_word(&w)?;
    let comp = compose_letters(ifs, &w);
    Ok((comp.map.offset, Svd2::with_det(&comp.map.matrix, comp.det).sigma1))
}

/// `π(a)` to full double precision.
pub fn limit_point(ifs: &IfsSystem, code: &CodeStream) -> Vec2 {
    point_of_word(ifs, &code.word(ifs, ifs.depth_for(1e-17)))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SingularAxes {
    pub alpha1: f64,
    pub alpha2: f64,
    pub major_dir: ProjectiveAngle,
    /// `θ(a₁⋯aₙ)`, the minor-axis direction of `X_{a₁⋯aₙ}`.
    pub minor_dir: ProjectiveAngle,
}

pub(crate) fn axes_of(comp: &Composite) -> SingularAxes {
    let s = Svd2::with_det(&comp.map.matrix, comp.det);
    let major = ProjectiveAngle::new(s.left);
    SingularAxes { alpha1: s.sigma1, alpha2: s.sigma2, major_dir: major, minor_dir: major.perpendicular() }
}

pub fn singular_axes(ifs: &IfsSystem, w: &SymbolWord) -> Result<SingularAxes> {
    if w.is_empty() {
        return Err(LabError::DegenerateOrientation("the empty word has no preferred axis"));
    }
    ifs.check_word(w.letters())?;
    Ok(axes_of(&compose_letters(ifs, w.letters())))
}

/// `X_w = T_w(X)`.
pub fn cylinder_ellipse(ifs: &IfsSystem, w: &SymbolWord) -> Result<Ellipse> {
    ifs.check_word(w.letters())?;
    if w.is_empty() {
        return Ok(Ellipse::unit_disk());
    }
    let comp = compose_letters(ifs, w.letters());
    Ellipse::image_of_disk_with_det(&comp.map, comp.det)
}

/// Codes used by [`sample_measure`]: stream `i` of `seed`.
pub fn sample_codes(n_points: usize, seed: u64) -> Vec<CodeStream> {
    (0..n_points as u64).map(|i| CodeStream::random(seed, i)).collect()
}

/// `n_points` equally weighted points `T_{a₁⋯a_depth}(0)` over i.i.d. codes.
pub fn sample_measure(ifs: &IfsSystem, n_points: usize, depth: usize, seed: u64) -> Result<WeightedPointMeasure> {
    if n_points == 0 {
        return Err(LabError::InvalidArgument("n_points must be at least 1".into()));
    }
    let depth = depth.max(1);
    let points: Vec<Vec2> = (0..n_points as u64)
        .into_par_iter()
        .map(|i| point_of_word(ifs, &CodeStream::random(seed, i).word(ifs, depth)))
        .collect();
    Ok(WeightedPointMeasure::uniform(points))
}

/// Sampled points together with the first letter of each code.
pub fn sample_with_letters(ifs: &IfsSystem, n_points: usize, depth: usize, seed: u64) -> (WeightedPointMeasure, Vec<usize>) {
    let (points, letters): (Vec<Vec2>, Vec<usize>) = (0..n_points as u64)
        .into_par_iter()
        .map(|i| {
            let w = CodeStream::random(seed, i).word(ifs, depth.max(1));
            (point_of_word(ifs, &w), w[0])
        })
        .unzip();
    (WeightedPointMeasure::uniform(points), letters)
}

/// A fresh generator for auxiliary randomness, split by `stream`.
pub fn aux_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    rng.set_stream(stream);
    rng
}

/// Uniform draw helper used by samplers that need a few extra variates.
pub fn uniform_in(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use nalgebra::SymmetricEigen;
    use proptest::prelude::*;

    #[test]
    fn validation_of_fixtures() {
        let pu = validate_system(&fixtures::pu(0.8));
        assert!(!pu.cone_ok);
        assert!(pu.norm_ok);
        let ex = validate_system(&fixtures::ex_pos());
        assert!(ex.all_ok(), "{ex:?}");
        assert!(ex.separation_margin >= SEPARATION_MARGIN);
        let id = IfsSystem::new(vec![AffineContraction::identity()], vec![1.0], false).unwrap();
        assert!(!validate_system(&id).norm_ok);
    }

    #[test]
    fn composition_of_words() {
        let pu = fixtures::pu(0.8);
        assert_eq!(compose_word(&pu, &SymbolWord::default()).unwrap(), AffineContraction::identity());
        assert_eq!(compose_word(&pu, &SymbolWord::new(vec![0])).unwrap(), *pu.map(0));
        let w = compose_word(&pu, &SymbolWord::new(vec![0, 1])).unwrap();
        let (a0, a1) = (pu.map(0), pu.map(1));
        assert!((w.matrix - a0.matrix * a1.matrix).abs().max() < 1e-15);
        assert!((w.offset - (a0.matrix * a1.offset + a0.offset)).norm() < 1e-15);
        assert!(matches!(compose_word(&pu, &SymbolWord::new(vec![0, 2])), Err(LabError::InvalidWord { letter: 2, k: 2 })));
    }

    #[test]
    fn fixed_points_of_constant_codes() {
        let pu = fixtures::pu(0.8);
        let (p0, _) = attractor_point(&pu, &CodeStream::constant(0, 200), 200).unwrap();
        assert!(p0.norm() < 1e-15);
        let (p1, b) = attractor_point(&pu, &CodeStream::constant(1, 200), 200).unwrap();
        assert!((p1 - vec2(1.0, 1.0)).norm() < 1e-12, "{p1}");
        assert!(b < 1e-15);
    }

    #[test]
    fn depth_bound_controls_distance() {
        let ex = fixtures::ex_pos();
        for s in 0..50 {
            let code = CodeStream::random(7, s);
            let (p, bound) = attractor_point(&ex, &code, 10).unwrap();
            let (q, _) = attractor_point(&ex, &code, 15).unwrap();
            assert!((p - q).norm() <= bound);
        }
    }

    #[test]
    fn pu_singular_axes_are_diagonal() {
        let pu = fixtures::pu(0.8);
        for n in 1..=8 {
            let w = SymbolWord::new((0..n).map(|i| (i * 7 + n) % 2).collect());
            let ax = singular_axes(&pu, &w).unwrap();
            assert!((ax.alpha1 - 0.8f64.powi(n as i32)).abs() < 1e-14);
            assert!((ax.alpha2 / 3f64.powi(-(n as i32)) - 1.0).abs() < 1e-12);
            assert!(ax.minor_dir.distance(ProjectiveAngle::VERTICAL) < 1e-15);
            let e = cylinder_ellipse(&pu, &w).unwrap();
            assert!((e.semi_major - 0.8f64.powi(n as i32)).abs() < 1e-14);
        }
        assert!(singular_axes(&pu, &SymbolWord::default()).is_err());
    }

    #[test]
    fn axis_ratio_decreases_on_ex_pos() {
        let ex = fixtures::ex_pos();
        let code = CodeStream::random(3, 3);
        let ratios: Vec<f64> = (1..=8)
            .map(|n| {
                let ax = singular_axes(&ex, &SymbolWord::new(code.word(&ex, n))).unwrap();
                ax.alpha2 / ax.alpha1
            })
            .collect();
        assert!(ratios.windows(2).all(|w| w[1] < w[0]), "{ratios:?}");
    }

    #[test]
    fn cylinder_masses_match_probabilities() {
        let ex = fixtures::ex_pos();
        let n = 100_000;
        let mu = sample_measure(&ex, n, ex.default_depth(), 11).unwrap();
        for i in 0..ex.k() {
            let xi = cylinder_ellipse(&ex, &SymbolWord::new(vec![i])).unwrap();
            let m = mu.mass_where(|p| xi.quadratic_form(p) <= 1.0 + 1e-9);
            let p = ex.probabilities()[i];
            let sigma = (p * (1.0 - p) / n as f64).sqrt();
            assert!((m - p).abs() <= 4.0 * sigma, "cylinder {i}: {m} vs {p}");
        }
        assert!(mu.max_radius() < 1.0);
    }

    #[test]
    fn sampling_is_deterministic() {
        let ex = fixtures::ex_pos();
        let a = sample_measure(&ex, 1000, 12, 5).unwrap();
        let b = sample_measure(&ex, 1000, 12, 5).unwrap();
        assert_eq!(a, b);
        let one = sample_measure(&ex, 1, 12, 5).unwrap();
        assert_eq!(one.weights, vec![1.0]);
    }

    #[test]
    fn shifted_codes_read_the_same_letters() {
        let ex = fixtures::ex_pos();
        let c = CodeStream::with_prefix(vec![1, 0, 1], 9, 4);
        let w = c.word(&ex, 20);
        for s in 0..6 {
            assert_eq!(c.shift_by(s).word(&ex, 20 - s), w[s..].to_vec());
        }
        assert_eq!(c.letter(&ex, 10), w[10]);
        assert_eq!(c.materialize(&ex, 12).word(&ex, 20), w);
    }

    fn arb_word(k: usize, max: usize) -> impl Strategy<Value = Vec<usize>> {
        proptest::collection::vec(0..k, 0..max)
    }

    proptest! {
        #[test]
        fn composition_is_a_homomorphism(w1 in arb_word(2, 10), w2 in arb_word(2, 10)) {
            let ex = fixtures::ex_pos();
            let whole = compose_word(&ex, &SymbolWord::new([w1.clone(), w2.clone()].concat())).unwrap();
            let parts = compose_word(&ex, &SymbolWord::new(w1)).unwrap().compose(&compose_word(&ex, &SymbolWord::new(w2)).unwrap());
            prop_assert!((whole.matrix - parts.matrix).abs().max() <= 1e-12);
            prop_assert!((whole.offset - parts.offset).norm() <= 1e-12);
        }

        #[test]
        fn singular_values_match_gram_eigenvalues(w in arb_word(2, 12)) {
            prop_assume!(!w.is_empty());
            let ex = fixtures::ex_pos();
            let word = SymbolWord::new(w);
            let ax = singular_axes(&ex, &word).unwrap();
            let m = compose_word(&ex, &word).unwrap().matrix;
            let ev = SymmetricEigen::new(m.transpose() * m).eigenvalues;
            let (hi, lo) = (ev.max().sqrt(), ev.min().max(0.0).sqrt());
            prop_assert!((ax.alpha1 - hi).abs() <= 1e-12 * hi.max(1e-300) + 1e-15);
            prop_assert!(ax.alpha1 >= ax.alpha2 && ax.alpha2 > 0.0);
            // the Gram matrix squares the conditioning, so only a loose match is meaningful
            prop_assert!((ax.alpha2 - lo).abs() <= 1e-6 * hi);
            prop_assert!((ax.major_dir.distance(ax.minor_dir) - std::f64::consts::FRAC_PI_2).abs() <= 1e-12);
        }

        #[test]
        fn cylinder_diameter_is_twice_alpha1(w in arb_word(2, 12)) {
            prop_assume!(!w.is_empty());
            let ex = fixtures::ex_pos();
            let word = SymbolWord::new(w);
            let e = cylinder_ellipse(&ex, &word).unwrap();
            let ax = singular_axes(&ex, &word).unwrap();
            // diameter measured on the boundary, not read back from the stored axis
            let diam = (e.boundary_point(0.0) - e.boundary_point(std::f64::consts::PI)).norm();
            prop_assert!((diam - 2.0 * ax.alpha1).abs() <= 1e-9);
            // the linear part only: translating by the center costs digits on thin ellipses
            let img = compose_word(&ex, &word).unwrap();
            let centred = Ellipse { center: vec2(0.0, 0.0), ..e };
            for s in 0..16 {
                let u = linalg::unit(s as f64 * 0.4);
                prop_assert!((centred.quadratic_form(&(img.matrix * u)) - 1.0).abs() < 1e-9);
            }
        }
    }
}
