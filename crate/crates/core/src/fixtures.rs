//! The two reference systems and a generator of random positive ones.

use rand::Rng;

use crate::affine::{aux_rng, validate_system, AffineContraction, IfsSystem};
use crate::linalg::{vec2, Mat2};

pub const PU_LAMBDA: f64 = 0.8;

/// The carpet `T₀(x, y) = (λx, y/3)`, `T₁(x, y) = (λx + 1 − λ, (y + 2)/3)` on the unit square.
pub fn pu(lambda: f64) -> IfsSystem {
    let a = Mat2::new(lambda, 0.0, 0.0, 1.0 / 3.0);
    IfsSystem::new(
        vec![
            AffineContraction::new(a, vec2(0.0, 0.0)),
            AffineContraction::new(a, vec2(1.0 - lambda, 2.0 / 3.0)),
        ],
        vec![0.5, 0.5],
        false,
    )
    .expect("valid carpet parameters")
}

/// Two strictly positive maps with well separated images in the unit disk.
pub fn ex_pos() -> IfsSystem {
    IfsSystem::new(
        vec![
            AffineContraction::new(Mat2::new(0.30, 0.10, 0.05, 0.25), vec2(-0.4, -0.4)),
            AffineContraction::new(Mat2::new(0.25, 0.08, 0.10, 0.30), vec2(0.35, 0.35)),
        ],
        vec![0.5, 0.5],
        true,
    )
    .expect("valid positive system")
}

/// Four strictly positive maps with images stacked across their long axes.
/// Lyapunov dimension about 1.25, so slices through typical points carry
/// positive dimension; the two-map system above sits below 1, where typical
/// slices collapse to a point.
pub fn ex_thick() -> IfsSystem {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let (u, v) = (vec2(s, s), vec2(-s, s));
    let mats = [
        Mat2::new(0.28, 0.12, 0.12, 0.28),
        Mat2::new(0.27, 0.13, 0.11, 0.29),
        Mat2::new(0.29, 0.11, 0.13, 0.27),
        Mat2::new(0.28, 0.10, 0.14, 0.28),
    ];
    let across = [-0.6, -0.2, 0.2, 0.6];
    let along = [0.2, -0.1, 0.1, -0.2];
    let maps = (0..4).map(|i| AffineContraction::new(mats[i], v * across[i] + u * along[i])).collect();
    IfsSystem::new(maps, vec![0.25; 4], true).expect("valid positive system")
}

/// A random strictly positive two-map system that passes validation.
pub fn random_positive(seed: u64) -> IfsSystem {
    let mut rng = aux_rng(seed, 0xf1);
    loop {
        let mut maps = Vec::new();
        for sign in [-1.0, 1.0] {
            let diag = (rng.random_range(0.15..0.35), rng.random_range(0.15..0.35));
            let off = (rng.random_range(0.01..0.12), rng.random_range(0.01..0.12));
            let m = Mat2::new(diag.0, off.0, off.1, diag.1);
            let c = sign * rng.random_range(0.3..0.45);
            maps.push(AffineContraction::new(m, vec2(c, c + rng.random_range(-0.05..0.05))));
        }
        let p = rng.random_range(0.3..0.7);
        let ifs = IfsSystem::new(maps, vec![p, 1.0 - p], true).expect("valid random system");
        if validate_system(&ifs).all_ok() {
            return ifs;
        }
    }
}
