//! End-to-end agreements between independent routes to the same frames.

use proptest::prelude::*;

use sceneflow::affine::{limit_point, sample_measure};
use sceneflow::fixtures;
use sceneflow::linalg::vec2;
use sceneflow::measure::{prokhorov_auto, DEFAULT_TOL};
use sceneflow::pu::{digit_depth, rectangle_frame_at_depth, restrict_to_disk, CarpetSample};
use sceneflow::scenery::{deep_zoom_frame, nu_frame_at_depth, rotate_measure, window_n, zoom_frame, PointIndex, Sample};
use sceneflow::{CodeStream, ProjectiveAngle, WeightedPointMeasure};

#[test]
fn carpet_rectangle_route_matches_the_generic_ellipse_route() {
    let lambda = fixtures::PU_LAMBDA;
    let pu = fixtures::pu(lambda);
    let carpet = CarpetSample::new(lambda, 100_000, 1).unwrap();
    let generic = sample_measure(&pu, 100_000, digit_depth(lambda), 2).unwrap();
    for (s, n) in [(0u64, 1usize), (1, 2), (2, 2)] {
        let code = CodeStream::random(17, s);
        let t = n as f64 * 3f64.ln();
        let rect = rectangle_frame_at_depth(&carpet, &code.word(&pu, 400), t, n).unwrap();
        let two_step = restrict_to_disk(&rect.measure).unwrap();
        let nu = nu_frame_at_depth(&pu, &Sample::plain(&generic), &code, ProjectiveAngle::VERTICAL, t, n).unwrap();
        let d = prokhorov_auto(&two_step, &nu.measure, DEFAULT_TOL).unwrap().d;
        assert!(d <= 0.05, "n = {n}: {d}");
    }
}

#[test]
fn deep_zoom_agrees_with_the_direct_zoom_where_both_are_resolved() {
    let ex = fixtures::ex_pos();
    let mu = sample_measure(&ex, 200_000, 40, 3).unwrap();
    let index = PointIndex::new(&mu);
    let sample = Sample { mu: &mu, index: Some(&index) };
    let mut compared = 0;
    for s in 0..40u64 {
        let code = CodeStream::random(5, s);
        let t = 2.0;
        if window_n(&ex, &code, t).n == 0 {
            continue;
        }
        let deep = deep_zoom_frame(&ex, &sample, &code, t).unwrap();
        let direct = zoom_frame(&mu, limit_point(&ex, &code), t).unwrap();
        if direct.measure.len() < 2000 {
            continue;
        }
        let d = prokhorov_auto(&deep.measure, &direct.measure, DEFAULT_TOL).unwrap().d;
        assert!(d <= 0.05, "code {s}: {d}");
        compared += 1;
    }
    assert!(compared >= 5, "only {compared} windows were resolved");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn rotation_keeps_distances_and_mass(pts in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 2..20), angle in -7.0f64..7.0) {
        let mu = WeightedPointMeasure::uniform(pts.iter().map(|&(x, y)| vec2(x, y)).collect());
        let r = rotate_measure(&mu, angle);
        prop_assert!((r.total_mass() - mu.total_mass()).abs() < 1e-15);
        for i in 0..mu.len() {
            for j in 0..mu.len() {
                let a = (mu.points[i] - mu.points[j]).norm();
                let b = (r.points[i] - r.points[j]).norm();
                prop_assert!((a - b).abs() <= 1e-12);
            }
        }
        let mut back = mu.clone();
        for _ in 0..4 {
            back = rotate_measure(&back, std::f64::consts::FRAC_PI_2);
        }
        for (p, q) in back.points.iter().zip(&mu.points) {
            prop_assert!((p - q).norm() <= 1e-12);
        }
    }
}
