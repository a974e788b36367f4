//! Shipped fixture files against the in-code systems, with validation rerun.

use std::path::PathBuf;

use sceneflow::affine::validate_system;
use sceneflow::fixtures;
use sceneflow::io::IfsSpec;
use sceneflow::projective::{furstenberg_sample, FurstenbergOptions};
use sceneflow::suspension::{line_entry_times, slice_frame, SliceSource};
use sceneflow::{CodeStream, IfsSystem};

fn fixture(name: &str) -> IfsSystem {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(format!("{name}.toml"));
    IfsSpec::load(&path).unwrap().build().unwrap()
}

fn same_maps(a: &IfsSystem, b: &IfsSystem) -> bool {
    a.k() == b.k()
        && a.maps().iter().zip(b.maps()).all(|(x, y)| (x.matrix - y.matrix).abs().max() < 1e-15 && (x.offset - y.offset).norm() < 1e-15)
        && a.probabilities() == b.probabilities()
}

#[test]
fn files_match_the_code_fixtures() {
    assert!(same_maps(&fixture("pu"), &fixtures::pu(fixtures::PU_LAMBDA)));
    assert!(same_maps(&fixture("ex-pos"), &fixtures::ex_pos()));
    assert!(same_maps(&fixture("ex-thick"), &fixtures::ex_thick()));
}

#[test]
fn certificates_are_regenerated() {
    for name in ["ex-pos", "ex-thick"] {
        let r = validate_system(&fixture(name));
        assert!(r.all_ok(), "{name}: {r:?}");
        assert!(r.separation_margin > 0.0);
    }
    let r = validate_system(&fixture("pu"));
    assert!(r.norm_ok);
    assert!(!r.cone_ok);
    assert_eq!(r.cone_witnesses, vec![0, 1]);
}

/// Interquartile width of the slice frame through a typical point.
fn slice_spread(ifs: &IfsSystem, k: u64) -> f64 {
    let th = furstenberg_sample(ifs, 1, 40, 100 + k, FurstenbergOptions::default()).unwrap().angles[0];
    let code = CodeStream::random(7, k);
    let (r1, _) = line_entry_times(ifs, &code, th).unwrap();
    let f = slice_frame(ifs, &SliceSource::Exact { n: 2000, eps: 1e-3, seed: k }, &code, th, r1).unwrap();
    f.measure.quantile(0.9) - f.measure.quantile(0.1)
}

#[test]
fn thin_slices_collapse_and_thick_ones_do_not() {
    let ex = fixtures::ex_pos();
    let thick = fixtures::ex_thick();
    let thin: Vec<f64> = (0..8).map(|k| slice_spread(&ex, k)).collect();
    let wide: Vec<f64> = (0..8).map(|k| slice_spread(&thick, k)).collect();
    assert!(thin.iter().all(|&s| s < 0.01), "{thin:?}");
    assert!(wide.iter().filter(|&&s| s > 0.01).count() >= 6, "{wide:?}");
}
