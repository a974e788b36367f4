//! The binary end to end: exit codes, artifacts and rerun determinism.

use std::path::Path;
use std::process::Command;

fn lab(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_sceneflow")).args(args).env("RUST_LOG", "warn").output().expect("binary runs")
}

fn repo(p: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").join(p).to_string_lossy().into_owned()
}

#[test]
fn verify_all_manifests_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        let o = lab(&["--config", &repo("configs/pu.toml"), "--out", out.to_str().unwrap(), "verify-all", "--checks", "3,7,14"]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let ma = std::fs::read(a.join("manifest.json")).unwrap();
    let mb = std::fs::read(b.join("manifest.json")).unwrap();
    assert_eq!(ma, mb);
    let m: serde_json::Value = serde_json::from_slice(&ma).unwrap();
    let checks = m["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 14);
    let verdicts: Vec<&str> = checks.iter().map(|c| c["verdict"].as_str().unwrap()).collect();
    assert_eq!(verdicts.iter().filter(|v| **v == "pass").count(), 3);
    assert_eq!(verdicts.iter().filter(|v| **v == "skip").count(), 11);
    assert!(a.join("runtimes.json").exists());
}

#[test]
fn determinism_flag_reruns_and_agrees() {
    let dir = tempfile::tempdir().unwrap();
    let o = lab(&["--out", dir.path().to_str().unwrap(), "verify-all", "--checks", "7", "--check-determinism"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains("rerun manifest identical"));
}

#[test]
fn a_failing_check_gives_a_nonzero_exit() {
    let dir = tempfile::tempdir().unwrap();
    let o = lab(&["--out", dir.path().to_str().unwrap(), "--tol-scale", "1e-30", "verify-all", "--checks", "7"]);
    assert_eq!(o.status.code(), Some(1));
    let m: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m["passed"], false);
    assert_eq!(m["checks"][6]["verdict"], "fail");
}

#[test]
fn render_writes_one_dot_per_sample_point() {
    let dir = tempfile::tempdir().unwrap();
    let o = lab(&["--config", &repo("configs/ex-pos.toml"), "--out", dir.path().to_str().unwrap(), "render"]);
    assert!(o.status.success());
    let svg = std::fs::read_to_string(dir.path().join("attractor.svg")).unwrap();
    // the reference circle plus 10⁵ points
    assert_eq!(svg.matches("<circle").count(), 100_001);
    assert!(svg.contains("sceneflow-svg/1"));
}

#[test]
fn shipped_fixtures_validate() {
    for cfg in ["configs/ex-pos.toml", "configs/pu.toml"] {
        let dir = tempfile::tempdir().unwrap();
        let o = lab(&["--config", &repo(cfg), "--out", dir.path().to_str().unwrap(), "validate"]);
        assert!(o.status.success(), "{cfg}: {}", String::from_utf8_lossy(&o.stdout));
        assert!(dir.path().join("validation.json").exists());
    }
}

#[test]
fn bad_invocations_fail() {
    assert!(!lab(&["bogus"]).status.success());
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    // no seed
    std::fs::write(&cfg, "format = \"sceneflow-experiment/1\"\nname = \"x\"\n[system]\nfixture = \"ex-pos\"\n").unwrap();
    let o = lab(&["--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap(), "validate"]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::write(&cfg, "format = \"sceneflow-experiment/1\"\nname = \"x\"\nseed = 1\n[system]\nfile = \"missing.toml\"\n").unwrap();
    let o = lab(&["--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap(), "validate"]);
    assert_eq!(o.status.code(), Some(2));
    let o = lab(&["--out", dir.path().to_str().unwrap(), "verify-all", "--checks", "15"]);
    assert_eq!(o.status.code(), Some(2));
}
