//! One function per subcommand. Each writes its artifacts into `out` and
//! returns the checks it ran and the files it wrote.

use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use sceneflow::affine::{limit_point, sample_measure, validate_system, CodeStream};
use sceneflow::geometry::{combined_lemma, continuity_modulus};
use sceneflow::io::{self, DistributionReport, IfsSpec};
use sceneflow::measure::{density_diagnostic, project_measure, DEFAULT_TOL};
use sceneflow::projective::{cone_ok, foliation_limits, furstenberg_residual, furstenberg_sample, FurstenbergOptions, SkewPoint};
use sceneflow::scenery::{scenery_distribution, PointIndex, Sample, WindowMode};
use sceneflow::suite::{run_selected, SuiteConfig, CHECK_COUNT};
use sceneflow::suspension::{factor_slice, line_entry_times, local_dimension, roof, slice_frame, suspension_step, SliceSource, SuspensionPoint};
use sceneflow::{IfsSystem, ProjectiveAngle};

use crate::config::{ExperimentConfig, Mode};
use crate::manifest::{measurement, ManifestCheck};

pub struct Outcome {
    pub checks: Vec<ManifestCheck>,
    pub artifacts: Vec<String>,
    pub per_check_seconds: Vec<(String, f64)>,
}

impl Outcome {
    fn files(artifacts: &[&str]) -> Self {
        Outcome { checks: vec![], artifacts: artifacts.iter().map(|s| s.to_string()).collect(), per_check_seconds: vec![] }
    }
}

fn depth(cfg: &ExperimentConfig, ifs: &IfsSystem) -> usize {
    cfg.samples.depth.unwrap_or_else(|| ifs.default_depth())
}

fn angle_sample(cfg: &ExperimentConfig, ifs: &IfsSystem, n: usize) -> Result<Vec<ProjectiveAngle>> {
    let opts = FurstenbergOptions { rotate_into_cone: !cone_ok(ifs), ..Default::default() };
    Ok(furstenberg_sample(ifs, n, cfg.samples.burn_in, cfg.seed ^ 0xa, opts)?.angles)
}

pub fn validate(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let ifs = cfg.system()?;
    let r = validate_system(&ifs);
    io::write_json(&out.join("validation.json"), &r)?;
    io::write_json(&out.join("system.json"), &IfsSpec::of(&ifs, &cfg.name))?;
    let max_norm = ifs.maps().iter().map(|m| m.norm()).fold(0.0, f64::max);
    let mut ms = vec![measurement("largest operator norm, strictly below 1", max_norm, 1.0 - f64::EPSILON)];
    // the disk certificates belong to the cone setting; the carpet lives on the
    // unit square and its margin is only reported
    if ifs.cone_mode {
        ms.push(measurement("negated separation margin", -r.separation_margin, 0.0));
        ms.push(measurement("maps with a non-positive entry", r.cone_witnesses.len() as f64, 0.0));
    }
    let mut outcome = Outcome::files(&["validation.json", "system.json"]);
    outcome.checks.push(ManifestCheck::from_measurements("validate", "system validation", ms));
    Ok(outcome)
}

pub fn render(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let ifs = cfg.system()?;
    let mu = sample_measure(&ifs, cfg.samples.points, depth(cfg, &ifs), cfg.seed)?;
    std::fs::write(out.join("attractor.svg"), io::render_svg(&mu, 800))?;
    io::write_points_csv(&out.join("attractor.csv"), &mu)?;
    Ok(Outcome::files(&["attractor.svg", "attractor.csv"]))
}

#[derive(Serialize)]
struct AngleRow {
    theta: f64,
}

#[derive(Serialize)]
struct FurstenbergSummary {
    format: &'static str,
    samples: usize,
    burn_in: usize,
    rotated_into_cone: bool,
    residual_50_bins: f64,
}

pub fn furstenberg(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let ifs = cfg.system()?;
    let angles = angle_sample(cfg, &ifs, cfg.samples.angles)?;
    let rows: Vec<AngleRow> = angles.iter().map(|a| AngleRow { theta: a.value() }).collect();
    io::write_rows_csv(&out.join("furstenberg.csv"), &rows)?;
    let emp = sceneflow::projective::EmpiricalAngleMeasure::uniform(angles);
    let summary = FurstenbergSummary {
        format: "sceneflow-furstenberg/1",
        samples: emp.len(),
        burn_in: cfg.samples.burn_in,
        rotated_into_cone: !cone_ok(&ifs),
        residual_50_bins: furstenberg_residual(&emp, &ifs, 50)?,
    };
    io::write_json(&out.join("furstenberg.json"), &summary)?;
    Ok(Outcome::files(&["furstenberg.csv", "furstenberg.json"]))
}

pub fn project(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let ifs = cfg.system()?;
    let mu = sample_measure(&ifs, cfg.samples.points, depth(cfg, &ifs), cfg.seed)?;
    let m = project_measure(&mu, ProjectiveAngle::new(cfg.project.theta)).context("projecting the sample")?;
    io::write_line_csv(&out.join("projection.csv"), &m)?;
    io::write_json(&out.join("density.json"), &density_diagnostic(&m, None)?)?;
    Ok(Outcome::files(&["projection.csv", "density.json"]))
}

#[derive(Serialize)]
struct SliceSummary {
    format: &'static str,
    theta: f64,
    entry_time: f64,
    t: f64,
    strip_width: f64,
    points: usize,
    local_dimension: sceneflow::suspension::LocalDimension,
}

pub fn slice(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let ifs = cfg.system()?;
    let theta = angle_sample(cfg, &ifs, 1)?[0];
    let code = CodeStream::random(cfg.seed, cfg.scenery.stream);
    let (r1, _) = line_entry_times(&ifs, &code, theta)?;
    let s = &cfg.slice;
    let t = r1 + s.t_offset;
    let f = slice_frame(&ifs, &SliceSource::Exact { n: s.points, eps: s.eps, seed: cfg.seed }, &code, theta, t)?;
    io::write_line_csv(&out.join("slice.csv"), &f.measure)?;
    let summary = SliceSummary {
        format: "sceneflow-slice/1",
        theta: theta.value(),
        entry_time: r1,
        t,
        strip_width: s.eps,
        points: f.measure.len(),
        local_dimension: local_dimension(&f.measure, 0.0, s.r_min, s.r_max, s.radii)?,
    };
    io::write_json(&out.join("slice.json"), &summary)?;
    Ok(Outcome::files(&["slice.csv", "slice.json"]))
}

pub fn scenery(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let ifs = cfg.system()?;
    let mu = sample_measure(&ifs, cfg.samples.points, depth(cfg, &ifs), cfg.seed)?;
    let code = CodeStream::random(cfg.seed ^ 0xb, cfg.scenery.stream);
    let x = limit_point(&ifs, &code);
    let mode = match cfg.scenery.mode {
        Mode::Ball => WindowMode::Ball,
        Mode::Square => WindowMode::Square,
    };
    let d = scenery_distribution(&mu, x, cfg.scenery.t_max, cfg.scenery.dt, mode)?;
    io::write_json(&out.join("distribution.json"), &DistributionReport::of(&d))?;
    let mut files = vec!["distribution.json"];
    if let Some(last) = d.frames.last() {
        io::write_points_csv(&out.join("last_frame.csv"), &last.measure)?;
        std::fs::write(out.join("last_frame.svg"), io::render_svg(&last.measure, 600))?;
        files.extend(["last_frame.csv", "last_frame.svg"]);
    }
    Ok(Outcome::files(&files))
}

#[derive(Serialize)]
struct OrbitRow {
    time: f64,
    shift: u64,
    theta: f64,
    height: f64,
    roof: f64,
}

pub fn suspension(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let ifs = cfg.system()?;
    let theta = angle_sample(cfg, &ifs, 1)?[0];
    let base = SkewPoint { code: CodeStream::random(cfg.seed, cfg.scenery.stream), theta };
    let s = &cfg.suspension;
    if !(s.step > 0.0 && s.time >= 0.0) {
        bail!("suspension needs step > 0 and time >= 0");
    }
    let mut p = SuspensionPoint { base, height: 0.0 };
    let mut rows = Vec::new();
    let steps = (s.time / s.step).floor() as usize;
    for k in 0..=steps {
        rows.push(OrbitRow {
            time: k as f64 * s.step,
            shift: p.base.code.offset,
            theta: p.base.theta.value(),
            height: p.height,
            roof: roof(&ifs, &p.base)?,
        });
        if k < steps {
            p = suspension_step(&p, s.step, &ifs)?;
        }
    }
    io::write_json_lines(&out.join("orbit.jsonl"), &rows)?;
    let f = factor_slice(&ifs, &p, &SliceSource::Exact { n: cfg.slice.points, eps: cfg.slice.eps, seed: cfg.seed })?;
    io::write_line_csv(&out.join("factor_slice.csv"), &f.measure)?;
    Ok(Outcome::files(&["orbit.jsonl", "factor_slice.csv"]))
}

#[derive(Serialize)]
struct GeometrySummary {
    format: &'static str,
    f_ss: f64,
    theta: f64,
    combined: sceneflow::geometry::CombinedLemmaReport,
    continuity: sceneflow::geometry::ContinuityReport,
}

pub fn geometry(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let ifs = cfg.system()?;
    let code = CodeStream::random(cfg.seed ^ 9, cfg.scenery.stream);
    let f_ss = foliation_limits(&ifs, &code, 60)?.f_ss;
    let theta = ProjectiveAngle::new(f_ss.value() + 0.01);
    let combined = combined_lemma(&ifs, &code, theta, f_ss, 0.1, 20)?;
    let mu = sample_measure(&ifs, cfg.samples.points, depth(cfg, &ifs), cfg.seed)?;
    let index = PointIndex::new(&mu);
    let sample = Sample { mu: &mu, index: Some(&index) };
    let continuity = continuity_modulus(&ifs, &sample, &code, f_ss, theta, cfg.scenery.t_max, 0.25, DEFAULT_TOL)?;
    let summary = GeometrySummary { format: "sceneflow-geometry/1", f_ss: f_ss.value(), theta: theta.value(), combined, continuity };
    io::write_json(&out.join("geometry.json"), &summary)?;
    Ok(Outcome::files(&["geometry.json"]))
}

/// The acceptance suite. The checks fix their own systems; the config
/// contributes the seed, the tolerance scale and the selection.
pub fn verify_all(cfg: &ExperimentConfig, _out: &Path) -> Result<Outcome> {
    let ids: Vec<u8> = cfg.suite.checks.clone().unwrap_or_else(|| (1..=CHECK_COUNT).collect());
    if let Some(bad) = ids.iter().find(|&&i| i == 0 || i > CHECK_COUNT) {
        bail!("no acceptance check {bad}; ids run from 1 to {CHECK_COUNT}");
    }
    let suite = SuiteConfig { seed: cfg.seed, tol_scale: cfg.tolerances.scale };
    let start = Instant::now();
    let reports = run_selected(&ids, &suite, |r| log::info!("{}", r.summary_line()));
    log::info!("suite finished in {:.1}s", start.elapsed().as_secs_f64());
    Ok(Outcome {
        checks: reports.iter().map(ManifestCheck::from_report).collect(),
        artifacts: vec![],
        per_check_seconds: reports.iter().map(|r| (format!("acceptance-{:02}", r.id), r.seconds)).collect(),
    })
}
