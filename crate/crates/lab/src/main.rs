//! `sceneflow`: the experiment runner.
//!
//! Exit status 0 iff every executed check passes; 1 when a check fails or a
//! rerun disagrees; 2 on configuration or runtime errors.

mod commands;
mod config;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use config::ExperimentConfig;
use manifest::{Manifest, Runtimes, MANIFEST_FORMAT, RUNTIMES_FORMAT};
use sceneflow::suite::Verdict;

#[derive(Parser)]
#[command(name = "sceneflow", version, about = "Scenery flow laboratory for self-affine Bernoulli measures")]
struct Cli {
    /// Experiment config (TOML). Without one, EX-POS with default settings.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory; overrides the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Multiplies every positive tolerance.
    #[arg(long, global = true)]
    tol_scale: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rerun the validation certificate of the system.
    Validate,
    /// SVG and CSV of attractor sample points.
    Render,
    /// Sample of the Furstenberg measure with its stationarity residual.
    Furstenberg,
    /// Projection of the attractor sample with a density diagnostic.
    Project,
    /// Slice frame through a typical point along a typical direction.
    Slice,
    /// Scenery distribution at a typical point.
    Scenery,
    /// Orbit of the suspension flow and the factor slice at its end.
    Suspension,
    /// Containment along an orbit and the direction continuity modulus.
    Geometry,
    /// The acceptance suite.
    VerifyAll {
        /// Comma-separated check ids; all when absent.
        #[arg(long, value_delimiter = ',')]
        checks: Option<Vec<u8>>,
        /// Run twice and fail unless both manifests agree byte for byte.
        #[arg(long)]
        check_determinism: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Render => "render",
            Command::Furstenberg => "furstenberg",
            Command::Project => "project",
            Command::Slice => "slice",
            Command::Scenery => "scenery",
            Command::Suspension => "suspension",
            Command::Geometry => "geometry",
            Command::VerifyAll { .. } => "verify-all",
        }
    }
}

fn resolve(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::builtin(cli.seed.unwrap_or(sceneflow::suite::SuiteConfig::default().seed)),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(x) = cli.tol_scale {
        cfg.tolerances.scale = x;
    }
    if let Some(o) = &cli.out {
        cfg.out = Some(o.clone());
    }
    if let Command::VerifyAll { checks: Some(c), .. } = &cli.command {
        cfg.suite.checks = Some(c.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn execute(cli: &Cli, cfg: &ExperimentConfig, out: &std::path::Path) -> Result<(Manifest, Runtimes)> {
    let start = Instant::now();
    let outcome = match &cli.command {
        Command::Validate => commands::validate(cfg, out),
        Command::Render => commands::render(cfg, out),
        Command::Furstenberg => commands::furstenberg(cfg, out),
        Command::Project => commands::project(cfg, out),
        Command::Slice => commands::slice(cfg, out),
        Command::Scenery => commands::scenery(cfg, out),
        Command::Suspension => commands::suspension(cfg, out),
        Command::Geometry => commands::geometry(cfg, out),
        Command::VerifyAll { .. } => commands::verify_all(cfg, out),
    }?;
    let passed = outcome.checks.iter().all(|c| c.verdict != Verdict::Fail);
    let manifest = Manifest {
        format: MANIFEST_FORMAT,
        subcommand: cli.command.name().into(),
        experiment: cfg.name.clone(),
        config_hash: cfg.hash()?,
        versions: manifest::versions(),
        seed: cfg.seed,
        tol_scale: cfg.tolerances.scale,
        checks: outcome.checks,
        artifacts: outcome.artifacts,
        runtimes_file: "runtimes.json",
        passed,
    };
    let runtimes =
        Runtimes { format: RUNTIMES_FORMAT, total_seconds: start.elapsed().as_secs_f64(), per_check: outcome.per_check_seconds };
    Ok((manifest, runtimes))
}

fn run(cli: &Cli) -> Result<bool> {
    if let Some(j) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global().context("starting the worker pool")?;
    }
    let cfg = resolve(cli)?;
    let out = cfg.out.clone().unwrap_or_else(|| PathBuf::from("out").join(&cfg.name));
    std::fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
    let (manifest, runtimes) = execute(cli, &cfg, &out)?;
    manifest.write(&out, &runtimes)?;
    for c in &manifest.checks {
        if c.verdict != Verdict::Skip {
            let parts: Vec<String> = c.measurements.iter().map(|m| format!("{} = {:.3e} (<= {:.1e})", m.name, m.value, m.tolerance)).collect();
            let tag = if c.verdict == Verdict::Pass { "PASS" } else { "FAIL" };
            let err = c.error.as_ref().map(|e| format!(" error: {e}")).unwrap_or_default();
            println!("{tag} {} {}: {}{err}", c.id, c.name, parts.join("; "));
        }
    }
    let mut ok = manifest.passed;
    if let Command::VerifyAll { check_determinism: true, .. } = cli.command {
        let (again, _) = execute(cli, &cfg, &out)?;
        if again.to_json()? != manifest.to_json()? {
            eprintln!("nondeterminism: the rerun produced a different manifest");
            ok = false;
        } else {
            println!("rerun manifest identical");
        }
    }
    println!("{} written to {}", manifest.subcommand, out.join("manifest.json").display());
    Ok(ok)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
