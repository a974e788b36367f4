//! The run manifest. Everything in it is a function of the config, so two runs
//! of the same config write identical bytes; wall-clock times go to a separate
//! `runtimes.json`.

use std::path::Path;

use anyhow::Result;
use serde::Serialize;

use sceneflow::suite::{CheckReport, Measurement, Verdict};

pub const MANIFEST_FORMAT: &str = "sceneflow-manifest/1";
pub const RUNTIMES_FORMAT: &str = "sceneflow-runtimes/1";

#[derive(Debug, Clone, Serialize)]
pub struct ManifestCheck {
    pub id: String,
    pub name: String,
    pub verdict: Verdict,
    pub measurements: Vec<Measurement>,
    pub error: Option<String>,
}

impl ManifestCheck {
    pub fn from_report(r: &CheckReport) -> Self {
        ManifestCheck {
            id: format!("acceptance-{:02}", r.id),
            name: r.name.into(),
            verdict: r.verdict,
            measurements: r.measurements.clone(),
            error: r.error.clone(),
        }
    }

    /// A check built from measurements; fails if any measurement does.
    pub fn from_measurements(id: &str, name: &str, measurements: Vec<Measurement>) -> Self {
        let verdict = if measurements.iter().all(|m| m.passed) { Verdict::Pass } else { Verdict::Fail };
        ManifestCheck { id: id.into(), name: name.into(), verdict, measurements, error: None }
    }
}

pub fn measurement(name: &str, value: f64, tolerance: f64) -> Measurement {
    Measurement { name: name.into(), value, tolerance, passed: value <= tolerance }
}

#[derive(Debug, Clone, Serialize)]
pub struct Versions {
    pub sceneflow: &'static str,
    pub lab: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub format: &'static str,
    pub subcommand: String,
    pub experiment: String,
    pub config_hash: String,
    pub versions: Versions,
    pub seed: u64,
    pub tol_scale: f64,
    pub checks: Vec<ManifestCheck>,
    /// Files written next to the manifest.
    pub artifacts: Vec<String>,
    pub runtimes_file: &'static str,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Runtimes {
    pub format: &'static str,
    pub total_seconds: f64,
    pub per_check: Vec<(String, f64)>,
}

impl Manifest {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn write(&self, dir: &Path, runtimes: &Runtimes) -> Result<()> {
        std::fs::write(dir.join("manifest.json"), self.to_json()?)?;
        std::fs::write(dir.join(self.runtimes_file), serde_json::to_string_pretty(runtimes)? + "\n")?;
        Ok(())
    }
}

pub fn versions() -> Versions {
    Versions { sceneflow: sceneflow::VERSION, lab: env!("CARGO_PKG_VERSION") }
}
