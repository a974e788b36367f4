//! Experiment configuration: a TOML file with a mandatory seed and a system
//! given by fixture name, file reference or inline spec.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use sceneflow::fixtures;
use sceneflow::io::IfsSpec;
use sceneflow::IfsSystem;

pub const CONFIG_FORMAT: &str = "sceneflow-experiment/1";

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub format: String,
    pub name: String,
    pub seed: u64,
    pub system: SystemRef,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub samples: Samples,
    #[serde(default)]
    pub project: ProjectSettings,
    #[serde(default)]
    pub scenery: ScenerySettings,
    #[serde(default)]
    pub slice: SliceSettings,
    #[serde(default)]
    pub suspension: SuspensionSettings,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub suite: SuiteSettings,
}

/// Exactly one of the three must be set.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemRef {
    /// `pu`, `ex-pos` or `ex-thick`.
    pub fixture: Option<String>,
    /// An IFS spec file, relative to the config file.
    pub file: Option<PathBuf>,
    pub inline: Option<IfsSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Samples {
    pub points: usize,
    /// Word length per sample point; the system default when absent.
    pub depth: Option<usize>,
    pub angles: usize,
    pub burn_in: usize,
}

impl Default for Samples {
    fn default() -> Self {
        Samples { points: 100_000, depth: None, angles: 20_000, burn_in: 40 }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProjectSettings {
    /// Projection direction; 0 projects onto the horizontal axis.
    pub theta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Ball,
    Square,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenerySettings {
    pub t_max: f64,
    pub dt: f64,
    pub mode: Mode,
    /// Stream of the base point's code.
    pub stream: u64,
}

impl Default for ScenerySettings {
    fn default() -> Self {
        ScenerySettings { t_max: 6.0, dt: 0.1, mode: Mode::Ball, stream: 0 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SliceSettings {
    pub points: usize,
    /// Full strip width.
    pub eps: f64,
    /// Frame time past the entry time `r₁`.
    pub t_offset: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub radii: usize,
}

impl Default for SliceSettings {
    fn default() -> Self {
        SliceSettings { points: 10_000, eps: 1e-3, t_offset: 0.0, r_min: 0.02, r_max: 0.5, radii: 12 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuspensionSettings {
    pub time: f64,
    pub step: f64,
}

impl Default for SuspensionSettings {
    fn default() -> Self {
        SuspensionSettings { time: 10.0, step: 0.25 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub scale: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { scale: 1.0 }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteSettings {
    /// Check ids to run; all when absent.
    pub checks: Option<Vec<u8>>,
}

impl ExperimentConfig {
    /// Used when no config file is given.
    pub fn builtin(seed: u64) -> Self {
        ExperimentConfig {
            format: CONFIG_FORMAT.into(),
            name: "default".into(),
            seed,
            system: SystemRef { fixture: Some("ex-pos".into()), ..Default::default() },
            out: None,
            samples: Samples::default(),
            project: ProjectSettings::default(),
            scenery: ScenerySettings::default(),
            slice: SliceSettings::default(),
            suspension: SuspensionSettings::default(),
            tolerances: Tolerances::default(),
            suite: SuiteSettings::default(),
        }
    }

    /// Parses the file and resolves a file-referenced system into an inline one,
    /// so the config hash covers the system itself.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut cfg: ExperimentConfig = toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        if cfg.format != CONFIG_FORMAT {
            bail!("expected format = \"{CONFIG_FORMAT}\", found \"{}\"", cfg.format);
        }
        if let Some(file) = cfg.system.file.take() {
            let full = path.parent().unwrap_or(Path::new(".")).join(&file);
            let spec = IfsSpec::load(&full).with_context(|| format!("resolving system file {}", full.display()))?;
            cfg.system.inline = Some(spec);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let set = [self.system.fixture.is_some(), self.system.file.is_some(), self.system.inline.is_some()];
        if set.iter().filter(|&&b| b).count() != 1 {
            bail!("[system] needs exactly one of fixture, file or inline");
        }
        if !(self.tolerances.scale > 0.0) {
            bail!("tolerances.scale must be positive, got {}", self.tolerances.scale);
        }
        self.system()?;
        Ok(())
    }

    pub fn system(&self) -> Result<IfsSystem> {
        if let Some(name) = &self.system.fixture {
            return match name.as_str() {
                "pu" => Ok(fixtures::pu(fixtures::PU_LAMBDA)),
                "ex-pos" => Ok(fixtures::ex_pos()),
                "ex-thick" => Ok(fixtures::ex_thick()),
                other => bail!("unknown fixture \"{other}\" (known: pu, ex-pos, ex-thick)"),
            };
        }
        match &self.system.inline {
            Some(spec) => Ok(spec.build()?),
            None => bail!("system file was not resolved"),
        }
    }

    /// SHA-256 of the canonical JSON form. The output directory says where
    /// results go, not what they are, so it is left out.
    pub fn hash(&self) -> Result<String> {
        let canonical = serde_json::to_string(&ExperimentConfig { out: None, ..self.clone() })?;
        Ok(hex::encode(Sha256::digest(canonical.as_bytes())))
    }
}
