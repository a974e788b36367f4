//! File formats: IFS specs (TOML), point clouds (CSV), reports (JSON) and
//! point renders (SVG). Every format carries a `format` tag.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::affine::{AffineContraction, IfsSystem};
use crate::error::{LabError, Result};
use crate::linalg::{vec2, Mat2};
use crate::measure::{LineMeasure, WeightedPointMeasure};
use crate::scenery::{battery, EmpiricalDistribution, BATTERY_LEN};

pub const IFS_FORMAT: &str = "sceneflow-ifs/1";
pub const DISTRIBUTION_FORMAT: &str = "sceneflow-distribution/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapSpec {
    /// Row-major.
    pub matrix: [[f64; 2]; 2],
    pub offset: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IfsSpec {
    pub format: String,
    #[serde(default)]
    pub name: String,
    pub maps: Vec<MapSpec>,
    pub probabilities: Vec<f64>,
    /// Whether the system is expected to satisfy the positive-cone condition.
    #[serde(default)]
    pub cone_mode: bool,
}

impl IfsSpec {
    pub fn from_toml(text: &str) -> Result<Self> {
        let spec: IfsSpec = toml::from_str(text).map_err(|e| LabError::Config(e.to_string()))?;
        if spec.format != IFS_FORMAT {
            return Err(LabError::Config(format!("expected format = \"{IFS_FORMAT}\", found \"{}\"", spec.format)));
        }
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| LabError::Config(e.to_string()))
    }

    pub fn build(&self) -> Result<IfsSystem> {
        let maps = self
            .maps
            .iter()
            .map(|m| {
                let [[a, b], [c, d]] = m.matrix;
                AffineContraction::new(Mat2::new(a, b, c, d), vec2(m.offset[0], m.offset[1]))
            })
            .collect();
        IfsSystem::new(maps, self.probabilities.clone(), self.cone_mode)
    }

    pub fn of(ifs: &IfsSystem, name: &str) -> Self {
        IfsSpec {
            format: IFS_FORMAT.into(),
            name: name.into(),
            maps: ifs
                .maps()
                .iter()
                .map(|m| MapSpec {
                    matrix: [[m.matrix[(0, 0)], m.matrix[(0, 1)]], [m.matrix[(1, 0)], m.matrix[(1, 1)]]],
                    offset: [m.offset.x, m.offset.y],
                })
                .collect(),
            probabilities: ifs.probabilities().to_vec(),
            cone_mode: ifs.cone_mode,
        }
    }
}

#[derive(Serialize)]
struct PointRow {
    x: f64,
    y: f64,
    weight: f64,
}

pub fn write_points_csv(path: &Path, mu: &WeightedPointMeasure) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for (p, &weight) in mu.points.iter().zip(&mu.weights) {
        w.serialize(PointRow { x: p.x, y: p.y, weight })?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct LineRow {
    position: f64,
    weight: f64,
}

pub fn write_line_csv(path: &Path, m: &LineMeasure) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for (&position, &weight) in m.positions.iter().zip(&m.weights) {
        w.serialize(LineRow { position, weight })?;
    }
    w.flush()?;
    Ok(())
}

/// Serializes any record type to CSV, one row per item.
pub fn write_rows_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(value)?)?;
    Ok(())
}

/// Appends one JSON object per line.
pub fn write_json_lines<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut out = String::new();
    for r in rows {
        out.push_str(&serde_json::to_string(r)?);
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct DistributionReport {
    pub format: &'static str,
    pub times: Vec<f64>,
    pub battery_names: Vec<String>,
    /// Battery per frame, in time order.
    pub battery: Vec<Vec<f64>>,
    pub skipped: Vec<f64>,
}

impl DistributionReport {
    pub fn of(d: &EmpiricalDistribution) -> Self {
        let mut names: Vec<String> = (0..BATTERY_LEN - 2).map(|k| format!("cell_{}_{}", k % 5, k / 5)).collect();
        names.push("mean_radius".into());
        names.push("mean_radius_sq".into());
        DistributionReport {
            format: DISTRIBUTION_FORMAT,
            times: d.times(),
            battery_names: names,
            battery: d.frames.iter().map(|f| battery(&f.measure).to_vec()).collect(),
            skipped: d.skipped.clone(),
        }
    }
}

/// Dots on the square [−1, 1]², unit circle drawn for reference. Dot area
/// follows the weight relative to uniform.
pub fn render_svg(mu: &WeightedPointMeasure, size: u32) -> String {
    let s = size as f64;
    let to_px = |v: f64| (v + 1.0) * 0.5 * s;
    let mean_w = mu.total_mass() / mu.len().max(1) as f64;
    let base_r = (s / 400.0).max(0.3);
    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {s} {s}">"#);
    let _ = writeln!(out, r#"<!-- format: sceneflow-svg/1 -->"#);
    let _ = writeln!(out, r#"<rect width="{s}" height="{s}" fill="white"/>"#);
    let _ = writeln!(out, r#"<circle cx="{0}" cy="{0}" r="{0}" fill="none" stroke="gray" stroke-width="1"/>"#, s / 2.0);
    let _ = writeln!(out, r#"<g fill="black">"#);
    for (p, w) in mu.points.iter().zip(&mu.weights) {
        let r = base_r * (w / mean_w).sqrt();
        // SVG's y axis points down
        let _ = writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="{:.2}"/>"#, to_px(p.x), s - to_px(p.y), r);
    }
    out.push_str("</g>\n</svg>\n");
    out
}
