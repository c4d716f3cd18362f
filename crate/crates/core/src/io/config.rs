//! TOML run configuration.
//!
//! Every section and key is optional and defaults to the figure-preset
//! values; unknown sections or keys are rejected. Overrides of the form
//! `section.key=value` are applied to the parsed document before it is
//! resolved, so they follow the same rules as the file.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bloch::AtomParams;
use crate::cavity::{uniform_ramp, CavityParams};
use crate::error::{Error, Result};
use crate::sweep::{Axis, GridSpec, Outputs, PointParams, SweepSpec, DEFAULT_MAX_POINTS};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DriveConfig {
    /// Probe Rabi frequency, used by `steady`.
    #[serde(with = "super::complex")]
    pub omega_p: Complex64,
    #[serde(with = "super::complex")]
    pub omega_c: Complex64,
}

impl Default for DriveConfig {
    fn default() -> Self {
        Self {
            omega_p: Complex64::new(1.0, 0.0),
            omega_c: Complex64::new(1.0, 0.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumConfig {
    pub delta_p_min: f64,
    pub delta_p_max: f64,
    pub count: usize,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        Self {
            delta_p_min: -5.0,
            delta_p_max: 5.0,
            count: 1001,
        }
    }
}

impl SpectrumConfig {
    pub fn points(&self) -> Result<Vec<f64>> {
        if !(self.delta_p_max > self.delta_p_min && self.count >= 2) {
            return Err(Error::Config(
                "spectrum needs delta_p_min < delta_p_max and count >= 2".into(),
            ));
        }
        let h = (self.delta_p_max - self.delta_p_min) / (self.count - 1) as f64;
        Ok((0..self.count).map(|k| self.delta_p_min + k as f64 * h).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanConfig {
    pub y_max: f64,
    pub y_step: f64,
    pub up_then_down: bool,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            y_max: 120.0,
            y_step: 0.01,
            up_then_down: true,
        }
    }
}

impl ScanConfig {
    pub fn ramp(&self) -> Result<Vec<f64>> {
        if !(self.y_step > 0.0 && self.y_max >= 0.0 && self.y_max.is_finite()) {
            return Err(Error::Config("scan needs y_step > 0 and y_max >= 0".into()));
        }
        Ok(uniform_ramp(self.y_max, self.y_step))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub axes: Vec<Axis>,
    pub outputs: Outputs,
    pub max_points: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            axes: Vec::new(),
            outputs: Outputs::default(),
            max_points: DEFAULT_MAX_POINTS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    /// File name stem; `curve` writes `<prefix>_curve.csv` and so on.
    pub prefix: String,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("."),
            prefix: "lambda_ob".into(),
        }
    }
}

impl OutputConfig {
    pub fn path(&self, suffix: &str) -> PathBuf {
        self.dir.join(format!("{}_{}", self.prefix, suffix))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub atom: AtomParams,
    pub drive: DriveConfig,
    pub cavity: CavityParams,
    pub grid: GridSpec,
    pub spectrum: SpectrumConfig,
    pub scan: ScanConfig,
    pub sweep: SweepConfig,
    pub output: OutputConfig,
}

impl RunConfig {
    /// Parses TOML text, applying `overrides` (`section.key=value`) first.
    pub fn from_toml_str(text: &str, overrides: &[String]) -> Result<Self> {
        let mut table: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        for o in overrides {
            apply_override(&mut table, o)?;
        }
        toml::Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path, overrides: &[String]) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text, overrides)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn point(&self) -> PointParams {
        PointParams {
            atom: self.atom,
            omega_c: self.drive.omega_c,
            cavity: self.cavity,
            grid: self.grid,
        }
    }

    pub fn sweep_spec(&self) -> SweepSpec {
        SweepSpec {
            base: self.point(),
            axes: self.sweep.axes.clone(),
            outputs: self.sweep.outputs,
            max_points: self.sweep.max_points,
        }
    }

    /// Config whose sweep section reproduces `spec`.
    pub fn from_sweep_spec(spec: &SweepSpec) -> Self {
        Self {
            atom: spec.base.atom,
            drive: DriveConfig {
                omega_c: spec.base.omega_c,
                ..DriveConfig::default()
            },
            cavity: spec.base.cavity,
            grid: spec.base.grid,
            sweep: SweepConfig {
                axes: spec.axes.clone(),
                outputs: spec.outputs,
                max_points: spec.max_points,
            },
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.sweep_spec().validate()?;
        self.spectrum.points()?;
        self.scan.ramp()?;
        Ok(())
    }
}

/// `section.key=value`; the value is read as a TOML value, and as a bare
/// string when it does not parse as one.
fn apply_override(table: &mut toml::Table, assignment: &str) -> Result<()> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override `{assignment}` is not key=value")))?;
    let key = key.trim();
    let raw = raw.trim();
    let value = match format!("v = {raw}").parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").unwrap(),
        Err(_) => toml::Value::String(raw.to_string()),
    };
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(Error::Config(format!("bad override key `{key}`")));
    }
    let (last, sections) = parts.split_last().unwrap();
    let mut cur = table;
    for s in sections {
        let entry = cur
            .entry(s.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = entry
            .as_table_mut()
            .ok_or_else(|| Error::Config(format!("`{s}` in `{key}` is not a section")))?;
    }
    cur.insert(last.to_string(), value);
    Ok(())
}
