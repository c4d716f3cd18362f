//! CSV and JSON artifacts.
//!
//! Floats are written with 17 significant digits (`{:.16e}`), which round
//! trips every f64 and gives byte-identical files for identical results.

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

use crate::bloch::{DensityState, SteadySolution};
use crate::cavity::{ObCurve, ScanPoint, Threshold, TurningPoint};
use crate::error::Result;
use crate::sweep::{PointRecord, SweepResult};

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

pub fn write_curve_csv<W: Write>(out: W, curve: &ObCurve) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "y_re", "y_im", "y_mag", "branch_id", "stable"])?;
    for p in &curve.points {
        let id = curve.branch_of(p.x);
        let stable = curve.branches.get(id).map(|b| b.stable).unwrap_or(true);
        w.write_record([
            fmt_f64(p.x),
            fmt_f64(p.y.re),
            fmt_f64(p.y.im),
            fmt_f64(p.y_mag),
            id.to_string(),
            stable.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Sidecar describing a traced curve together with the configuration that
/// produced it.
#[derive(Debug, Serialize)]
pub struct CurveSidecar<'a, C: Serialize> {
    pub turning_points: &'a [TurningPoint],
    pub degenerate_points: &'a [TurningPoint],
    pub thresholds: &'a [Threshold],
    pub stable_branches: usize,
    pub config: &'a C,
}

pub fn write_json<W: Write, T: Serialize + ?Sized>(mut out: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn write_spectrum_csv<W: Write>(out: W, rows: &[(f64, Complex64)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["delta_p", "re_response", "im_response"])?;
    for (d, r) in rows {
        w.write_record([fmt_f64(*d), fmt_f64(r.re), fmt_f64(r.im)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_hysteresis_csv<W: Write>(out: W, scan: &[ScanPoint]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["direction", "y", "x", "converged"])?;
    for p in scan {
        w.write_record([
            p.direction.as_str().to_string(),
            fmt_f64(p.y),
            fmt_f64(p.x),
            p.converged.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn thresholds_cell(th: &[Threshold]) -> String {
    th.iter()
        .map(|t| format!("{}:{}", fmt_f64(t.y_up), fmt_f64(t.y_down)))
        .collect::<Vec<_>>()
        .join(";")
}

/// Summary with one row per grid point in row-major order. `thresholds`
/// holds `y_up:y_down` pairs separated by `;`.
pub fn write_sweep_summary<W: Write>(out: W, result: &SweepResult) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["point".to_string()];
    header.extend(result.axes.iter().map(|a| a.name().to_string()));
    header.extend(
        ["status", "turning_points", "multiplicity", "switch_up", "thresholds", "error"]
            .iter()
            .map(|s| s.to_string()),
    );
    w.write_record(&header)?;
    for (k, r) in result.records.iter().enumerate() {
        let mut row = vec![k.to_string()];
        row.extend(r.values.iter().map(|v| fmt_f64(*v)));
        row.push(if r.error.is_none() { "ok" } else { "failed" }.to_string());
        row.push(r.turning_point_count().map(|n| n.to_string()).unwrap_or_default());
        row.push(r.multiplicity.map(|n| n.to_string()).unwrap_or_default());
        row.push(fmt_opt(r.switch_up()));
        row.push(thresholds_cell(&r.thresholds));
        row.push(r.error.clone().unwrap_or_default());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// File name of the curve of sweep point `k`.
pub fn point_curve_name(prefix: &str, k: usize) -> String {
    format!("{prefix}_point{k:04}.csv")
}

/// Writes one curve CSV per record that carries a curve; returns the
/// number of files written.
pub fn write_point_curves(dir: &Path, prefix: &str, records: &[PointRecord]) -> Result<usize> {
    let mut n = 0;
    for (k, r) in records.iter().enumerate() {
        if let Some(curve) = &r.curve {
            let f = std::fs::File::create(dir.join(point_curve_name(prefix, k)))?;
            write_curve_csv(std::io::BufWriter::new(f), curve)?;
            n += 1;
        }
    }
    Ok(n)
}

#[derive(Debug, Serialize)]
pub struct SteadyReport {
    pub state: DensityState,
    pub populations: [f64; 3],
    pub residual: f64,
    pub degenerate: bool,
}

impl From<&SteadySolution> for SteadyReport {
    fn from(s: &SteadySolution) -> Self {
        Self {
            state: s.state,
            populations: s.state.populations(),
            residual: s.residual,
            degenerate: s.degenerate,
        }
    }
}
