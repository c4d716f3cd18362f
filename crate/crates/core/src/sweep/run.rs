use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::cavity::{trace_ob_curve, ObCurve, Threshold, TurningPoint};
use crate::error::Result;
use crate::par;

use super::spec::{ParamPath, PointParams, SweepSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    /// Row-major index into the axes.
    pub index: Vec<usize>,
    pub values: Vec<f64>,
    pub turning_points: Vec<TurningPoint>,
    pub degenerate_points: usize,
    pub thresholds: Vec<Threshold>,
    pub multiplicity: Option<usize>,
    pub curve: Option<ObCurve>,
    /// Solver failure at this point; the other fields are then empty.
    pub error: Option<String>,
}

impl PointRecord {
    pub fn turning_point_count(&self) -> Option<usize> {
        self.error.is_none().then_some(self.turning_points.len())
    }

    pub fn switch_up(&self) -> Option<f64> {
        self.thresholds.first().map(|t| t.y_up)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub config: SweepSpec,
    pub version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub axes: Vec<ParamPath>,
    pub records: Vec<PointRecord>,
    pub provenance: Provenance,
}

fn evaluate_point(spec: &SweepSpec, flat: usize) -> PointRecord {
    let index = spec.index_of(flat);
    let values = spec.values_at(&index);
    let p: PointParams = spec.params_at(&index);
    let mut rec = PointRecord {
        index,
        values,
        turning_points: Vec::new(),
        degenerate_points: 0,
        thresholds: Vec::new(),
        multiplicity: None,
        curve: None,
        error: None,
    };
    let traced = p
        .validate()
        .and_then(|_| trace_ob_curve(&p.atom, p.omega_c, &p.cavity, &p.grid.points()));
    match traced {
        Ok(curve) => {
            rec.turning_points = curve.turning_points.clone();
            rec.degenerate_points = curve.degenerate_points.len();
            if spec.outputs.thresholds {
                rec.thresholds = curve.thresholds.clone();
            }
            if spec.outputs.multiplicity {
                rec.multiplicity = Some(curve.max_multiplicity());
            }
            if spec.outputs.curve {
                rec.curve = Some(curve);
            }
        }
        Err(e) => rec.error = Some(e.to_string()),
    }
    rec
}

/// Traces one curve per grid point on `workers` threads. Records come back
/// in row-major order whatever the scheduling; a failing point is recorded,
/// not raised.
pub fn run_sweep(spec: &SweepSpec, workers: usize) -> Result<SweepResult> {
    spec.validate()?;
    let flat: Vec<usize> = (0..spec.point_count()).collect();
    let records = par::map(&flat, workers.max(1), |&k| evaluate_point(spec, k));
    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    Ok(SweepResult {
        axes: spec.axes.iter().map(|a| a.param).collect(),
        records,
        provenance: Provenance {
            config: spec.clone(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp,
        },
    })
}
