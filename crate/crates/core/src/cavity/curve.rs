//! Input/output curve tracing with turning-point detection.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bloch::{AtomParams, DensityState};
use crate::error::{Error, Result};

use super::params::CavityParams;
use super::state_equation::{evaluate, StatePoint};

/// Slopes with |d|y|/dx| below this at a local minimum of |slope| are
/// reported as degenerate (merged) turning points.
pub const DEGENERATE_SLOPE_TOL: f64 = 1e-6;

/// Turning points are bisected until the bracket is below `step / 100`.
pub const BISECTION_FRACTION: f64 = 0.01;

pub const MIN_GRID_POINTS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub x: f64,
    pub y: Complex64,
    pub y_mag: f64,
    /// d|y|/dx
    pub slope: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TurningKind {
    /// Local maximum of |y| (switch-up point).
    Max,
    /// Local minimum of |y| (switch-down point).
    Min,
    /// Two turning points merged into an inflection with zero slope.
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurningPoint {
    pub x: f64,
    pub y_mag: f64,
    pub kind: TurningKind,
}

/// Segment between consecutive turning points. `stable` is the mean-field
/// slope criterion (d|y|/dx > 0); it is not a dynamical stability analysis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub x_start: f64,
    pub x_end: f64,
    pub stable: bool,
}

/// Hysteresis pair: switch-up input `y_up` and the following switch-down
/// input `y_down`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    pub y_up: f64,
    pub y_down: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObCurve {
    pub points: Vec<CurvePoint>,
    pub turning_points: Vec<TurningPoint>,
    pub degenerate_points: Vec<TurningPoint>,
    pub branches: Vec<Branch>,
    pub thresholds: Vec<Threshold>,
}

impl ObCurve {
    pub fn is_bistable(&self) -> bool {
        self.turning_points.len() == 2
    }

    pub fn is_multistable(&self) -> bool {
        self.turning_points.len() >= 4
    }

    pub fn stable_branch_count(&self) -> usize {
        self.branches.iter().filter(|b| b.stable).count()
    }

    /// First switch-up threshold (lowest branch).
    pub fn switch_up(&self) -> Option<f64> {
        self.thresholds.first().map(|t| t.y_up)
    }

    /// Index into `branches` for a given x.
    pub fn branch_of(&self, x: f64) -> usize {
        self.turning_points.iter().filter(|tp| tp.x <= x).count()
    }

    /// Max number of coexisting solutions over all inputs covered by the curve.
    pub fn max_multiplicity(&self) -> usize {
        let mut levels: Vec<f64> = self.turning_points.iter().map(|t| t.y_mag).collect();
        levels.sort_by(f64::total_cmp);
        let (lo, hi) = self.y_range();
        let mut probes = vec![0.5 * (lo + hi)];
        for w in levels.windows(2) {
            probes.push(0.5 * (w[0] + w[1]));
        }
        if let (Some(first), Some(last)) = (levels.first(), levels.last()) {
            probes.push(0.5 * (lo + first));
            probes.push(0.5 * (last + hi));
        }
        probes
            .into_iter()
            .filter_map(|y| count_solutions(self, y).ok())
            .max()
            .unwrap_or(1)
    }

    pub fn y_range(&self) -> (f64, f64) {
        self.points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            (lo.min(p.y_mag), hi.max(p.y_mag))
        })
    }
}

struct Tracer<'a> {
    atom: &'a AtomParams,
    omega_c: Complex64,
    cav: &'a CavityParams,
}

impl Tracer<'_> {
    fn eval(&self, x: f64, init: &DensityState) -> Result<StatePoint> {
        evaluate(x, self.atom, self.omega_c, self.cav, Some(init)).map_err(|e| Error::Trace {
            x,
            source: Box::new(e),
        })
    }

    /// Bisects a slope sign change in [lo, hi] until the bracket is ≤ `tol`.
    fn bisect(&self, lo: &StatePoint, hi: &StatePoint, tol: f64) -> Result<StatePoint> {
        let (mut a, mut b) = (*lo, *hi);
        while b.x - a.x > tol {
            let mid = self.eval(0.5 * (a.x + b.x), &a.state)?;
            if (mid.slope > 0.0) == (a.slope > 0.0) {
                a = mid;
            } else {
                b = mid;
            }
        }
        self.eval(0.5 * (a.x + b.x), &a.state)
    }

    /// Golden-section minimization of |slope| on [lo, hi].
    fn min_abs_slope(&self, lo: &StatePoint, hi: &StatePoint, tol: f64) -> Result<StatePoint> {
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let (mut a, mut b) = (lo.x, hi.x);
        let seed = lo.state;
        let mut c = self.eval(b - g * (b - a), &seed)?;
        let mut d = self.eval(a + g * (b - a), &c.state)?;
        while b - a > tol {
            if c.slope.abs() < d.slope.abs() {
                b = d.x;
                d = c;
                c = self.eval(b - g * (b - a), &d.state)?;
            } else {
                a = c.x;
                c = d;
                d = self.eval(a + g * (b - a), &c.state)?;
            }
        }
        Ok(if c.slope.abs() < d.slope.abs() { c } else { d })
    }
}

fn validate_grid(x_grid: &[f64]) -> Result<()> {
    if x_grid.len() < MIN_GRID_POINTS {
        return Err(Error::InvalidParameter(format!(
            "x grid needs at least {MIN_GRID_POINTS} points, got {}",
            x_grid.len()
        )));
    }
    if !(x_grid[0] >= 0.0) {
        return Err(Error::InvalidParameter("x grid must start at x >= 0".into()));
    }
    if x_grid.windows(2).any(|w| !(w[1] > w[0])) || x_grid.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter("x grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Evenly spaced grid on [min, max].
pub fn linear_grid(min: f64, max: f64, count: usize) -> Vec<f64> {
    if count < 2 {
        return vec![min];
    }
    let step = (max - min) / (count - 1) as f64;
    (0..count).map(|i| min + step * i as f64).collect()
}

/// Traces |y|(x) along `x_grid` with warm-started continuation and locates
/// the turning points.
pub fn trace_ob_curve(
    atom: &AtomParams,
    omega_c: Complex64,
    cav: &CavityParams,
    x_grid: &[f64],
) -> Result<ObCurve> {
    validate_grid(x_grid)?;
    atom.validate()?;
    cav.validate()?;
    let tracer = Tracer { atom, omega_c, cav };

    let mut samples: Vec<StatePoint> = Vec::with_capacity(x_grid.len());
    let mut warm = DensityState::ground();
    for (k, &x) in x_grid.iter().enumerate() {
        let init = (k > 0).then_some(&warm);
        let p = evaluate(x, atom, omega_c, cav, init).map_err(|e| Error::Trace {
            x,
            source: Box::new(e),
        })?;
        warm = p.state;
        samples.push(p);
    }

    let mut turning_points = Vec::new();
    let mut degenerate_points = Vec::new();
    let sign = |s: f64| s > 0.0;
    for w in samples.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if sign(a.slope) != sign(b.slope) {
            let tol = (b.x - a.x) * BISECTION_FRACTION;
            let tp = tracer.bisect(a, b, tol)?;
            turning_points.push(TurningPoint {
                x: tp.x,
                y_mag: tp.y_mag(),
                kind: if sign(a.slope) {
                    TurningKind::Max
                } else {
                    TurningKind::Min
                },
            });
        }
    }
    for w in samples.windows(3) {
        let (a, b, c) = (&w[0], &w[1], &w[2]);
        let same_sign = sign(a.slope) == sign(b.slope) && sign(b.slope) == sign(c.slope);
        if same_sign && b.slope.abs() < a.slope.abs() && b.slope.abs() <= c.slope.abs() {
            let tol = (c.x - a.x) * 1e-9;
            let m = tracer.min_abs_slope(a, c, tol)?;
            if m.slope.abs() <= DEGENERATE_SLOPE_TOL {
                degenerate_points.push(TurningPoint {
                    x: m.x,
                    y_mag: m.y_mag(),
                    kind: TurningKind::Degenerate,
                });
            }
        }
    }
    merge_close_pairs(&mut turning_points, &mut degenerate_points, x_grid);

    let mut branches = Vec::with_capacity(turning_points.len() + 1);
    let mut start = x_grid[0];
    let mut stable = samples[0].slope > 0.0 || samples[0].slope.is_nan();
    for tp in &turning_points {
        branches.push(Branch {
            x_start: start,
            x_end: tp.x,
            stable,
        });
        start = tp.x;
        stable = tp.kind == TurningKind::Min;
    }
    branches.push(Branch {
        x_start: start,
        x_end: *x_grid.last().unwrap(),
        stable,
    });

    let thresholds = turning_points
        .windows(2)
        .filter(|w| w[0].kind == TurningKind::Max && w[1].kind == TurningKind::Min)
        .map(|w| Threshold {
            y_up: w[0].y_mag,
            y_down: w[1].y_mag,
        })
        .collect();

    let points = samples
        .iter()
        .map(|p| CurvePoint {
            x: p.x,
            y: p.y,
            y_mag: p.y_mag(),
            slope: p.slope,
        })
        .collect();

    Ok(ObCurve {
        points,
        turning_points,
        degenerate_points,
        branches,
        thresholds,
    })
}

/// A max/min pair closer than the bisection resolution is a single merged
/// turning point.
fn merge_close_pairs(tps: &mut Vec<TurningPoint>, degenerate: &mut Vec<TurningPoint>, grid: &[f64]) {
    let step = (grid[grid.len() - 1] - grid[0]) / (grid.len() - 1) as f64;
    let tol = 2.0 * step * BISECTION_FRACTION;
    let mut i = 0;
    while i + 1 < tps.len() {
        if tps[i + 1].x - tps[i].x <= tol {
            let merged = TurningPoint {
                x: 0.5 * (tps[i].x + tps[i + 1].x),
                y_mag: 0.5 * (tps[i].y_mag + tps[i + 1].y_mag),
                kind: TurningKind::Degenerate,
            };
            tps.drain(i..i + 2);
            degenerate.push(merged);
        } else {
            i += 1;
        }
    }
    degenerate.sort_by(|a, b| a.x.total_cmp(&b.x));
}

/// Number of x with |y(x)| = y_in on the traced curve.
pub fn count_solutions(curve: &ObCurve, y_in: f64) -> Result<usize> {
    let (min, max) = curve.y_range();
    if !(y_in >= min && y_in <= max) {
        return Err(Error::OutOfRange { y: y_in, min, max });
    }
    let ys: Vec<f64> = curve.points.iter().map(|p| p.y_mag).collect();
    let mut count = ys.iter().filter(|&&y| y == y_in).count();
    count += ys
        .windows(2)
        .filter(|w| (w[0] - y_in) * (w[1] - y_in) < 0.0)
        .count();
    Ok(count)
}
