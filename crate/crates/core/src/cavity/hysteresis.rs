//! Quasi-static hysteresis scans by damped fixed-point iteration.
//!
//! In mean-field mode each ramp point starts from the previous solution and
//! walks x in the direction of the residual y_in − |y(x)| with Newton steps
//! capped at half of x, shortening a step whenever it would pass over an
//! extremum of |y| without reaching y_in. The first sign change brackets
//! the root on the branch the system follows (or the nearest one after a
//! jump); inside it the Newton map Φ(x) = x + (y_in − |y|)/(d|y|/dx) is
//! iterated with damping, x ← x + λ(Φ − x), falling back to bisection when
//! Φ leaves the bracket. In z-resolved mode Φ is the ring map itself.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bloch::{AtomParams, DensityState};
use crate::error::{Error, Result};

use super::params::{CavityMode, CavityParams};
use super::propagate::propagate_profile;
use super::state_equation::evaluate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Up,
    Down,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Up => "up",
            Direction::Down => "down",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub direction: Direction,
    pub y: f64,
    /// Converged intracavity field (|mean field| in z-resolved mode), or
    /// the last converged value when `converged` is false.
    pub x: f64,
    pub converged: bool,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    pub lambda: f64,
    pub lambda_min: f64,
    pub max_iter: usize,
    /// Relative residual tolerance.
    pub tol: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            lambda: 0.5,
            lambda_min: 1.0 / 64.0,
            max_iter: 20_000,
            tol: 1e-12,
        }
    }
}

/// Scans `y_ramp` in order; with `up_then_down` the reversed ramp follows,
/// seeded from the end of the first half.
pub fn hysteresis_scan(
    atom: &AtomParams,
    omega_c: Complex64,
    cav: &CavityParams,
    y_ramp: &[f64],
    up_then_down: bool,
) -> Result<Vec<ScanPoint>> {
    hysteresis_scan_with(atom, omega_c, cav, y_ramp, up_then_down, &ScanOptions::default())
}

pub fn hysteresis_scan_with(
    atom: &AtomParams,
    omega_c: Complex64,
    cav: &CavityParams,
    y_ramp: &[f64],
    up_then_down: bool,
    opts: &ScanOptions,
) -> Result<Vec<ScanPoint>> {
    cav.validate()?;
    atom.validate()?;
    check_ramp(y_ramp)?;
    if !(opts.lambda > 0.0 && opts.lambda <= 1.0 && opts.lambda_min > 0.0 && opts.lambda_min <= opts.lambda) {
        return Err(Error::InvalidParameter("damping must satisfy 0 < lambda_min <= lambda <= 1".into()));
    }
    let first = if y_ramp.len() > 1 && y_ramp[0] > y_ramp[y_ramp.len() - 1] {
        Direction::Down
    } else {
        Direction::Up
    };
    let second = match first {
        Direction::Up => Direction::Down,
        Direction::Down => Direction::Up,
    };
    let mut halves: Vec<(Direction, Vec<f64>)> = vec![(first, y_ramp.to_vec())];
    if up_then_down {
        halves.push((second, y_ramp.iter().rev().copied().collect()));
    }
    let mut out = Vec::with_capacity(y_ramp.len() * halves.len());
    match cav.mode {
        CavityMode::MeanField => {
            let mut solver = MeanField::new(atom, omega_c, cav, opts);
            for (dir, ramp) in &halves {
                for &y in ramp {
                    out.push(solver.solve(*dir, y));
                }
            }
        }
        CavityMode::ZResolved => {
            let mut solver = Ring::new(atom, omega_c, cav, opts);
            for (dir, ramp) in &halves {
                for &y in ramp {
                    out.push(solver.solve(*dir, y));
                }
            }
        }
    }
    Ok(out)
}

fn check_ramp(y: &[f64]) -> Result<()> {
    if y.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(Error::InvalidParameter("ramp values must be finite and >= 0".into()));
    }
    let up = y.windows(2).all(|w| w[1] >= w[0]);
    let down = y.windows(2).all(|w| w[1] <= w[0]);
    if !(up || down) {
        return Err(Error::InvalidParameter("ramp must be monotone".into()));
    }
    Ok(())
}

/// Tracks the damping factor across iterations at one ramp point.
/// Oscillation means two successive increments point in opposite
/// directions.
struct Damping {
    lambda: f64,
    min: f64,
    last: Complex64,
}

impl Damping {
    fn new(opts: &ScanOptions) -> Self {
        Self {
            lambda: opts.lambda,
            min: opts.lambda_min,
            last: Complex64::new(0.0, 0.0),
        }
    }

    fn update(&mut self, increment: Complex64) -> f64 {
        if (increment * self.last.conj()).re < 0.0 {
            self.lambda = (0.5 * self.lambda).max(self.min);
        }
        self.last = increment;
        self.lambda
    }
}

struct MeanField<'a> {
    atom: &'a AtomParams,
    omega_c: Complex64,
    cav: &'a CavityParams,
    opts: &'a ScanOptions,
    x: f64,
    state: DensityState,
}

#[derive(Clone, Copy)]
struct Sample {
    x: f64,
    /// y_in − |y(x)|
    res: f64,
    slope: f64,
    state: DensityState,
}

/// Largest move per iteration: half of x plus a small absolute margin.
fn max_step(x: f64) -> f64 {
    0.5 * x + 0.1
}

impl<'a> MeanField<'a> {
    fn new(atom: &'a AtomParams, omega_c: Complex64, cav: &'a CavityParams, opts: &'a ScanOptions) -> Self {
        Self {
            atom,
            omega_c,
            cav,
            opts,
            x: 0.0,
            state: DensityState::ground(),
        }
    }

    fn sample(&self, x: f64, y: f64, warm: &DensityState) -> Option<Sample> {
        let p = evaluate(x, self.atom, self.omega_c, self.cav, Some(warm)).ok()?;
        Some(Sample {
            x,
            res: y - p.y_mag(),
            slope: p.slope,
            state: p.state,
        })
    }

    fn solve(&mut self, direction: Direction, y: f64) -> ScanPoint {
        match self.iterate(y) {
            Some((s, iterations)) => {
                self.x = s.x;
                self.state = s.state;
                ScanPoint {
                    direction,
                    y,
                    x: s.x,
                    converged: true,
                    iterations,
                }
            }
            None => ScanPoint {
                direction,
                y,
                x: self.x,
                converged: false,
                iterations: self.opts.max_iter,
            },
        }
    }

    /// Walks from the previous solution in the direction of the residual
    /// until its sign changes, then converges inside that bracket.
    fn iterate(&self, y: f64) -> Option<(Sample, usize)> {
        let tol = self.opts.tol * y.max(1.0);
        let mut cur = self.sample(self.x, y, &self.state)?;
        if cur.res.abs() <= tol {
            return Some((cur, 0));
        }
        let dir = cur.res.signum();
        let mut it = 0;
        let mut shrink = 1.0;
        let other = loop {
            it += 1;
            if it > self.opts.max_iter {
                return None;
            }
            let reach = max_step(cur.x);
            let newton = if cur.slope > 0.0 { cur.res.abs() / cur.slope } else { reach };
            let d = newton.min(reach) * shrink;
            let x = (cur.x + dir * d).max(0.0);
            let next = self.sample(x, y, &cur.state)?;
            if next.res.abs() <= tol {
                return Some((next, it));
            }
            if next.res.signum() != dir {
                break next;
            }
            // passed over an extremum without reaching y: retry shorter, in
            // case the extremum itself reaches y
            if cur.slope > 0.0 && !(next.slope > 0.0) && d > 1e-9 * cur.x.max(1.0) {
                shrink *= 0.5;
                continue;
            }
            if x == cur.x {
                return None;
            }
            shrink = 1.0;
            cur = next;
        };
        self.refine(y, tol, cur, other, it)
    }

    /// Damped Newton x ← x + λ(Φ(x) − x) inside a sign-change bracket, with
    /// bisection whenever Φ leaves the bracket.
    fn refine(&self, y: f64, tol: f64, a: Sample, b: Sample, mut it: usize) -> Option<(Sample, usize)> {
        let (mut lo, mut hi) = if a.x < b.x { (a, b) } else { (b, a) };
        let mut cur = if a.res.abs() < b.res.abs() { a } else { b };
        let mut damping = Damping::new(self.opts);
        loop {
            it += 1;
            if it > self.opts.max_iter {
                return None;
            }
            let newton = cur.x + cur.res / cur.slope;
            let x = if cur.slope > 0.0 && newton > lo.x && newton < hi.x {
                let lambda = damping.update(Complex64::new(newton - cur.x, 0.0));
                cur.x + lambda * (newton - cur.x)
            } else {
                0.5 * (lo.x + hi.x)
            };
            let next = self.sample(x, y, &cur.state)?;
            if next.res.abs() <= tol || hi.x - lo.x <= 4.0 * f64::EPSILON * hi.x.max(1.0) {
                return Some((next, it));
            }
            if next.res.signum() == lo.res.signum() {
                lo = next;
            } else {
                hi = next;
            }
            cur = next;
        }
    }
}

/// Fixed-point tolerance |Φ(e) − e| of the ring iteration, relative to |e|.
const RING_TOL: f64 = 1e-12;

struct Ring<'a> {
    atom: &'a AtomParams,
    omega_c: Complex64,
    cav: &'a CavityParams,
    opts: &'a ScanOptions,
    e: Complex64,
    x: f64,
    state: DensityState,
}

impl<'a> Ring<'a> {
    fn new(atom: &'a AtomParams, omega_c: Complex64, cav: &'a CavityParams, opts: &'a ScanOptions) -> Self {
        Self {
            atom,
            omega_c,
            cav,
            opts,
            e: Complex64::new(0.0, 0.0),
            x: 0.0,
            state: DensityState::ground(),
        }
    }

    fn solve(&mut self, direction: Direction, y: f64) -> ScanPoint {
        // incident field √T·y, entering the cavity through √T again
        let drive = Complex64::new(self.cav.t * y, 0.0);
        let feedback = self.cav.r() * Complex64::from_polar(1.0, -self.cav.theta);
        let mut e = self.e;
        let mut state = self.state;
        let mut damping = Damping::new(self.opts);
        for it in 0..self.opts.max_iter {
            let prof = match propagate_profile(e, self.atom, self.omega_c, self.cav.alpha_l, self.cav.n_steps, Some(&state)) {
                Ok(p) => p,
                Err(_) => break,
            };
            state = prof.exit_state;
            let phi = drive + feedback * prof.output();
            let inc = phi - e;
            if inc.norm() <= RING_TOL * e.norm().max(1.0) {
                self.e = e;
                self.state = state;
                self.x = prof.mean().norm();
                return ScanPoint {
                    direction,
                    y,
                    x: self.x,
                    converged: true,
                    iterations: it,
                };
            }
            let lambda = damping.update(inc);
            e += lambda * inc;
        }
        ScanPoint {
            direction,
            y,
            x: self.x,
            converged: false,
            iterations: self.opts.max_iter,
        }
    }
}

/// Thresholds for calling a change between successive scan points a jump.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpCriteria {
    /// Minimum |Δx| relative to the larger of the two x values.
    pub relative: f64,
    /// Minimum |Δx| / |Δy|.
    pub gain: f64,
}

impl Default for JumpCriteria {
    fn default() -> Self {
        Self {
            relative: 0.1,
            gain: 20.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Jump {
    pub direction: Direction,
    /// Last input before the jump.
    pub y_before: f64,
    /// First input after the jump.
    pub y_after: f64,
    pub x_before: f64,
    pub x_after: f64,
}

impl Jump {
    /// True when `y` lies between the two ramp inputs around the jump,
    /// widened by `margin`.
    pub fn brackets(&self, y: f64, margin: f64) -> bool {
        let lo = self.y_before.min(self.y_after) - margin;
        let hi = self.y_before.max(self.y_after) + margin;
        y >= lo && y <= hi
    }
}

/// Jumps between consecutive converged points of the same direction.
pub fn jumps(scan: &[ScanPoint], criteria: &JumpCriteria) -> Vec<Jump> {
    scan.windows(2)
        .filter(|w| w[0].direction == w[1].direction && w[0].converged && w[1].converged)
        .filter_map(|w| {
            let dx = (w[1].x - w[0].x).abs();
            let dy = (w[1].y - w[0].y).abs();
            let big = dx > criteria.relative * w[0].x.max(w[1].x) && dx > criteria.gain * dy;
            big.then(|| Jump {
                direction: w[0].direction,
                y_before: w[0].y,
                y_after: w[1].y,
                x_before: w[0].x,
                x_after: w[1].x,
            })
        })
        .collect()
}

/// Uniform ramp 0, step, 2·step, … up to and including `y_max`.
pub fn uniform_ramp(y_max: f64, step: f64) -> Vec<f64> {
    let n = (y_max / step).round() as usize;
    (0..=n).map(|k| k as f64 * step).collect()
}
