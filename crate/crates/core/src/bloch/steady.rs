//! Steady state of the nonlinear Bloch equations.
//!
//! Damped Newton on the 8-dimensional real system with the analytic
//! Jacobian. Without NDD terms the equations are affine in the state, so the
//! NDD-free solution is exact after one Newton step; it seeds a continuation
//! that ramps (ε_p, ε_c, γ^D_21, γ^D_23) up to their target values. When
//! every schedule fails, Newton is restarted from |1⟩ and |3⟩, and as a
//! last resort the state is relaxed by time integration and the end point
//! polished with Newton.

use nalgebra::SVector;
use num_complex::Complex64;

use crate::error::{Error, Result};

use super::integrate::{integrate, Tolerances};
use super::rhs::{bloch_rhs, jacobian, probe_sensitivity, Jacobian};
use super::state::{AtomParams, DensityState, Drive, StateVector, PHYSICAL_TOL};

/// Residual (‖rhs‖∞, units of γ21) a returned steady state must satisfy.
pub const STEADY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy)]
pub struct SteadyOptions {
    /// Newton stops once ‖rhs‖∞ drops below this.
    pub target: f64,
    /// Largest residual accepted when Newton stalls at rounding level.
    pub accept: f64,
    pub max_iter: usize,
    /// Continuation schedules tried in order (number of NDD ramp stages).
    pub stages: [usize; 4],
    /// Length of the first relaxation interval (1/γ21); later rounds double it.
    pub relax_span: f64,
    pub relax_rounds: usize,
}

impl Default for SteadyOptions {
    fn default() -> Self {
        Self {
            target: 1e-13,
            accept: STEADY_TOL,
            max_iter: 60,
            stages: [1, 2, 4, 8],
            relax_span: 50.0,
            relax_rounds: 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadySolution {
    pub state: DensityState,
    /// ‖bloch_rhs(state)‖∞
    pub residual: f64,
    /// The stationary manifold is not a single point (level |3⟩ is
    /// dynamically isolated, or nothing drives the system with γ31 = 0).
    /// The returned state keeps the population of |3⟩ from the preparation.
    pub degenerate: bool,
}

/// Level |3⟩ is decoupled when nothing couples it or relaxes it.
fn level3_isolated(atom: &AtomParams, drive: &Drive) -> bool {
    atom.gamma23 == 0.0 && atom.gamma31 == 0.0 && drive.omega_c == Complex64::new(0.0, 0.0)
}

/// Residual/Jacobian of the stationarity conditions. For an isolated |3⟩
/// the d23 row and the ρ31 rows are replaced by conservation constraints.
struct Problem<'a> {
    atom: AtomParams,
    drive: &'a Drive,
    constraint: Option<(f64, Complex64)>,
}

impl Problem<'_> {
    fn residual(&self, v: &StateVector) -> StateVector {
        let s = DensityState::from_vector(v);
        let mut f = bloch_rhs(&s, &self.atom, self.drive).to_vector();
        if let Some((rho33, rho31)) = self.constraint {
            f[1] = s.rho33() - rho33;
            f[6] = s.rho31.re - rho31.re;
            f[7] = s.rho31.im - rho31.im;
        }
        f
    }

    fn jacobian(&self, v: &StateVector) -> Jacobian {
        let s = DensityState::from_vector(v);
        let mut j = jacobian(&s, &self.atom, self.drive);
        if self.constraint.is_some() {
            for r in [1, 6, 7] {
                j.row_mut(r).fill(0.0);
            }
            j[(1, 0)] = 1.0 / 3.0;
            j[(1, 1)] = -2.0 / 3.0;
            j[(6, 6)] = 1.0;
            j[(7, 7)] = 1.0;
        }
        j
    }
}

struct NewtonOutcome {
    v: StateVector,
    residual: f64,
    converged: bool,
}

fn newton(problem: &Problem, start: StateVector, opts: &SteadyOptions) -> NewtonOutcome {
    let mut v = start;
    let mut f = problem.residual(&v);
    let mut res = f.amax();
    let mut best = (v, res);
    // at least one step, so a converged seed is refined to the new drive
    // rather than accepted at the absolute tolerance
    for k in 0..opts.max_iter {
        if !res.is_finite() {
            break;
        }
        if res <= opts.target && k > 0 {
            return NewtonOutcome {
                v,
                residual: res,
                converged: true,
            };
        }
        let Some(step) = problem.jacobian(&v).lu().solve(&(-f)) else {
            break;
        };
        let norm0 = f.norm();
        let mut t = 1.0;
        let mut accepted = false;
        while t > 1.0 / 1024.0 {
            let trial = v + step * t;
            let ft = problem.residual(&trial);
            if ft.norm() < (1.0 - 1e-4 * t) * norm0 {
                v = trial;
                f = ft;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        res = f.amax();
        if res < best.1 {
            best = (v, res);
        }
        if !accepted || step.amax() * t <= 1e-15 * (1.0 + v.amax()) {
            break;
        }
    }
    let (v, residual) = best;
    NewtonOutcome {
        v,
        residual,
        converged: residual <= opts.accept,
    }
}

/// Steady state reached from `init` (warm start) or from the NDD-free
/// solution via continuation in the NDD strength.
pub fn steady_state(
    atom: &AtomParams,
    drive: &Drive,
    init: Option<&DensityState>,
) -> Result<SteadySolution> {
    steady_state_with(atom, drive, init, &SteadyOptions::default())
}

pub fn steady_state_with(
    atom: &AtomParams,
    drive: &Drive,
    init: Option<&DensityState>,
    opts: &SteadyOptions,
) -> Result<SteadySolution> {
    if !drive.is_finite() {
        return Err(Error::InvalidParameter("drive must be finite".into()));
    }
    let zero = Complex64::new(0.0, 0.0);
    let undriven = drive.omega_p == zero && drive.omega_c == zero;
    if atom.gamma31 == 0.0 && undriven {
        return Ok(SteadySolution {
            state: DensityState::ground(),
            residual: bloch_rhs(&DensityState::ground(), atom, drive).to_vector().amax(),
            degenerate: true,
        });
    }

    let isolated = level3_isolated(atom, drive);
    let constraint = isolated.then(|| {
        init.map(|s| (s.rho33(), s.rho31)).unwrap_or((0.0, zero))
    });
    // Converged roots outside the physical set are remembered so that the
    // failure can be reported as such once every schedule is exhausted.
    let rejected = std::cell::Cell::new(None::<(f64, f64)>);
    let finish = |v: StateVector| -> Option<SteadySolution> {
        let state = DensityState::from_vector(&v);
        let residual = bloch_rhs(&state, atom, drive).to_vector().amax();
        if residual > opts.accept {
            return None;
        }
        let violation = state.physical_violation();
        if violation > PHYSICAL_TOL {
            if rejected.get().is_none_or(|(_, w)| violation < w) {
                rejected.set(Some((residual, violation)));
            }
            return None;
        }
        Some(SteadySolution {
            state,
            residual,
            degenerate: isolated,
        })
    };
    let failure = |best: f64| match rejected.get() {
        Some((residual, violation)) => Error::Unphysical { residual, violation },
        None => Error::NonConvergence { residual: best },
    };

    let mut best = f64::INFINITY;
    if let Some(s0) = init {
        let problem = Problem {
            atom: *atom,
            drive,
            constraint,
        };
        let out = newton(&problem, s0.to_vector(), opts);
        best = best.min(out.residual);
        if out.converged {
            if let Some(sol) = finish(out.v) {
                return Ok(sol);
            }
        }
    }

    // NDD-free problem is affine: Newton converges in one step.
    let base = Problem {
        atom: atom.with_ndd_scaled(0.0),
        drive,
        constraint,
    };
    let linear = newton(&base, DensityState::ground().to_vector(), opts);
    if !linear.converged {
        best = best.min(linear.residual);
        return Err(Error::NonConvergence { residual: best });
    }
    if !atom.has_ndd() {
        return finish(linear.v).ok_or_else(|| failure(best.min(linear.residual)));
    }

    // `best` tracks the residual of the full problem only
    let full_residual = |v: &StateVector| bloch_rhs(&DensityState::from_vector(v), atom, drive).to_vector().amax();
    best = best.min(full_residual(&linear.v));
    for &n in &opts.stages {
        let mut v = linear.v;
        let mut ok = true;
        for k in 1..=n {
            let problem = Problem {
                atom: atom.with_ndd_scaled(k as f64 / n as f64),
                drive,
                constraint,
            };
            let out = newton(&problem, v, opts);
            if !out.converged {
                best = best.min(full_residual(&out.v));
                ok = false;
                break;
            }
            v = out.v;
        }
        if ok {
            if let Some(sol) = finish(v) {
                return Ok(sol);
            }
        }
    }

    // Near dark-state degeneracies Newton stalls next to the NDD-free seed;
    // the two ground levels are then the better starting points.
    let full = Problem {
        atom: *atom,
        drive,
        constraint,
    };
    for seed in [DensityState::ground(), DensityState::from_populations(0.0, 0.0, 1.0)] {
        let out = newton(&full, seed.to_vector(), opts);
        best = best.min(full_residual(&out.v));
        if out.converged {
            if let Some(sol) = finish(out.v) {
                return Ok(sol);
            }
        }
    }
    let relax_tol = Tolerances {
        rtol: 1e-9,
        atol: 1e-11,
    };
    let mut s = init.copied().unwrap_or_else(DensityState::ground);
    let mut span = opts.relax_span;
    for _ in 0..opts.relax_rounds {
        let Some(end) = integrate(&s, atom, drive, span, relax_tol)
            .ok()
            .and_then(|traj| traj.last().map(|p| p.1))
        else {
            break;
        };
        s = end;
        let out = newton(&full, s.to_vector(), opts);
        best = best.min(full_residual(&out.v));
        if out.converged {
            if let Some(sol) = finish(out.v) {
                return Ok(sol);
            }
        }
        span *= 2.0;
    }
    Err(failure(best))
}

/// d(state)/d(Re Ω_P) along the steady-state manifold, from the implicit
/// function theorem: J · ds/dx = −∂rhs/∂x.
pub fn probe_derivative(
    solution: &SteadySolution,
    atom: &AtomParams,
    drive: &Drive,
) -> Option<DensityState> {
    let s = &solution.state;
    let mut j = jacobian(s, atom, drive);
    let mut b: SVector<f64, 8> = -probe_sensitivity(s, atom, drive);
    if level3_isolated(atom, drive) {
        for r in [1, 6, 7] {
            j.row_mut(r).fill(0.0);
            b[r] = 0.0;
        }
        j[(1, 0)] = 1.0 / 3.0;
        j[(1, 1)] = -2.0 / 3.0;
        j[(6, 6)] = 1.0;
        j[(7, 7)] = 1.0;
    }
    j.lu().solve(&b).map(|v| DensityState::from_vector(&v))
}
