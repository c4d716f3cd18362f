//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use lambda_ob::bloch::{
    integrate, steady_state, AtomParams, DensityState, Drive, Tolerances,
};
use num_complex::Complex64;
use rand::Rng;

/// Rates in [0, 2], detunings in [-5, 5], NDD in [0, 2].
pub fn random_atom<R: Rng>(rng: &mut R) -> AtomParams {
    AtomParams {
        gamma21: rng.random_range(0.0..2.0),
        gamma23: rng.random_range(0.0..2.0),
        gamma31: rng.random_range(0.0..2.0),
        gamma_d21: rng.random_range(0.0..2.0),
        gamma_d23: rng.random_range(0.0..2.0),
        eps_p: rng.random_range(0.0..2.0),
        eps_c: rng.random_range(0.0..2.0),
        delta_p: rng.random_range(-5.0..5.0),
        delta_c: rng.random_range(-5.0..5.0),
    }
}

/// Real Rabi frequencies in [0, 5].
pub fn random_drive<R: Rng>(rng: &mut R) -> Drive {
    Drive::real(rng.random_range(0.0..5.0), rng.random_range(0.0..5.0))
}

pub const SETTLE_T: f64 = 180.0;
pub const FINAL_T: f64 = 200.0;
/// A trajectory that still moves by more than this between `SETTLE_T` and
/// `FINAL_T` is treated as oscillatory and excluded.
pub const SETTLE_TOL: f64 = 1e-8;

pub const INTEGRATION_TOL: Tolerances = Tolerances {
    rtol: 1e-10,
    atol: 1e-12,
};

#[derive(Debug, Default)]
pub struct CrossCheck {
    pub compared: usize,
    /// Trajectory not settled by `FINAL_T`.
    pub oscillatory: usize,
    /// Steady-state solver reported a failure.
    pub unsolved: usize,
    pub worst: f64,
    /// (draw index, difference) above the tolerance.
    pub mismatches: Vec<(usize, f64)>,
}

/// Long-time integration from the ground state against the Newton steady
/// state, for each (atom, drive) draw.
pub fn cross_validate(draws: &[(AtomParams, Drive)], tol: f64) -> CrossCheck {
    let mut out = CrossCheck::default();
    for (k, (atom, drive)) in draws.iter().enumerate() {
        let Some(s200) = settled_state(atom, drive) else {
            out.oscillatory += 1;
            continue;
        };
        let Ok(sol) = steady_state(atom, drive, None) else {
            out.unsolved += 1;
            continue;
        };
        out.compared += 1;
        let d = s200.max_abs_diff(&sol.state);
        out.worst = out.worst.max(d);
        if d > tol {
            out.mismatches.push((k, d));
        }
    }
    out
}

/// State at `FINAL_T`, or `None` when the trajectory has not settled.
pub fn settled_state(atom: &AtomParams, drive: &Drive) -> Option<DensityState> {
    let first = integrate(&DensityState::ground(), atom, drive, SETTLE_T, INTEGRATION_TOL).ok()?;
    let s180 = first.last()?.1;
    let second = integrate(&s180, atom, drive, FINAL_T - SETTLE_T, INTEGRATION_TOL).ok()?;
    let s200 = second.last()?.1;
    (s200.max_abs_diff(&s180) <= SETTLE_TOL).then_some(s200)
}

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Worst relative difference between the z-resolved ring steady state and
/// the mean-field state equation, compared at equal intracavity field.
pub fn mean_field_mismatch(
    atom: &AtomParams,
    omega_c: Complex64,
    c_coop: f64,
    alpha_l: f64,
    xs: &[f64],
) -> lambda_ob::Result<f64> {
    use lambda_ob::cavity::{ring_fixed_point_at, state_equation, CavityParams};
    let ring = CavityParams::thin_medium(c_coop, alpha_l, 0.0, 32);
    let mf = CavityParams::mean_field(c_coop);
    let mut worst: f64 = 0.0;
    for &x in xs {
        let y_mf = state_equation(x, atom, omega_c, &mf)?;
        let fp = ring_fixed_point_at(Complex64::new(x, 0.0), atom, omega_c, &ring)?;
        let y_ring = fp.y_in / ring.t.sqrt();
        worst = worst.max((y_ring - y_mf).norm() / y_mf.norm());
    }
    Ok(worst)
}
