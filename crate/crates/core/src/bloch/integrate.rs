//! Adaptive Dormand–Prince 5(4) integration of the Bloch equations.

use crate::error::{Error, Result};

use super::rhs::rhs_vector;
use super::state::{AtomParams, DensityState, Drive, StateVector};

#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rtol: 1e-8,
            atol: 1e-10,
        }
    }
}

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth minus fourth order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const MAX_STEPS: usize = 5_000_000;

/// Integrates from `t = 0` to `t_end`, returning every accepted step
/// (including the initial point).
pub fn integrate(
    state0: &DensityState,
    atom: &AtomParams,
    drive: &Drive,
    t_end: f64,
    tol: Tolerances,
) -> Result<Vec<(f64, DensityState)>> {
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidParameter(format!("t_end must be > 0, got {t_end}")));
    }
    for (name, v) in [("rtol", tol.rtol), ("atol", tol.atol)] {
        if !(v > 0.0 && v <= 1e-2) {
            return Err(Error::InvalidParameter(format!("{name} must lie in (0, 1e-2], got {v}")));
        }
    }
    let f = |y: &StateVector| rhs_vector(y, atom, drive);

    let mut t = 0.0;
    let mut y = state0.to_vector();
    let mut k1 = f(&y);
    let mut out = vec![(t, *state0)];

    let scale0 = y.abs() * tol.rtol + StateVector::repeat(tol.atol);
    let d0 = k1.component_div(&scale0).amax();
    let mut h = if d0 > 1e-12 { 0.01 / d0 } else { 1e-3 };
    h = h.min(t_end);
    let h_min = 1e-14 * t_end.max(1.0);

    for _ in 0..MAX_STEPS {
        if t >= t_end {
            return Ok(out);
        }
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }
        let k2 = f(&(y + k1 * (h * A21)));
        let k3 = f(&(y + (k1 * A31 + k2 * A32) * h));
        let k4 = f(&(y + (k1 * A41 + k2 * A42 + k3 * A43) * h));
        let k5 = f(&(y + (k1 * A51 + k2 * A52 + k3 * A53 + k4 * A54) * h));
        let k6 = f(&(y + (k1 * A61 + k2 * A62 + k3 * A63 + k4 * A64 + k5 * A65) * h));
        let y_new = y + (k1 * B1 + k3 * B3 + k4 * B4 + k5 * B5 + k6 * B6) * h;
        let k7 = f(&y_new);
        let err = (k1 * E1 + k3 * E3 + k4 * E4 + k5 * E5 + k6 * E6 + k7 * E7) * h;

        let scale = y.abs().sup(&y_new.abs()) * tol.rtol + StateVector::repeat(tol.atol);
        let err_norm = (err.component_div(&scale).norm_squared() / 8.0).sqrt();

        if err_norm <= 1.0 {
            t = if last { t_end } else { t + h };
            y = y_new;
            k1 = k7;
            out.push((t, DensityState::from_vector(&y)));
            let factor = if err_norm == 0.0 {
                5.0
            } else {
                (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0)
            };
            h *= factor;
        } else {
            let factor = if err_norm.is_finite() {
                (0.9 * err_norm.powf(-0.2)).clamp(0.1, 0.9)
            } else {
                0.1
            };
            h *= factor;
            if h < h_min {
                return Err(Error::StepUnderflow { t });
            }
        }
    }
    Err(Error::StepUnderflow { t })
}
