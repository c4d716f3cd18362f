//! Mean-field cavity state equation
//!
//! y = x(1 + iθ/T) + 4iγC·ρ21(x)
//!
//! x is the (real) intracavity probe Rabi frequency, which is also the
//! normalized transmitted field; y is the normalized input field. In the
//! two-level limit this reduces to y = x(1 + 2C/(1 + 2x²)).

use num_complex::Complex64;

use crate::bloch::{probe_derivative, steady_state, AtomParams, DensityState, Drive};
use crate::error::{Error, Result};

use super::params::{CavityMode, CavityParams};

/// One evaluation of the state equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatePoint {
    pub x: f64,
    pub y: Complex64,
    /// d|y|/dx along the steady-state branch.
    pub slope: f64,
    pub state: DensityState,
}

impl StatePoint {
    pub fn y_mag(&self) -> f64 {
        self.y.norm()
    }
}

fn check_mean_field(cav: &CavityParams) -> Result<()> {
    if cav.mode != CavityMode::MeanField {
        return Err(Error::InvalidParameter(
            "the state equation requires mean-field mode".into(),
        ));
    }
    Ok(())
}

/// Input field y for intracavity field x.
pub fn state_equation(
    x: f64,
    atom: &AtomParams,
    omega_c: Complex64,
    cav: &CavityParams,
) -> Result<Complex64> {
    Ok(evaluate(x, atom, omega_c, cav, None)?.y)
}

/// State equation together with its x-derivative and the atomic state, warm
/// started from `init` when given.
pub fn evaluate(
    x: f64,
    atom: &AtomParams,
    omega_c: Complex64,
    cav: &CavityParams,
    init: Option<&DensityState>,
) -> Result<StatePoint> {
    check_mean_field(cav)?;
    if !(x >= 0.0 && x.is_finite()) {
        return Err(Error::InvalidParameter(format!("x must be >= 0, got {x}")));
    }
    let drive = Drive::new(Complex64::new(x, 0.0), omega_c);
    let sol = steady_state(atom, &drive, init)?;
    let i = Complex64::new(0.0, 1.0);
    let detuning = Complex64::new(1.0, cav.theta_mf());
    let coupling = 4.0 * atom.gamma() * cav.c * i;
    let y = x * detuning + coupling * sol.state.rho21;

    let slope = match probe_derivative(&sol, atom, &drive) {
        Some(ds) => {
            let dy = detuning + coupling * ds.rho21;
            let mag = y.norm();
            if mag > 0.0 {
                (y.conj() * dy).re / mag
            } else {
                dy.norm()
            }
        }
        None => f64::NAN,
    };
    Ok(StatePoint {
        x,
        y,
        slope,
        state: sol.state,
    })
}

/// lim_{x→0} y/x = 1 + iθ/T + 2iγC·r, with r the weak-probe response.
pub fn weak_field_ratio(atom: &AtomParams, omega_c: Complex64, cav: &CavityParams) -> Complex64 {
    let r = crate::bloch::weak_probe_coherence(atom, omega_c);
    Complex64::new(1.0, cav.theta_mf()) + Complex64::new(0.0, 2.0 * atom.gamma() * cav.c) * r
}
