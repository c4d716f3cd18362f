//! Atomic dynamics of the three-level Λ medium: right-hand side, time
//! integration, nonlinear steady state and weak-probe linear response.

mod integrate;
mod rhs;
mod state;
mod steady;
mod weak_probe;

pub use integrate::{integrate, Tolerances};
pub use rhs::{bloch_rhs, jacobian, probe_sensitivity, rhs_vector, Jacobian};
pub use state::{AtomParams, DensityState, Drive, StateVector, DEFAULT_GAMMA31, PHYSICAL_TOL};
pub use steady::{
    probe_derivative, steady_state, steady_state_with, SteadyOptions, SteadySolution, STEADY_TOL,
};
pub use weak_probe::{absorption, weak_probe_coherence};
