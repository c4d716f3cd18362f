//! Optical bistability and multistability of a three-level Λ-type EIT
//! medium with near dipole-dipole interaction inside a unidirectional ring
//! cavity.
//!
//! * [`bloch`]: density-matrix equations, steady state, weak-probe response.
//! * [`cavity`]: mean-field state equation, z-resolved ring map, curve
//!   tracing and hysteresis scans.
//! * [`sweep`]: figure presets and parallel parameter sweeps.
//! * [`io`]: run configuration and CSV/JSON writers.

pub mod bloch;
pub mod cavity;
pub mod error;
pub mod io;
pub mod par;
pub mod sweep;

pub use error::{Error, Result};
