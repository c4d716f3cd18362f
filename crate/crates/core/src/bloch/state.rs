use nalgebra::SVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Real 8-vector layout of a [`DensityState`]:
/// `[d21, d23, Re ρ21, Im ρ21, Re ρ23, Im ρ23, Re ρ31, Im ρ31]`.
pub type StateVector = SVector<f64, 8>;

/// Tolerance used for the physical-state checks.
pub const PHYSICAL_TOL: f64 = 1e-8;

/// Atomic rates, near dipole-dipole (NDD) parameters and laser detunings.
///
/// All rates and frequencies are in units of the |2⟩→|1⟩ decay rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AtomParams {
    pub gamma21: f64,
    pub gamma23: f64,
    /// Relaxation between |3⟩ and |1⟩. Enters the population equations as a
    /// symmetric exchange term and damps the ground-state coherence ρ31.
    pub gamma31: f64,
    pub gamma_d21: f64,
    pub gamma_d23: f64,
    pub eps_p: f64,
    pub eps_c: f64,
    pub delta_p: f64,
    pub delta_c: f64,
}

/// Ground-coherence relaxation used by the figure presets and as the default.
pub const DEFAULT_GAMMA31: f64 = 0.3;

impl Default for AtomParams {
    fn default() -> Self {
        Self {
            gamma21: 1.0,
            gamma23: 1.0,
            gamma31: DEFAULT_GAMMA31,
            gamma_d21: 0.0,
            gamma_d23: 0.0,
            eps_p: 0.0,
            eps_c: 0.0,
            delta_p: 0.0,
            delta_c: 0.0,
        }
    }
}

impl AtomParams {
    /// Two-level reduction: γ23 = γ31 = 0, NDD off, resonant probe.
    pub fn two_level() -> Self {
        Self {
            gamma21: 1.0,
            gamma23: 0.0,
            gamma31: 0.0,
            ..Self::ndd_free()
        }
    }

    /// Default rates with every NDD parameter and detuning set to zero.
    pub fn ndd_free() -> Self {
        Self {
            gamma_d21: 0.0,
            gamma_d23: 0.0,
            eps_p: 0.0,
            eps_c: 0.0,
            ..Self::default()
        }
    }

    /// Coherence damping γ = ½(γ21 + γ23 + γ31).
    pub fn gamma(&self) -> f64 {
        0.5 * (self.gamma21 + self.gamma23 + self.gamma31)
    }

    pub fn has_ndd(&self) -> bool {
        self.eps_p != 0.0 || self.eps_c != 0.0 || self.gamma_d21 != 0.0 || self.gamma_d23 != 0.0
    }

    /// Copy with the NDD parameters scaled by `s` (continuation parameter).
    pub fn with_ndd_scaled(&self, s: f64) -> Self {
        Self {
            gamma_d21: s * self.gamma_d21,
            gamma_d23: s * self.gamma_d23,
            eps_p: s * self.eps_p,
            eps_c: s * self.eps_c,
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("gamma21", self.gamma21),
            ("gamma23", self.gamma23),
            ("gamma31", self.gamma31),
            ("gamma_d21", self.gamma_d21),
            ("gamma_d23", self.gamma_d23),
            ("eps_p", self.eps_p),
            ("eps_c", self.eps_c),
            ("delta_p", self.delta_p),
            ("delta_c", self.delta_c),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be finite, got {v}")));
            }
        }
        for (name, v) in &fields[..5] {
            if *v < 0.0 {
                return Err(Error::InvalidParameter(format!("{name} must be >= 0, got {v}")));
            }
        }
        Ok(())
    }
}

/// Probe and coupling Rabi frequencies Ω = 2με.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Drive {
    pub omega_p: Complex64,
    pub omega_c: Complex64,
}

impl Drive {
    pub fn new(omega_p: Complex64, omega_c: Complex64) -> Self {
        Self { omega_p, omega_c }
    }

    /// Real probe and coupling amplitudes.
    pub fn real(omega_p: f64, omega_c: f64) -> Self {
        Self::new(Complex64::new(omega_p, 0.0), Complex64::new(omega_c, 0.0))
    }

    pub fn off() -> Self {
        Self::real(0.0, 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.omega_p.is_finite() && self.omega_c.is_finite()
    }
}

/// Trace-eliminated density matrix: two population differences and the three
/// upper coherences. Lower coherences are the conjugates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityState {
    /// ρ22 − ρ11
    pub d21: f64,
    /// ρ22 − ρ33
    pub d23: f64,
    pub rho21: Complex64,
    pub rho23: Complex64,
    pub rho31: Complex64,
}

impl Default for DensityState {
    fn default() -> Self {
        Self::ground()
    }
}

impl DensityState {
    /// All population in |1⟩.
    pub fn ground() -> Self {
        Self {
            d21: -1.0,
            d23: 0.0,
            rho21: Complex64::new(0.0, 0.0),
            rho23: Complex64::new(0.0, 0.0),
            rho31: Complex64::new(0.0, 0.0),
        }
    }

    /// All population in |2⟩.
    pub fn excited() -> Self {
        Self {
            d21: 1.0,
            d23: 1.0,
            ..Self::ground()
        }
    }

    /// State with the given populations and no coherences.
    pub fn from_populations(rho11: f64, rho22: f64, rho33: f64) -> Self {
        Self {
            d21: rho22 - rho11,
            d23: rho22 - rho33,
            ..Self::ground()
        }
    }

    pub fn rho22(&self) -> f64 {
        (1.0 + self.d21 + self.d23) / 3.0
    }

    pub fn rho11(&self) -> f64 {
        self.rho22() - self.d21
    }

    pub fn rho33(&self) -> f64 {
        self.rho22() - self.d23
    }

    /// `[ρ11, ρ22, ρ33]`
    pub fn populations(&self) -> [f64; 3] {
        [self.rho11(), self.rho22(), self.rho33()]
    }

    pub fn to_vector(&self) -> StateVector {
        StateVector::from([
            self.d21,
            self.d23,
            self.rho21.re,
            self.rho21.im,
            self.rho23.re,
            self.rho23.im,
            self.rho31.re,
            self.rho31.im,
        ])
    }

    pub fn from_vector(v: &StateVector) -> Self {
        Self {
            d21: v[0],
            d23: v[1],
            rho21: Complex64::new(v[2], v[3]),
            rho23: Complex64::new(v[4], v[5]),
            rho31: Complex64::new(v[6], v[7]),
        }
    }

    /// Largest component-wise difference to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.to_vector() - other.to_vector()).amax()
    }

    pub fn is_finite(&self) -> bool {
        self.to_vector().iter().all(|v| v.is_finite())
    }

    /// Distance outside the physical set: how far a population leaves
    /// `[0, 1]` or a coherence exceeds 0.5. Zero for physical states,
    /// infinite for non-finite ones.
    pub fn physical_violation(&self) -> f64 {
        if !self.is_finite() {
            return f64::INFINITY;
        }
        let pops = self.populations().iter().map(|&p| (-p).max(p - 1.0)).fold(0.0, f64::max);
        let coh = [self.rho21, self.rho23, self.rho31]
            .iter()
            .map(|c| c.norm() - 0.5)
            .fold(0.0, f64::max);
        pops.max(coh)
    }

    /// Populations in `[-tol, 1 + tol]` and coherences bounded by `0.5 + tol`.
    pub fn is_physical(&self, tol: f64) -> bool {
        self.physical_violation() <= tol
    }
}
