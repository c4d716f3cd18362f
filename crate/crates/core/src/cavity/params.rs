use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum CavityMode {
    /// Single algebraic state equation (uniform intracavity field).
    #[default]
    MeanField,
    /// Propagation through the medium plus the ring boundary condition.
    ZResolved,
}

/// Ring-cavity parameters.
///
/// In mean-field mode only `c`, `t` and `theta` matter. In z-resolved mode
/// the cavity is described by `t`, `theta` and `alpha_l`; its effective
/// cooperativity is `R·alpha_l/(2T)` and `c` is not read.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CavityParams {
    /// Cooperativity.
    pub c: f64,
    /// Mirror intensity transmittance, R = 1 − T.
    pub t: f64,
    /// Cavity detuning phase δ0 in radians.
    pub theta: f64,
    pub mode: CavityMode,
    pub alpha_l: f64,
    pub n_steps: usize,
}

impl Default for CavityParams {
    fn default() -> Self {
        Self {
            c: 150.0,
            t: 0.1,
            theta: 0.0,
            mode: CavityMode::MeanField,
            alpha_l: 0.0,
            n_steps: 32,
        }
    }
}

impl CavityParams {
    pub fn mean_field(c: f64) -> Self {
        Self {
            c,
            ..Self::default()
        }
    }

    /// z-resolved cavity whose mean-field limit has cooperativity `c`:
    /// T is chosen so that R·alpha_l/(2T) = c.
    pub fn thin_medium(c: f64, alpha_l: f64, theta: f64, n_steps: usize) -> Self {
        Self {
            c,
            t: alpha_l / (2.0 * c + alpha_l),
            theta,
            mode: CavityMode::ZResolved,
            alpha_l,
            n_steps,
        }
    }

    pub fn r(&self) -> f64 {
        1.0 - self.t
    }

    /// Mean-field detuning θ/T.
    pub fn theta_mf(&self) -> f64 {
        self.theta / self.t
    }

    pub fn effective_cooperativity(&self) -> f64 {
        match self.mode {
            CavityMode::MeanField => self.c,
            CavityMode::ZResolved => self.r() * self.alpha_l / (2.0 * self.t),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c >= 0.0 && self.c.is_finite()) {
            return Err(Error::InvalidParameter(format!("C must be >= 0, got {}", self.c)));
        }
        if !(self.t > 0.0 && self.t <= 1.0) {
            return Err(Error::InvalidParameter(format!("T must lie in (0, 1], got {}", self.t)));
        }
        if !self.theta.is_finite() {
            return Err(Error::InvalidParameter("theta must be finite".into()));
        }
        if self.mode == CavityMode::ZResolved {
            if !(self.alpha_l >= 0.0 && self.alpha_l.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "alpha_l must be >= 0, got {}",
                    self.alpha_l
                )));
            }
            if self.n_steps < 16 {
                return Err(Error::InvalidParameter(format!(
                    "n_steps must be >= 16, got {}",
                    self.n_steps
                )));
            }
        }
        Ok(())
    }
}
