use thiserror::Error;

/// Errors raised by the solvers, the sweep engine and the file front end.
#[derive(Debug, Error)]
pub enum Error {
    #[error("steady state did not converge (best residual {residual:.3e})")]
    NonConvergence { residual: f64 },

    #[error("steady state leaves the physical set by {violation:.3e} (residual {residual:.3e})")]
    Unphysical { residual: f64, violation: f64 },

    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },

    #[error("curve tracing stopped at x = {x}: {source}")]
    Trace {
        x: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("medium propagation failed at zeta = {zeta}: {source}")]
    Propagation {
        zeta: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("ring fixed point did not converge (residual {residual:.3e})")]
    RingFixedPoint { residual: f64 },

    #[error("y_in = {y} lies outside the traced range [{min}, {max}]")]
    OutOfRange { y: f64, min: f64, max: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown preset `{name}`; valid presets: {valid}")]
    UnknownPreset { name: String, valid: String },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of a numerical solver (as opposed to bad input or I/O).
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. }
                | Error::Unphysical { .. }
                | Error::StepUnderflow { .. }
                | Error::Trace { .. }
                | Error::Propagation { .. }
                | Error::RingFixedPoint { .. }
        )
    }

    /// True for configuration / validation failures.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter(_)
                | Error::UnknownPreset { .. }
                | Error::Config(_)
                | Error::OutOfRange { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
