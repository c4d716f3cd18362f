//! Figure presets and parallel parameter sweeps over the curve tracer.

mod presets;
mod run;
mod spec;

pub use presets::{figure_preset, COOPERATIVITY, PRESET_NAMES};
pub use run::{run_sweep, PointRecord, Provenance, SweepResult};
pub use spec::{Axis, GridSpec, Outputs, ParamPath, PointParams, SweepSpec, DEFAULT_MAX_POINTS};
