//! Run configuration and file artifacts.

pub mod complex;
mod config;
mod writers;

pub use config::{DriveConfig, OutputConfig, RunConfig, ScanConfig, SpectrumConfig, SweepConfig};
pub use writers::{
    fmt_f64, point_curve_name, write_curve_csv, write_hysteresis_csv, write_json, write_point_curves,
    write_spectrum_csv, write_sweep_summary, CurveSidecar, SteadyReport,
};
