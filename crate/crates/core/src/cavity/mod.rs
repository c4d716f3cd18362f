//! Cavity input/output relations, curve tracing and hysteresis scans.

mod curve;
mod hysteresis;
mod params;
mod propagate;
mod state_equation;

pub use curve::{
    count_solutions, linear_grid, trace_ob_curve, Branch, CurvePoint, ObCurve, Threshold, TurningKind,
    TurningPoint, BISECTION_FRACTION, DEGENERATE_SLOPE_TOL, MIN_GRID_POINTS,
};
pub use hysteresis::{
    hysteresis_scan, hysteresis_scan_with, jumps, uniform_ramp, Direction, Jump, JumpCriteria, ScanOptions,
    ScanPoint,
};
pub use params::{CavityMode, CavityParams};
pub use propagate::{propagate_medium, propagate_profile, ring_fixed_point, ring_fixed_point_at, ring_map, FieldProfile, RingFixedPoint};
pub use state_equation::{evaluate, state_equation, weak_field_ratio, StatePoint};
