//! Parameter families of the published input/output figures.
//!
//! All presets use C = 150, γ21 = γ23 = 1, γ31 = 0.3, Δ_P = 0, θ = 0 unless
//! stated. Figure 5 is described in the text with ε_P = ε_C = 1.0 while
//! its caption gives 2.0; `fig5a`/`fig5b` follow the text, and the caption
//! value is one `eps` override away.

use num_complex::Complex64;

use crate::bloch::AtomParams;
use crate::cavity::CavityParams;
use crate::error::{Error, Result};

use super::spec::{Axis, GridSpec, Outputs, ParamPath, PointParams, SweepSpec, DEFAULT_MAX_POINTS};

pub const PRESET_NAMES: [&str; 8] = ["fig3a", "fig3b", "fig4a", "fig4b", "fig5a", "fig5b", "fig6a", "fig6b"];

pub const COOPERATIVITY: f64 = 150.0;

fn base(atom: AtomParams, omega_c: f64) -> PointParams {
    PointParams {
        atom,
        omega_c: Complex64::new(omega_c, 0.0),
        cavity: CavityParams::mean_field(COOPERATIVITY),
        grid: GridSpec::default(),
    }
}

fn ndd(eps: f64, gamma_d: f64) -> AtomParams {
    AtomParams {
        eps_p: eps,
        eps_c: eps,
        gamma_d21: gamma_d,
        gamma_d23: gamma_d,
        ..AtomParams::default()
    }
}

fn axis(param: ParamPath, values: &[f64]) -> Vec<Axis> {
    vec![Axis {
        param,
        values: values.to_vec(),
    }]
}

const OMEGA_C_WEAK: [f64; 5] = [0.05, 0.1, 0.2, 0.5, 1.0];
const OMEGA_C_STRONG: [f64; 5] = [1.0, 3.0, 5.0, 7.0, 10.0];
const EPS_VALUES: [f64; 5] = [0.1, 0.5, 1.0, 1.5, 2.0];

pub fn figure_preset(name: &str) -> Result<SweepSpec> {
    let (base, axes) = match name {
        "fig3a" => (base(AtomParams::default(), 1.0), axis(ParamPath::OmegaC, &OMEGA_C_WEAK)),
        "fig3b" => (
            base(
                AtomParams {
                    delta_c: 1.0,
                    ..AtomParams::default()
                },
                1.0,
            ),
            axis(ParamPath::OmegaC, &OMEGA_C_STRONG),
        ),
        "fig4a" => (base(AtomParams::default(), 2.0), axis(ParamPath::Eps, &EPS_VALUES)),
        "fig4b" => (base(AtomParams::default(), 3.0), axis(ParamPath::Eps, &EPS_VALUES)),
        "fig5a" => (base(ndd(1.0, 0.0), 1.0), axis(ParamPath::OmegaC, &OMEGA_C_STRONG)),
        "fig5b" => (base(ndd(1.0, 1.5), 1.0), axis(ParamPath::OmegaC, &OMEGA_C_STRONG)),
        "fig6a" => (base(ndd(2.0, 0.0), 1.0), axis(ParamPath::OmegaC, &OMEGA_C_STRONG)),
        "fig6b" => (base(ndd(2.0, 3.0), 1.0), axis(ParamPath::OmegaC, &OMEGA_C_STRONG)),
        _ => {
            return Err(Error::UnknownPreset {
                name: name.to_string(),
                valid: PRESET_NAMES.join(", "),
            })
        }
    };
    Ok(SweepSpec {
        base,
        axes,
        outputs: Outputs::default(),
        max_points: DEFAULT_MAX_POINTS,
    })
}
