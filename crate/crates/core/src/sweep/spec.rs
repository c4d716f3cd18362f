use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bloch::AtomParams;
use crate::cavity::{linear_grid, CavityParams, MIN_GRID_POINTS};
use crate::error::{Error, Result};

/// Default bound on the number of grid points in one sweep.
pub const DEFAULT_MAX_POINTS: usize = 100_000;

/// Parameter a sweep axis can vary. `GammaD` and `Eps` set both transitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamPath {
    Gamma21,
    Gamma23,
    Gamma31,
    GammaD21,
    GammaD23,
    GammaD,
    EpsP,
    EpsC,
    Eps,
    DeltaP,
    DeltaC,
    /// Magnitude of the coupling Rabi frequency; its phase is kept.
    OmegaC,
    C,
    T,
    Theta,
    AlphaL,
}

impl ParamPath {
    pub const ALL: [ParamPath; 16] = [
        ParamPath::Gamma21,
        ParamPath::Gamma23,
        ParamPath::Gamma31,
        ParamPath::GammaD21,
        ParamPath::GammaD23,
        ParamPath::GammaD,
        ParamPath::EpsP,
        ParamPath::EpsC,
        ParamPath::Eps,
        ParamPath::DeltaP,
        ParamPath::DeltaC,
        ParamPath::OmegaC,
        ParamPath::C,
        ParamPath::T,
        ParamPath::Theta,
        ParamPath::AlphaL,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ParamPath::Gamma21 => "gamma21",
            ParamPath::Gamma23 => "gamma23",
            ParamPath::Gamma31 => "gamma31",
            ParamPath::GammaD21 => "gamma_d21",
            ParamPath::GammaD23 => "gamma_d23",
            ParamPath::GammaD => "gamma_d",
            ParamPath::EpsP => "eps_p",
            ParamPath::EpsC => "eps_c",
            ParamPath::Eps => "eps",
            ParamPath::DeltaP => "delta_p",
            ParamPath::DeltaC => "delta_c",
            ParamPath::OmegaC => "omega_c",
            ParamPath::C => "c",
            ParamPath::T => "t",
            ParamPath::Theta => "theta",
            ParamPath::AlphaL => "alpha_l",
        }
    }

    pub fn apply(self, point: &mut PointParams, v: f64) {
        let a = &mut point.atom;
        match self {
            ParamPath::Gamma21 => a.gamma21 = v,
            ParamPath::Gamma23 => a.gamma23 = v,
            ParamPath::Gamma31 => a.gamma31 = v,
            ParamPath::GammaD21 => a.gamma_d21 = v,
            ParamPath::GammaD23 => a.gamma_d23 = v,
            ParamPath::GammaD => {
                a.gamma_d21 = v;
                a.gamma_d23 = v;
            }
            ParamPath::EpsP => a.eps_p = v,
            ParamPath::EpsC => a.eps_c = v,
            ParamPath::Eps => {
                a.eps_p = v;
                a.eps_c = v;
            }
            ParamPath::DeltaP => a.delta_p = v,
            ParamPath::DeltaC => a.delta_c = v,
            ParamPath::OmegaC => {
                let phase = point.omega_c.arg();
                point.omega_c = Complex64::from_polar(v, phase);
            }
            ParamPath::C => point.cavity.c = v,
            ParamPath::T => point.cavity.t = v,
            ParamPath::Theta => point.cavity.theta = v,
            ParamPath::AlphaL => point.cavity.alpha_l = v,
        }
    }
}

impl fmt::Display for ParamPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ParamPath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ParamPath::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                let valid: Vec<_> = ParamPath::ALL.iter().map(|p| p.name()).collect();
                Error::Config(format!("unknown parameter `{s}`; valid: {}", valid.join(", ")))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub count: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            x_min: 0.0,
            x_max: 40.0,
            count: 2001,
        }
    }
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        linear_grid(self.x_min, self.x_max, self.count)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x_min >= 0.0 && self.x_max > self.x_min && self.x_max.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "x grid must satisfy 0 <= x_min < x_max, got [{}, {}]",
                self.x_min, self.x_max
            )));
        }
        if self.count < MIN_GRID_POINTS {
            return Err(Error::InvalidParameter(format!(
                "x grid needs at least {MIN_GRID_POINTS} points, got {}",
                self.count
            )));
        }
        Ok(())
    }
}

/// Full parameter set of one curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PointParams {
    pub atom: AtomParams,
    #[serde(with = "crate::io::complex")]
    pub omega_c: Complex64,
    pub cavity: CavityParams,
    pub grid: GridSpec,
}

impl Default for PointParams {
    fn default() -> Self {
        Self {
            atom: AtomParams::default(),
            omega_c: Complex64::new(1.0, 0.0),
            cavity: CavityParams::default(),
            grid: GridSpec::default(),
        }
    }
}

impl PointParams {
    pub fn validate(&self) -> Result<()> {
        self.atom.validate()?;
        self.cavity.validate()?;
        self.grid.validate()?;
        if !(self.omega_c.re.is_finite() && self.omega_c.im.is_finite()) {
            return Err(Error::InvalidParameter("omega_c must be finite".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub param: ParamPath,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Outputs {
    /// Keep the traced curve of every point.
    pub curve: bool,
    pub thresholds: bool,
    /// Largest number of coexisting solutions along the curve.
    pub multiplicity: bool,
}

impl Default for Outputs {
    fn default() -> Self {
        Self {
            curve: false,
            thresholds: true,
            multiplicity: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSpec {
    pub base: PointParams,
    /// Cartesian product, first axis slowest.
    pub axes: Vec<Axis>,
    pub outputs: Outputs,
    pub max_points: usize,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            base: PointParams::default(),
            axes: Vec::new(),
            outputs: Outputs::default(),
            max_points: DEFAULT_MAX_POINTS,
        }
    }
}

impl SweepSpec {
    pub fn point_count(&self) -> usize {
        self.axes
            .iter()
            .map(|a| a.values.len())
            .try_fold(1usize, |acc, n| acc.checked_mul(n))
            .unwrap_or(usize::MAX)
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        for (k, axis) in self.axes.iter().enumerate() {
            if axis.values.is_empty() {
                return Err(Error::Config(format!("axis {} ({}) has no values", k, axis.param)));
            }
            if axis.values.iter().any(|v| !v.is_finite()) {
                return Err(Error::Config(format!("axis {} ({}) has a non-finite value", k, axis.param)));
            }
            if self.axes[..k].iter().any(|a| a.param == axis.param) {
                return Err(Error::Config(format!("parameter {} appears on two axes", axis.param)));
            }
        }
        let n = self.point_count();
        if n > self.max_points {
            return Err(Error::Config(format!(
                "sweep has {n} points, above the cap of {}",
                self.max_points
            )));
        }
        Ok(())
    }

    /// Row-major multi-index of point `flat`.
    pub fn index_of(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.axes.len()];
        for (k, axis) in self.axes.iter().enumerate().rev() {
            let n = axis.values.len();
            idx[k] = flat % n;
            flat /= n;
        }
        idx
    }

    pub fn values_at(&self, index: &[usize]) -> Vec<f64> {
        self.axes.iter().zip(index).map(|(a, &i)| a.values[i]).collect()
    }

    pub fn params_at(&self, index: &[usize]) -> PointParams {
        let mut p = self.base;
        for (axis, &i) in self.axes.iter().zip(index) {
            axis.param.apply(&mut p, axis.values[i]);
        }
        p
    }
}
