//! Steady-state propagation through the medium and the ring boundary map.
//!
//! The probe envelope obeys dΩ/dζ = −i·αL·2γ·ρ21(Ω(ζ)), ζ ∈ [0, 1], with ρ21
//! the local adiabatic steady state. For a weak resonant two-level probe this
//! is Beer's law |Ω(1)| = |Ω(0)|·e^(−αL), and with C = R·αL/(2T) the fixed
//! points of the ring map reduce to the mean-field state equation as αL → 0.

use num_complex::Complex64;

use crate::bloch::{steady_state, AtomParams, DensityState, Drive};
use crate::error::{Error, Result};

use super::params::{CavityMode, CavityParams};

/// Field samples at the RK4 nodes ζ_k = k/n.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldProfile {
    pub nodes: Vec<Complex64>,
    /// Atomic state at the exit face, useful as a warm start.
    pub exit_state: DensityState,
}

impl FieldProfile {
    pub fn output(&self) -> Complex64 {
        *self.nodes.last().unwrap()
    }

    /// Spatial average of the field over the medium (Simpson when the
    /// number of intervals is even, trapezoid otherwise).
    pub fn mean(&self) -> Complex64 {
        let n = self.nodes.len() - 1;
        let h = 1.0 / n as f64;
        if n % 2 == 0 {
            let mut s = self.nodes[0] + self.nodes[n];
            for k in 1..n {
                s += self.nodes[k] * if k % 2 == 1 { 4.0 } else { 2.0 };
            }
            s * (h / 3.0)
        } else {
            let inner: Complex64 = self.nodes[1..n].iter().sum();
            (inner + 0.5 * (self.nodes[0] + self.nodes[n])) * h
        }
    }
}

struct Medium<'a> {
    atom: &'a AtomParams,
    omega_c: Complex64,
    gain: f64,
}

impl Medium<'_> {
    fn derivative(&self, field: Complex64, warm: &mut DensityState, zeta: f64) -> Result<Complex64> {
        let sol = steady_state(self.atom, &Drive::new(field, self.omega_c), Some(warm)).map_err(
            |e| Error::Propagation {
                zeta,
                source: Box::new(e),
            },
        )?;
        *warm = sol.state;
        Ok(Complex64::new(0.0, -self.gain) * sol.state.rho21)
    }
}

/// Classical RK4 integration of the field across the medium.
pub fn propagate_profile(
    e_in: Complex64,
    atom: &AtomParams,
    omega_c: Complex64,
    alpha_l: f64,
    n_steps: usize,
    init: Option<&DensityState>,
) -> Result<FieldProfile> {
    if n_steps < 16 {
        return Err(Error::InvalidParameter(format!("n_steps must be >= 16, got {n_steps}")));
    }
    if !(alpha_l >= 0.0 && alpha_l.is_finite()) {
        return Err(Error::InvalidParameter(format!("alpha_l must be >= 0, got {alpha_l}")));
    }
    let mut warm = init.copied().unwrap_or_else(DensityState::ground);
    if alpha_l == 0.0 {
        return Ok(FieldProfile {
            nodes: vec![e_in; n_steps + 1],
            exit_state: warm,
        });
    }
    let medium = Medium {
        atom,
        omega_c,
        gain: alpha_l * 2.0 * atom.gamma(),
    };
    let h = 1.0 / n_steps as f64;
    let mut field = e_in;
    let mut nodes = Vec::with_capacity(n_steps + 1);
    nodes.push(field);
    for k in 0..n_steps {
        let z = k as f64 * h;
        let k1 = medium.derivative(field, &mut warm, z)?;
        let k2 = medium.derivative(field + k1 * (0.5 * h), &mut warm, z + 0.5 * h)?;
        let k3 = medium.derivative(field + k2 * (0.5 * h), &mut warm, z + 0.5 * h)?;
        let k4 = medium.derivative(field + k3 * h, &mut warm, z + h)?;
        field += (k1 + 2.0 * k2 + 2.0 * k3 + k4) * (h / 6.0);
        nodes.push(field);
    }
    Ok(FieldProfile {
        nodes,
        exit_state: warm,
    })
}

/// Output field after one pass through the medium.
pub fn propagate_medium(
    e_in: Complex64,
    atom: &AtomParams,
    omega_c: Complex64,
    alpha_l: f64,
    n_steps: usize,
) -> Result<Complex64> {
    Ok(propagate_profile(e_in, atom, omega_c, alpha_l, n_steps, None)?.output())
}

fn check_z_resolved(cav: &CavityParams) -> Result<()> {
    cav.validate()?;
    if cav.mode != CavityMode::ZResolved {
        return Err(Error::InvalidParameter("the ring map requires z-resolved mode".into()));
    }
    Ok(())
}

/// One round trip: E(0) ← √T·E_in + R·e^(−iθ)·E(L).
///
/// `y_in` is the incident field; the normalized input used by the state
/// equation is `y_in / √T`.
pub fn ring_map(
    e0: Complex64,
    y_in: Complex64,
    atom: &AtomParams,
    omega_c: Complex64,
    cav: &CavityParams,
) -> Result<Complex64> {
    check_z_resolved(cav)?;
    let out = propagate_medium(e0, atom, omega_c, cav.alpha_l, cav.n_steps)?;
    Ok(round_trip(out, y_in, cav))
}

fn round_trip(e_out: Complex64, y_in: Complex64, cav: &CavityParams) -> Complex64 {
    cav.t.sqrt() * y_in + cav.r() * Complex64::from_polar(1.0, -cav.theta) * e_out
}

#[derive(Debug, Clone, PartialEq)]
pub struct RingFixedPoint {
    /// Incident field.
    pub y_in: Complex64,
    /// Field at the entrance face.
    pub e0: Complex64,
    /// Field at the exit face; the transmitted field is √T·e_out.
    pub e_out: Complex64,
    /// Spatially averaged intracavity field, comparable to the mean-field x.
    pub mean_field: Complex64,
    pub residual: f64,
}

/// Newton's method for a complex function of one complex variable seen as
/// a map of the real plane, with a forward-difference Jacobian and
/// backtracking. `f` returns the residual and the profile it came from.
fn newton_plane<F>(guess: Complex64, mut f: F) -> Result<(Complex64, Complex64, FieldProfile)>
where
    F: FnMut(Complex64, &mut DensityState) -> Result<(Complex64, FieldProfile)>,
{
    let mut warm = DensityState::ground();
    let mut e = guess;
    let (mut res, mut prof) = f(e, &mut warm)?;
    for _ in 0..100 {
        let scale = e.norm().max(1.0);
        if res.norm() <= 1e-13 * scale {
            break;
        }
        let h = 1e-7 * scale;
        let (gx, _) = f(e + h, &mut warm.clone())?;
        let (gy, _) = f(e + Complex64::new(0.0, h), &mut warm.clone())?;
        let jx = (gx - res) / h;
        let jy = (gy - res) / h;
        let det = jx.re * jy.im - jy.re * jx.im;
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let dx = -(jy.im * res.re - jy.re * res.im) / det;
        let dy = -(-jx.im * res.re + jx.re * res.im) / det;
        let step = Complex64::new(dx, dy);
        let mut t = 1.0;
        loop {
            let trial = e + step * t;
            let (rt, pt) = f(trial, &mut warm.clone())?;
            if rt.norm() < res.norm() || t < 1e-3 {
                e = trial;
                res = rt;
                prof = pt;
                warm = prof.exit_state;
                break;
            }
            t *= 0.5;
        }
    }
    Ok((e, res, prof))
}

/// Solves e0 = ring_map(e0) for the incident field `y_in`, starting from
/// `guess`.
pub fn ring_fixed_point(
    y_in: Complex64,
    atom: &AtomParams,
    omega_c: Complex64,
    cav: &CavityParams,
    guess: Complex64,
) -> Result<RingFixedPoint> {
    check_z_resolved(cav)?;
    let (e0, res, prof) = newton_plane(guess, |e, warm| {
        let prof = propagate_profile(e, atom, omega_c, cav.alpha_l, cav.n_steps, Some(warm))?;
        *warm = prof.exit_state;
        Ok((round_trip(prof.output(), y_in, cav) - e, prof))
    })?;
    let residual = res.norm();
    if residual > 1e-10 * e0.norm().max(1.0) {
        return Err(Error::RingFixedPoint { residual });
    }
    Ok(RingFixedPoint {
        y_in,
        e0,
        e_out: prof.output(),
        mean_field: prof.mean(),
        residual,
    })
}

/// Fixed point of the ring map whose spatially averaged field equals
/// `mean_field`, together with the incident field that sustains it. This
/// parametrizes the ring steady states by the intracavity field, which
/// stays well conditioned at turning points.
pub fn ring_fixed_point_at(
    mean_field: Complex64,
    atom: &AtomParams,
    omega_c: Complex64,
    cav: &CavityParams,
) -> Result<RingFixedPoint> {
    check_z_resolved(cav)?;
    let (e0, res, prof) = newton_plane(mean_field, |e, warm| {
        let prof = propagate_profile(e, atom, omega_c, cav.alpha_l, cav.n_steps, Some(warm))?;
        *warm = prof.exit_state;
        Ok((prof.mean() - mean_field, prof))
    })?;
    let residual = res.norm();
    if residual > 1e-10 * mean_field.norm().max(1.0) {
        return Err(Error::RingFixedPoint { residual });
    }
    let feedback = cav.r() * Complex64::from_polar(1.0, -cav.theta);
    let y_in = (e0 - feedback * prof.output()) / cav.t.sqrt();
    Ok(RingFixedPoint {
        y_in,
        e0,
        e_out: prof.output(),
        mean_field: prof.mean(),
        residual,
    })
}
