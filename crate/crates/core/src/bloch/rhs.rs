//! Liouville equations of the Λ system with near dipole-dipole corrections.
//!
//! The drive enters through μ12 ε_P = Ω_P/2 and μ23 ε_C = Ω_C/2. The factor
//! two on the probe terms of the d21 equation and on the coupling terms of
//! the d23 equation is intentional.

use nalgebra::SMatrix;
use num_complex::Complex64;

use super::state::{AtomParams, DensityState, Drive, StateVector};

pub type Jacobian = SMatrix<f64, 8, 8>;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Time derivative of every stored component. The returned value uses the
/// [`DensityState`] layout but holds rates, not a state.
pub fn bloch_rhs(state: &DensityState, atom: &AtomParams, drive: &Drive) -> DensityState {
    let a = drive.omega_p * 0.5;
    let b = drive.omega_c * 0.5;
    let DensityState {
        d21,
        d23,
        rho21,
        rho23,
        rho31,
    } = *state;
    let rho12 = rho21.conj();
    let rho32 = rho23.conj();
    let rho13 = rho31.conj();
    let rho11 = state.rho11();
    let rho22 = state.rho22();
    let rho33 = state.rho33();
    let g = atom.gamma();

    let probe = I * a.conj() * rho21 - I * a * rho12;
    let coupling = I * b.conj() * rho23 - I * b * rho32;

    let dd21 = -(atom.gamma23 + 2.0 * atom.gamma21) * rho22 + 2.0 * probe.re + coupling.re
        - atom.gamma31 * (rho33 - rho11)
        - atom.gamma_d21 * rho21.norm_sqr();
    let dd23 = -(2.0 * atom.gamma23 + atom.gamma21) * rho22 + probe.re + 2.0 * coupling.re
        - atom.gamma31 * (rho11 - rho33)
        - atom.gamma_d23 * rho23.norm_sqr();

    let drho23 = -I * (atom.delta_c - atom.eps_c * d23) * rho23
        - (g - 0.5 * atom.gamma_d23 * d23) * rho23
        + I * b * d23
        - I * a * rho13;
    let drho21 = -I * (atom.delta_p - atom.eps_p * d21) * rho21
        - (g - 0.5 * atom.gamma_d21 * d21) * rho21
        + I * a * d21
        - I * b * rho31;
    let drho31 = -(atom.gamma31 + I * (atom.delta_p - atom.delta_c)) * rho31
        - I * (atom.eps_p * d21 - atom.eps_c * d23) * rho31
        - I * b.conj() * rho21
        + I * a * rho32;

    DensityState {
        d21: dd21,
        d23: dd23,
        rho21: drho21,
        rho23: drho23,
        rho31: drho31,
    }
}

/// [`bloch_rhs`] on the real 8-vector layout.
pub fn rhs_vector(v: &StateVector, atom: &AtomParams, drive: &Drive) -> StateVector {
    bloch_rhs(&DensityState::from_vector(v), atom, drive).to_vector()
}

/// Writes the real 2×2 block of ∂f/∂z for a complex output `f` and complex
/// input `z`, given the Wirtinger derivatives `df = A dz + B dz*`.
/// Real outputs (rows with `rows == 1`) keep only the real part.
fn put_complex(j: &mut Jacobian, row: usize, rows: usize, col: usize, a: Complex64, b: Complex64) {
    let dx = a + b;
    let dy = I * (a - b);
    j[(row, col)] += dx.re;
    j[(row, col + 1)] += dy.re;
    if rows == 2 {
        j[(row + 1, col)] += dx.im;
        j[(row + 1, col + 1)] += dy.im;
    }
}

/// Complex output, real input.
fn put_real(j: &mut Jacobian, row: usize, col: usize, d: Complex64) {
    j[(row, col)] += d.re;
    j[(row + 1, col)] += d.im;
}

/// Analytic Jacobian of [`rhs_vector`] with respect to the state vector.
pub fn jacobian(state: &DensityState, atom: &AtomParams, drive: &Drive) -> Jacobian {
    let a = drive.omega_p * 0.5;
    let b = drive.omega_c * 0.5;
    let DensityState {
        d21,
        d23,
        rho21,
        rho23,
        rho31,
    } = *state;
    let g = atom.gamma();
    let zero = Complex64::new(0.0, 0.0);
    let mut j = Jacobian::zeros();

    // row 0: d21
    let c21 = (atom.gamma23 + 2.0 * atom.gamma21) / 3.0;
    j[(0, 0)] = -c21 - atom.gamma31;
    j[(0, 1)] = -c21 + atom.gamma31;
    put_complex(
        &mut j,
        0,
        1,
        2,
        2.0 * I * a.conj() - atom.gamma_d21 * rho21.conj(),
        -2.0 * I * a - atom.gamma_d21 * rho21,
    );
    put_complex(&mut j, 0, 1, 4, I * b.conj(), -I * b);

    // row 1: d23
    let c23 = (2.0 * atom.gamma23 + atom.gamma21) / 3.0;
    j[(1, 0)] = -c23 + atom.gamma31;
    j[(1, 1)] = -c23 - atom.gamma31;
    put_complex(&mut j, 1, 1, 2, I * a.conj(), -I * a);
    put_complex(
        &mut j,
        1,
        1,
        4,
        2.0 * I * b.conj() - atom.gamma_d23 * rho23.conj(),
        -2.0 * I * b - atom.gamma_d23 * rho23,
    );

    // rows 2,3: rho21
    let l21 = -I * (atom.delta_p - atom.eps_p * d21) - (g - 0.5 * atom.gamma_d21 * d21);
    put_real(&mut j, 2, 0, (I * atom.eps_p + 0.5 * atom.gamma_d21) * rho21 + I * a);
    put_complex(&mut j, 2, 2, 2, l21, zero);
    put_complex(&mut j, 2, 2, 6, -I * b, zero);

    // rows 4,5: rho23
    let l23 = -I * (atom.delta_c - atom.eps_c * d23) - (g - 0.5 * atom.gamma_d23 * d23);
    put_real(&mut j, 4, 1, (I * atom.eps_c + 0.5 * atom.gamma_d23) * rho23 + I * b);
    put_complex(&mut j, 4, 2, 4, l23, zero);
    put_complex(&mut j, 4, 2, 6, zero, -I * a);

    // rows 6,7: rho31
    let l31 = -(atom.gamma31 + I * (atom.delta_p - atom.delta_c))
        - I * (atom.eps_p * d21 - atom.eps_c * d23);
    put_real(&mut j, 6, 0, -I * atom.eps_p * rho31);
    put_real(&mut j, 6, 1, I * atom.eps_c * rho31);
    put_complex(&mut j, 6, 2, 6, l31, zero);
    put_complex(&mut j, 6, 2, 2, -I * b.conj(), zero);
    put_complex(&mut j, 6, 2, 4, zero, I * a);

    j
}

/// ∂(rhs)/∂(Re Ω_P) at fixed state. The right-hand side is affine in the
/// probe amplitude, so a unit difference is exact.
pub fn probe_sensitivity(state: &DensityState, atom: &AtomParams, drive: &Drive) -> StateVector {
    let shifted = Drive {
        omega_p: drive.omega_p + 1.0,
        ..*drive
    };
    bloch_rhs(state, atom, &shifted).to_vector() - bloch_rhs(state, atom, drive).to_vector()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_state() -> DensityState {
        DensityState {
            d21: -0.4,
            d23: 0.1,
            rho21: Complex64::new(0.12, -0.2),
            rho23: Complex64::new(-0.05, 0.08),
            rho31: Complex64::new(0.07, 0.03),
        }
    }

    fn sample_atom() -> AtomParams {
        AtomParams {
            gamma21: 1.0,
            gamma23: 0.7,
            gamma31: 0.2,
            gamma_d21: 1.3,
            gamma_d23: 0.4,
            eps_p: 0.9,
            eps_c: -0.6,
            delta_p: 0.5,
            delta_c: -1.1,
        }
    }

    #[test]
    fn ground_state_stationary_without_fields() {
        let atom = AtomParams {
            gamma31: 0.0,
            ..AtomParams::default()
        };
        let d = bloch_rhs(&DensityState::ground(), &atom, &Drive::off());
        assert!(d.to_vector().amax() == 0.0);
    }

    #[test]
    fn excited_state_decay_rates() {
        let atom = AtomParams {
            gamma21: 1.0,
            gamma23: 0.6,
            gamma31: 0.0,
            ..AtomParams::ndd_free()
        };
        let d = bloch_rhs(&DensityState::excited(), &atom, &Drive::off());
        assert!((d.d21 + (0.6 + 2.0)).abs() < 1e-15);
        assert!((d.d23 + (1.2 + 1.0)).abs() < 1e-15);
    }

    #[test]
    fn ndd_population_term() {
        let atom = AtomParams {
            gamma31: 0.0,
            gamma_d21: 2.0,
            ..AtomParams::ndd_free()
        };
        let mut s = DensityState::ground();
        s.rho21 = Complex64::new(0.1, 0.0);
        let with = bloch_rhs(&s, &atom, &Drive::off());
        let without = bloch_rhs(
            &s,
            &AtomParams {
                gamma_d21: 0.0,
                ..atom
            },
            &Drive::off(),
        );
        assert!((with.d21 - without.d21 + 0.02).abs() < 1e-15);
    }

    #[test]
    fn jacobian_matches_central_differences() {
        let drive = Drive::new(Complex64::new(1.3, 0.4), Complex64::new(2.1, -0.3));
        let atom = sample_atom();
        let s = sample_state();
        let j = jacobian(&s, &atom, &drive);
        let v = s.to_vector();
        let h = 1e-6;
        for col in 0..8 {
            let mut vp = v;
            let mut vm = v;
            vp[col] += h;
            vm[col] -= h;
            let fd = (rhs_vector(&vp, &atom, &drive) - rhs_vector(&vm, &atom, &drive)) / (2.0 * h);
            for row in 0..8 {
                assert!(
                    (fd[row] - j[(row, col)]).abs() < 1e-8,
                    "J[{row},{col}] analytic {} vs fd {}",
                    j[(row, col)],
                    fd[row]
                );
            }
        }
    }

    #[test]
    fn probe_sensitivity_matches_differences() {
        let drive = Drive::new(Complex64::new(0.8, 0.0), Complex64::new(1.5, 0.0));
        let atom = sample_atom();
        let s = sample_state();
        let h = 1e-6;
        let up = Drive::new(drive.omega_p + h, drive.omega_c);
        let dn = Drive::new(drive.omega_p - h, drive.omega_c);
        let fd = (bloch_rhs(&s, &atom, &up).to_vector() - bloch_rhs(&s, &atom, &dn).to_vector())
            / (2.0 * h);
        let an = probe_sensitivity(&s, &atom, &drive);
        assert!((fd - an).amax() < 1e-8);
    }
}
