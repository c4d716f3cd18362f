//! Linear probe response about the ground state.

use num_complex::Complex64;

use super::state::AtomParams;

/// r = lim_{Ω_P→0} ρ21 / (Ω_P/2), obtained by setting ρ22−ρ11 = −1 and
/// ρ22−ρ33 = 0 in the ρ21 and ρ31 equations:
///
/// r = −i / [ (γ + γ^D_21/2) + i(Δ_P + ε_p) + (|Ω_C|²/4) / (γ31 + i(Δ_P − Δ_C − ε_p)) ]
///
/// The ground state is the weak-probe limit only when γ31 = 0; for γ31 > 0
/// the exchange term redistributes population between |1⟩ and |3⟩.
pub fn weak_probe_coherence(atom: &AtomParams, omega_c: Complex64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    let one_photon = Complex64::new(atom.gamma() + 0.5 * atom.gamma_d21, atom.delta_p + atom.eps_p);
    let coupling = 0.25 * omega_c.norm_sqr();
    let denom = if coupling == 0.0 {
        one_photon
    } else {
        let two_photon = Complex64::new(atom.gamma31, atom.delta_p - atom.delta_c - atom.eps_p);
        if two_photon == Complex64::new(0.0, 0.0) {
            // infinite denominator at the two-photon pole
            return Complex64::new(0.0, 0.0);
        }
        one_photon + coupling / two_photon
    };
    -i / denom
}

/// Probe absorption, −Im r.
pub fn absorption(atom: &AtomParams, omega_c: Complex64) -> f64 {
    -weak_probe_coherence(atom, omega_c).im
}
