// Copyright 2026 Spinbath Contributors
// SPDX-License-Identifier: Apache-2.0

//! Thermodynamic and entanglement observables of a two-qubit state.
//!
//! The headline quantities are:
//!
//! - the *normalized open-system specific heat*
//!   `c_n = -beta^2 sum_i ln(eta_i)` over the density-matrix eigenvalues
//!   `eta_i` — a spectral diagnostic that diverges whenever the state
//!   purifies (some `eta_i -> 0`), e.g. toward zero temperature in an
//!   entangled ground state. Since `eta_i <= 1`, the quantity is
//!   nonnegative by construction;
//! - the Wootters concurrence and the entanglement of formation derived
//!   from it. Ref: Wootters, Phys. Rev. Lett. 80, 2245 (1998).
//!
//! A conventional closed-system specific heat of the bare Hamiltonian
//! (`C = beta^2 Var(H)` on the Gibbs state, equivalently the curvature of
//! `ln Z`) is provided alongside as an independent thermodynamic reference;
//! the two definitions measure different things and are not expected to
//! agree.

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix4};
use crate::model::{DensityMatrix, InverseTemperature, ModelParams};

/// Hermiticity tolerance accepted by [`eigenvalues_hermitian`].
pub const EIG_HERM_TOL: f64 = 1e-9;

/// Eigenvalues below this floor are clipped before taking logarithms.
pub const LOG_FLOOR: f64 = 1e-300;

/// X-pattern tolerance for [`concurrence_xstate`].
pub const X_TOL: f64 = 1e-10;

/// Spectrum of a Hermitian matrix, descending.
///
/// Errors if the input's Hermiticity residual exceeds `1e-9`.
pub fn eigenvalues_hermitian(m: &Matrix4) -> Result<[f64; 4]> {
    let residual = linalg::hermiticity_residual(m);
    if residual > EIG_HERM_TOL {
        return Err(Error::NonHermitian {
            residual,
            tolerance: EIG_HERM_TOL,
        });
    }
    let (vals, _) = linalg::eigh4(m);
    Ok([vals[3], vals[2], vals[1], vals[0]])
}

/// Normalized open-system specific heat of a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecificHeatResult {
    /// `-beta^2 sum_i ln(eta_i)` with clipped eigenvalues.
    pub c_n: f64,
    /// State eigenvalues, descending.
    pub eigenvalues: [f64; 4],
    /// True if any eigenvalue sat below [`LOG_FLOOR`] — the divergence
    /// signal. The clipped value keeps `c_n` finite and plottable instead
    /// of poisoning downstream arithmetic with infinities.
    pub clipped: bool,
}

/// Evaluates `c_n = -beta^2 sum_i ln(eta_i)` over the state spectrum.
///
/// Eigenvalues below `1e-300` (including slightly negative numerical noise)
/// are clipped to the floor and flagged; the divergence as an eigenvalue
/// approaches zero is physics, not an error, and must stay visible.
///
/// The spectrum comes from the dense eigensolver, which resolves
/// eigenvalues down to about `eps * ||rho||`; when the trajectory admits an
/// exact spectrum (closed-form thermal evolution), prefer
/// [`specific_heat_from_spectrum`] with
/// `dynamics::closed_form_thermal_spectrum`.
pub fn specific_heat_normalized(
    rho: &DensityMatrix,
    beta: InverseTemperature,
) -> Result<SpecificHeatResult> {
    let eigenvalues = eigenvalues_hermitian(rho.as_matrix())?;
    specific_heat_from_spectrum(eigenvalues, beta)
}

/// The same quantity from an externally supplied spectrum (descending,
/// summing to one).
pub fn specific_heat_from_spectrum(
    eigenvalues: [f64; 4],
    beta: InverseTemperature,
) -> Result<SpecificHeatResult> {
    let b = beta.beta();
    if !(b > 0.0) {
        return Err(Error::Domain {
            what: "beta",
            invariant: "beta > 0",
            value: b,
        });
    }
    let mut clipped = false;
    let mut log_sum = 0.0_f64;
    for ev in eigenvalues {
        let safe = if ev < LOG_FLOOR {
            clipped = true;
            LOG_FLOOR
        } else {
            ev
        };
        log_sum += libm::log(safe);
    }
    Ok(SpecificHeatResult {
        c_n: -b * b * log_sum,
        eigenvalues,
        clipped,
    })
}

/// Conventional specific heat of the bare system at equilibrium, via the
/// energy-fluctuation form `C = beta^2 (<H^2> - <H>^2)` on the Gibbs state.
///
/// Boltzmann weights are evaluated from the numerically diagonalized
/// Hamiltonian with a ground-state shift, so any `beta > 0` is safe.
pub fn closed_system_specific_heat(params: &ModelParams, beta: InverseTemperature) -> Result<f64> {
    let b = require_positive_beta(beta)?;
    let h = crate::model::build_hamiltonian(params);
    let (energies, _) = linalg::eigh4(&h);
    let e0 = energies[0];
    let mut z = 0.0;
    let mut mean = 0.0;
    for e in energies {
        let w = libm::exp(-b * (e - e0));
        z += w;
        mean += w * e;
    }
    mean /= z;
    let mut var = 0.0;
    for e in energies {
        let w = libm::exp(-b * (e - e0)) / z;
        var += w * (e - mean) * (e - mean);
    }
    Ok(b * b * var)
}

/// The same quantity through the curvature of `ln Z`:
/// `C = beta^2 d^2/dbeta^2 ln Z`, central differences with step `1e-4 beta`.
///
/// Uses the closed-form level structure (not the eigensolver), so the pair
/// of routines cross-checks two independent evaluation paths. The linear
/// `-beta E0` part of `ln Z` is removed analytically before differencing;
/// it has zero curvature and would otherwise dominate the rounding error at
/// large `beta`.
pub fn closed_system_specific_heat_lnz(
    params: &ModelParams,
    beta: InverseTemperature,
) -> Result<f64> {
    let b = require_positive_beta(beta)?;
    let eta = params.eta();
    let energies = [
        params.j_z,
        params.j_z,
        -params.j_z - 2.0 * eta,
        -params.j_z + 2.0 * eta,
    ];
    let mut e0 = energies[0];
    for e in energies {
        if e < e0 {
            e0 = e;
        }
    }
    let g = |bb: f64| -> f64 {
        let mut s = 0.0;
        for e in energies {
            s += libm::exp(-bb * (e - e0));
        }
        libm::log(s)
    };
    let h = 1e-4 * b;
    let curvature = (g(b + h) - 2.0 * g(b) + g(b - h)) / (h * h);
    Ok(b * b * curvature)
}

fn require_positive_beta(beta: InverseTemperature) -> Result<f64> {
    let b = beta.beta();
    if !(b > 0.0) {
        return Err(Error::Domain {
            what: "beta",
            invariant: "beta > 0",
            value: b,
        });
    }
    Ok(b)
}

/// Concurrence and entanglement of formation of a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementResult {
    pub concurrence: f64,
    pub eof: f64,
    /// Square roots of the spin-flip product spectrum, descending.
    pub lambdas: [f64; 4],
}

// sigma_y (x) sigma_y in the fixed basis: antidiagonal (-1, 1, 1, -1).
fn spin_flip(m: &Matrix4) -> Matrix4 {
    const SIGN: [f64; 4] = [-1.0, 1.0, 1.0, -1.0];
    let mut out = linalg::zero();
    for i in 0..4 {
        for j in 0..4 {
            // (Y conj(m) Y)_{ij} = sign_i sign_j conj(m)_{3-i, 3-j}
            out[i][j] = m[3 - i][3 - j].conj() * (SIGN[i] * SIGN[3 - j]);
        }
    }
    out
}

/// Wootters concurrence via the spin-flipped product.
///
/// The `lambda_i` are the square roots of the spectrum of `rho rho_tilde`,
/// computed as the singular values of `sqrt(rho_tilde) sqrt(rho)` (the Gram
/// product of that factor is similar to `rho rho_tilde`). The factored form
/// keeps small `lambda_i` accurate at the `eps * sigma_max` level, which the
/// direct eigensolve of the product cannot do. Returns
/// `C = max(0, l1 - l2 - l3 - l4)` clamped to `[0, 1]` together with the
/// matching entanglement of formation.
///
/// State eigenvalues in `[-1e-8, 0)` (numerical noise) are zeroed before the
/// square roots; anything more negative would make the product spectrum
/// meaningfully negative and is reported as a numerical failure.
pub fn concurrence(rho: &DensityMatrix) -> Result<EntanglementResult> {
    let m = rho.as_matrix();
    let tilde = spin_flip(m);
    let (state_eigs, _) = linalg::eigh4(m);
    if state_eigs[0] < -1e-8 {
        return Err(Error::Numerical {
            context: "negative state eigenvalue in the spin-flip product",
            value: state_eigs[0],
        });
    }
    let root = linalg::sqrt_psd(m);
    let root_tilde = linalg::sqrt_psd(&tilde);
    let lambdas = linalg::singular_values4(&linalg::mat_mul(&root_tilde, &root));
    let c = (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).clamp(0.0, 1.0);
    Ok(EntanglementResult {
        concurrence: c,
        eof: eof(c)?,
        lambdas,
    })
}

/// Concurrence of an X-shaped state in closed form:
/// `C = 2 max(0, |rho_23| - sqrt(rho_11 rho_44), |rho_14| - sqrt(rho_22 rho_33))`.
///
/// Errors if any off-X component exceeds `1e-10`.
pub fn concurrence_xstate(rho: &DensityMatrix) -> Result<f64> {
    let off = rho.x_residual();
    if off > X_TOL {
        return Err(Error::Numerical {
            context: "off-X component in concurrence_xstate",
            value: off,
        });
    }
    let m = rho.as_matrix();
    let inner = linalg::abs(m[1][2]) - libm::sqrt((m[0][0].re * m[3][3].re).max(0.0));
    let outer = linalg::abs(m[0][3]) - libm::sqrt((m[1][1].re * m[2][2].re).max(0.0));
    Ok((2.0 * inner.max(outer).max(0.0)).clamp(0.0, 1.0))
}

/// Concurrence of the thermal state directly from the couplings:
/// `C(T) = (2/Z) max(0, |v| - e^{-beta Jz})`.
///
/// Evaluated with max-shifted exponentials so arbitrarily low temperatures
/// are exact.
pub fn thermal_concurrence_analytic(params: &ModelParams, beta: InverseTemperature) -> f64 {
    let b = beta.beta();
    let eta = params.eta();
    let a = b * (params.j_z + 2.0 * eta);
    let bb = b * (params.j_z - 2.0 * eta);
    let d = -b * params.j_z;
    let m = a.max(bb).max(d);
    let num = 0.5 * (libm::exp(a - m) - libm::exp(bb - m)) - libm::exp(d - m);
    let den = 2.0 * libm::exp(d - m) + libm::exp(a - m) + libm::exp(bb - m);
    (2.0 * num / den).clamp(0.0, 1.0)
}

/// Entanglement of formation from the concurrence:
/// `E = h((1 + sqrt(1 - C^2)) / 2)` with the binary entropy `h`.
///
/// `E(0) = 0` and `E(1) = 1` exactly; strictly increasing in between.
pub fn eof(c: f64) -> Result<f64> {
    if !( -1e-12..=1.0 + 1e-12).contains(&c) {
        return Err(Error::Domain {
            what: "concurrence",
            invariant: "0 <= C <= 1",
            value: c,
        });
    }
    let c = c.clamp(0.0, 1.0);
    if c == 0.0 {
        return Ok(0.0);
    }
    if c == 1.0 {
        return Ok(1.0);
    }
    let x = 0.5 * (1.0 + libm::sqrt(1.0 - c * c));
    Ok(binary_entropy(x))
}

fn binary_entropy(x: f64) -> f64 {
    let mut h = 0.0;
    for p in [x, 1.0 - x] {
        if p > 0.0 {
            h -= p * libm::log2(p);
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;
    use crate::model::gibbs_state;

    fn params(j: f64, j_z: f64, d_z: f64) -> ModelParams {
        ModelParams::new(j, j_z, d_z, 0.1, 1.0).unwrap()
    }

    fn beta(b: f64) -> InverseTemperature {
        InverseTemperature::new(b).unwrap()
    }

    #[test]
    fn spectrum_anchors() {
        let vals = eigenvalues_hermitian(DensityMatrix::maximally_mixed().as_matrix()).unwrap();
        assert_eq!(vals, [0.25; 4]);
        let vals = eigenvalues_hermitian(DensityMatrix::basis_state(3).as_matrix()).unwrap();
        assert_eq!(vals, [1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn spectrum_rejects_non_hermitian() {
        let mut m = *DensityMatrix::maximally_mixed().as_matrix();
        m[0][1] = C64::new(0.1, 0.0);
        assert!(matches!(
            eigenvalues_hermitian(&m),
            Err(Error::NonHermitian { .. })
        ));
    }

    #[test]
    fn specific_heat_of_maximally_mixed_state() {
        // c_n(I/4) = 4 beta^2 ln 4; at beta = 1 that is 5.545177444479562.
        let r =
            specific_heat_normalized(&DensityMatrix::maximally_mixed(), beta(1.0)).unwrap();
        assert!(!r.clipped);
        assert!((r.c_n - 4.0 * libm::log(4.0)).abs() < 1e-12);
        assert!((r.c_n - 5.545177444479562).abs() < 1e-12);
    }

    #[test]
    fn specific_heat_flags_pure_states() {
        // the clipped flag on the |11><11| limit state is structural,
        // independent of temperature
        for b in [0.1, 1.0, 2.0, 20.0] {
            let r =
                specific_heat_normalized(&DensityMatrix::basis_state(3), beta(b)).unwrap();
            assert!(r.clipped, "beta = {b}");
            assert!(r.c_n > 0.0 && r.c_n.is_finite());
        }
    }

    #[test]
    fn specific_heat_rejects_nonpositive_beta() {
        let r = specific_heat_normalized(&DensityMatrix::maximally_mixed(), beta(0.0));
        assert!(matches!(r, Err(Error::Domain { what: "beta", .. })));
    }

    #[test]
    fn specific_heat_grows_toward_low_temperature() {
        let p = params(1.0, 0.5, 0.5);
        let cold = specific_heat_normalized(&gibbs_state(&p, beta(10.0)), beta(10.0)).unwrap();
        let hot = specific_heat_normalized(&gibbs_state(&p, beta(0.2)), beta(0.2)).unwrap();
        assert!(cold.c_n > hot.c_n);
    }

    #[test]
    fn closed_specific_heat_routes_agree() {
        let p = params(1.0, 0.5, 0.5);
        for b in [0.1, 0.5, 1.0, 2.0, 5.0, 20.0] {
            let a = closed_system_specific_heat(&p, beta(b)).unwrap();
            let c = closed_system_specific_heat_lnz(&p, beta(b)).unwrap();
            assert!((a - c).abs() < 1e-6, "beta = {b}: {a} vs {c}");
        }
    }

    #[test]
    fn closed_specific_heat_limits() {
        let p = params(1.0, 0.5, 0.5);
        assert!(closed_system_specific_heat(&p, beta(1e-4)).unwrap() < 1e-6);
        assert!(closed_system_specific_heat(&p, beta(500.0)).unwrap() < 1e-10);
        assert!(closed_system_specific_heat_lnz(&p, beta(500.0)).unwrap().abs() < 1e-10);
    }

    fn bell_state() -> DensityMatrix {
        // (|01> + |10>)/sqrt(2)
        let mut m = linalg::zero();
        let half = C64::new(0.5, 0.0);
        m[1][1] = half;
        m[2][2] = half;
        m[1][2] = half;
        m[2][1] = half;
        DensityMatrix::new(m).unwrap()
    }

    #[test]
    fn concurrence_anchors() {
        let r = concurrence(&bell_state()).unwrap();
        assert!((r.concurrence - 1.0).abs() < 1e-12);
        assert!((r.eof - 1.0).abs() < 1e-12);

        let r = concurrence(&DensityMatrix::maximally_mixed()).unwrap();
        assert_eq!(r.concurrence, 0.0);
        assert_eq!(r.eof, 0.0);

        let r = concurrence(&DensityMatrix::basis_state(0)).unwrap();
        assert_eq!(r.concurrence, 0.0);
    }

    #[test]
    fn xstate_concurrence_anchors() {
        assert!((concurrence_xstate(&bell_state()).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(
            concurrence_xstate(&DensityMatrix::maximally_mixed()).unwrap(),
            0.0
        );
        let mut m = linalg::zero();
        m[0][0] = C64::new(0.4, 0.0);
        m[1][1] = C64::new(0.6, 0.0);
        let diag = DensityMatrix::new(m).unwrap();
        assert_eq!(concurrence_xstate(&diag).unwrap(), 0.0);
    }

    #[test]
    fn xstate_concurrence_rejects_general_states() {
        let mut m = *DensityMatrix::maximally_mixed().as_matrix();
        m[0][1] = C64::new(0.05, 0.0);
        m[1][0] = C64::new(0.05, 0.0);
        let rho = DensityMatrix::new(m).unwrap();
        assert!(concurrence_xstate(&rho).is_err());
    }

    #[test]
    fn thermal_concurrence_matches_wootters() {
        for (j, j_z, d_z, b) in [
            (1.0, 0.0, 0.0, 2.0),
            (1.0, 0.5, 0.5, 1.0),
            (2.0, -0.7, 1.3, 0.4),
            (-1.5, 0.3, 0.8, 1.7),
            (0.0, 0.2, 1.1, 2.5),
        ] {
            let p = params(j, j_z, d_z);
            let rho = gibbs_state(&p, beta(b));
            let general = concurrence(&rho).unwrap().concurrence;
            let x = concurrence_xstate(&rho).unwrap();
            let analytic = thermal_concurrence_analytic(&p, beta(b));
            assert!((general - x).abs() < 1e-10, "general vs x at {j},{j_z},{d_z},{b}");
            assert!((x - analytic).abs() < 1e-12, "x vs analytic at {j},{j_z},{d_z},{b}");
        }
    }

    #[test]
    fn thermal_concurrence_limits() {
        let p = params(1.0, 0.0, 0.0);
        assert_eq!(thermal_concurrence_analytic(&p, beta(0.0)), 0.0);
        let c = thermal_concurrence_analytic(&p, beta(50.0));
        assert!(c > 0.999, "{c}");
    }

    #[test]
    fn eof_anchors() {
        assert_eq!(eof(0.0).unwrap(), 0.0);
        assert_eq!(eof(1.0).unwrap(), 1.0);
        assert!((eof(0.6).unwrap() - 0.468995593589280).abs() < 1e-12);
        assert!(eof(1.5).is_err());
        assert!(eof(-0.2).is_err());
    }

    #[test]
    fn eof_is_strictly_increasing() {
        let mut prev = 0.0;
        for k in 1..=1000 {
            let c = k as f64 / 1000.0;
            let e = eof(c).unwrap();
            assert!(e > prev, "not increasing at C = {c}");
            prev = e;
        }
        assert_eq!(prev, 1.0);
    }
}
