// Copyright 2026 Spinbath Contributors
// SPDX-License-Identifier: Apache-2.0

//! Physical parameters, the system Hamiltonian, and thermal initial states.
//!
//! Conventions used throughout the crate (units with `hbar = k_B = 1`):
//!
//! - basis ordering `{|00>, |10>, |01>, |11>}`; matrix indices 0..3 follow
//!   this ordering, and the state "components" referred to in docs are the
//!   entries of the density matrix in this basis;
//! - Hamiltonian `H = J (sx sx + sy sy) + Jz sz sz + Dz (sx sy - sy sx)`
//!   over the two qubits, which in the fixed basis is the X-shaped matrix
//!   `diag(Jz, -Jz, -Jz, Jz)` plus the inner coupling
//!   `<10|H|01> = 2(J + i Dz)`;
//! - `eta = sqrt(J^2 + Dz^2)` and `theta = atan2(Dz, J)` parameterize the
//!   inner block: its eigenvalues are `-Jz ± 2 eta` and its eigenvectors
//!   carry the phase `e^{i theta}`.
//!
//! The thermal state at inverse temperature `beta` is evaluated through
//! max-shifted exponentials, so `beta` up to ~1e3 in natural units never
//! overflows or produces NaN.

use crate::error::{Error, Result};
use crate::linalg::{self, C64, Matrix4};

/// Physical constants of the spin pair and its baths.
///
/// `J` is the planar exchange (x and y couplings are equal), `j_z` the axial
/// exchange, `d_z` the Dzyaloshinskii-Moriya (spin-orbit) coupling. `gamma0`
/// sets the overall bath coupling scale and `gamma` is the half-width of the
/// Lorentzian bath spectrum; the asymptotic relaxation rate is `gamma0 / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub j: f64,
    pub j_z: f64,
    pub d_z: f64,
    pub gamma0: f64,
    pub gamma: f64,
}

impl ModelParams {
    /// Validates the parameter invariants:
    /// `gamma > 0`, `gamma0 >= 0`, all couplings finite.
    pub fn new(j: f64, j_z: f64, d_z: f64, gamma0: f64, gamma: f64) -> Result<Self> {
        for (name, value) in [("J", j), ("Jz", j_z), ("Dz", d_z)] {
            if !value.is_finite() {
                return Err(Error::Domain {
                    what: name,
                    invariant: "coupling must be finite",
                    value,
                });
            }
        }
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::Domain {
                what: "gamma",
                invariant: "gamma > 0",
                value: gamma,
            });
        }
        if !(gamma0 >= 0.0) || !gamma0.is_finite() {
            return Err(Error::Domain {
                what: "gamma0",
                invariant: "gamma0 >= 0",
                value: gamma0,
            });
        }
        Ok(Self {
            j,
            j_z,
            d_z,
            gamma0,
            gamma,
        })
    }

    /// `eta = sqrt(J^2 + Dz^2)`.
    pub fn eta(&self) -> f64 {
        libm::hypot(self.j, self.d_z)
    }

    /// `theta = atan2(Dz, J)`; equals `arctan(Dz / J)` for `J > 0` and is
    /// defined as `0` when both couplings vanish. The full-range angle keeps
    /// the thermal state exact for `J < 0` as well.
    pub fn theta(&self) -> f64 {
        if self.j == 0.0 && self.d_z == 0.0 {
            0.0
        } else {
            libm::atan2(self.d_z, self.j)
        }
    }

    /// The four energy levels in basis-block order:
    /// `[Jz, Jz, -Jz - 2 eta, -Jz + 2 eta]`
    /// (outer pair `|00>, |11>`, then the inner-block doublet).
    pub fn energies(&self) -> [f64; 4] {
        let eta = self.eta();
        [
            self.j_z,
            self.j_z,
            -self.j_z - 2.0 * eta,
            -self.j_z + 2.0 * eta,
        ]
    }
}

/// Inverse temperature `beta = 1 / (k_B T)` with `k_B = 1`.
///
/// `beta = 0` (infinite temperature) is allowed; the Gibbs state is then the
/// maximally mixed state.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct InverseTemperature(f64);

impl InverseTemperature {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta >= 0.0) || !beta.is_finite() {
            return Err(Error::Domain {
                what: "beta",
                invariant: "beta >= 0 and finite",
                value: beta,
            });
        }
        Ok(Self(beta))
    }

    /// From the temperature axis `k_B T` (energy units), `kt > 0`.
    pub fn from_temperature(kt: f64) -> Result<Self> {
        if !(kt > 0.0) {
            return Err(Error::Domain {
                what: "kT",
                invariant: "kT > 0",
                value: kt,
            });
        }
        Self::new(1.0 / kt)
    }

    pub fn beta(&self) -> f64 {
        self.0
    }
}

/// Quantities derived from the couplings at a fixed temperature.
///
/// `u`, `v` are the unnormalized inner-block Gibbs weights
/// (`u = e^{beta Jz} cosh(2 beta eta)`, `v = -e^{beta Jz} sinh(2 beta eta)`)
/// and `z` is the partition function. For very large `beta` these raw values
/// may overflow to infinity; [`gibbs_state`] works with shifted ratios
/// instead and is immune to that.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    pub eta: f64,
    pub theta: f64,
    pub u: f64,
    pub v: f64,
    pub z: f64,
}

/// Evaluates `eta`, `theta`, `u`, `v` and the partition function `Z`.
pub fn derived_params(params: &ModelParams, beta: InverseTemperature) -> DerivedParams {
    let eta = params.eta();
    let theta = params.theta();
    let b = beta.beta();
    let ebjz = libm::exp(b * params.j_z);
    let ch = libm::cosh(2.0 * b * eta);
    let sh = libm::sinh(2.0 * b * eta);
    DerivedParams {
        eta,
        theta,
        u: ebjz * ch,
        v: -ebjz * sh,
        z: 2.0 * libm::exp(-b * params.j_z) + 2.0 * ebjz * ch,
    }
}

/// Builds the system Hamiltonian in the fixed basis.
///
/// `H = diag(Jz, -Jz, -Jz, Jz)` with inner coupling
/// `<10|H|01> = 2(J + i Dz)`, `<01|H|10> = 2(J - i Dz)`.
/// Spectrum: `{Jz, Jz, -Jz - 2 eta, -Jz + 2 eta}`.
pub fn build_hamiltonian(params: &ModelParams) -> Matrix4 {
    let mut h = linalg::zero();
    h[0][0] = C64::new(params.j_z, 0.0);
    h[3][3] = C64::new(params.j_z, 0.0);
    h[1][1] = C64::new(-params.j_z, 0.0);
    h[2][2] = C64::new(-params.j_z, 0.0);
    h[1][2] = C64::new(2.0 * params.j, 2.0 * params.d_z);
    h[2][1] = C64::new(2.0 * params.j, -2.0 * params.d_z);
    h
}

/// A 4x4 density matrix over the two-qubit basis.
///
/// Construction through [`DensityMatrix::new`] enforces Hermiticity
/// (residual <= 1e-12) and unit trace (residual <= 1e-9). Positivity is a
/// softer, numerical property; it is *reported* by [`validate_density`]
/// rather than gated here, so that slightly negative eigenvalues produced by
/// approximate dynamics stay visible instead of turning into panics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    m: Matrix4,
}

pub const TRACE_TOL: f64 = 1e-9;
pub const HERMITICITY_TOL: f64 = 1e-12;
pub const EIGENVALUE_TOL: f64 = 1e-9;

impl DensityMatrix {
    pub fn new(m: Matrix4) -> Result<Self> {
        let herm = linalg::hermiticity_residual(&m);
        let tr = linalg::trace(&m);
        let trace_residual = libm::hypot(tr.re - 1.0, tr.im);
        if herm > HERMITICITY_TOL || trace_residual > TRACE_TOL {
            return Err(Error::InvalidDensity {
                trace_residual,
                hermiticity_residual: herm,
            });
        }
        Ok(Self { m })
    }

    /// Wraps a matrix that is valid by construction (internal fast path).
    pub(crate) fn new_unchecked(m: Matrix4) -> Self {
        Self { m }
    }

    /// The maximally mixed state `I / 4`.
    pub fn maximally_mixed() -> Self {
        Self {
            m: linalg::mat_scale(&linalg::identity(), C64::new(0.25, 0.0)),
        }
    }

    /// Projector onto a basis state, `k` in `0..4` following the basis order.
    pub fn basis_state(k: usize) -> Self {
        let mut m = linalg::zero();
        m[k][k] = linalg::ONE;
        Self { m }
    }

    pub fn as_matrix(&self) -> &Matrix4 {
        &self.m
    }

    pub fn into_matrix(self) -> Matrix4 {
        self.m
    }

    pub fn trace(&self) -> C64 {
        linalg::trace(&self.m)
    }

    pub fn hermiticity_residual(&self) -> f64 {
        linalg::hermiticity_residual(&self.m)
    }

    /// Largest magnitude among components outside the X pattern
    /// (diagonal + anti-diagonal).
    pub fn x_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..4 {
            for j in 0..4 {
                let on_x = i == j || i + j == 3;
                if !on_x {
                    worst = worst.max(linalg::abs(self.m[i][j]));
                }
            }
        }
        worst
    }
}

/// Residual diagnostics for an arbitrary 4x4 matrix interpreted as a state.
///
/// Never fails; the three residuals are reported as measured and `valid`
/// summarizes them against the [`DensityMatrix`] tolerances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationReport {
    pub trace_residual: f64,
    pub hermiticity_residual: f64,
    pub min_eigenvalue: f64,
    pub valid: bool,
}

/// Measures trace, Hermiticity and positivity residuals.
///
/// The eigenvalue check is performed on the Hermitian part of the input, so
/// the report stays meaningful even for mildly non-Hermitian matrices.
pub fn validate_density(m: &Matrix4) -> ValidationReport {
    let tr = linalg::trace(m);
    let trace_residual = libm::hypot(tr.re - 1.0, tr.im);
    let hermiticity_residual = linalg::hermiticity_residual(m);
    let (vals, _) = linalg::eigh4(m);
    let min_eigenvalue = vals[0];
    ValidationReport {
        trace_residual,
        hermiticity_residual,
        min_eigenvalue,
        valid: trace_residual <= TRACE_TOL
            && hermiticity_residual <= HERMITICITY_TOL
            && min_eigenvalue >= -EIGENVALUE_TOL,
    }
}

/// Ground-shifted Boltzmann weights of the four levels.
///
/// `outer` belongs to each of `|00>, |11>` (energy `Jz`), `minus`/`plus` to
/// the inner doublet (`-Jz -+ 2 eta`), and `z` is their sum (the shifted
/// partition function). All values are in `(0, 1]`-ish range for any
/// `beta`, with full relative precision down to underflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct ShiftedWeights {
    pub outer: f64,
    pub minus: f64,
    pub plus: f64,
    pub z: f64,
}

pub(crate) fn shifted_weights(params: &ModelParams, beta: InverseTemperature) -> ShiftedWeights {
    let b = beta.beta();
    let eta = params.eta();
    let e_outer = params.j_z;
    let e_minus = -params.j_z - 2.0 * eta;
    let e_plus = -params.j_z + 2.0 * eta;
    let e0 = e_outer.min(e_minus);
    let outer = libm::exp(-b * (e_outer - e0));
    let minus = libm::exp(-b * (e_minus - e0));
    let plus = libm::exp(-b * (e_plus - e0));
    ShiftedWeights {
        outer,
        minus,
        plus,
        z: 2.0 * outer + minus + plus,
    }
}

/// Thermal (Gibbs) state `exp(-beta H) / Z`.
///
/// Evaluated in closed form through the block structure of `H`; exponentials
/// are shifted by the ground-state energy so arbitrarily low temperatures
/// stay finite. The result is exactly X-shaped: every entry outside the
/// diagonal and the inner anti-diagonal pair is identically zero.
pub fn gibbs_state(params: &ModelParams, beta: InverseTemperature) -> DensityMatrix {
    let theta = params.theta();
    let w = shifted_weights(params, beta);

    let p_outer = w.outer / w.z;
    let p_inner = (w.minus + w.plus) / (2.0 * w.z); //  u / Z
    let coh = -(w.minus - w.plus) / (2.0 * w.z); //  v / Z  (<= 0 for beta > 0)

    let phase = C64::new(libm::cos(theta), libm::sin(theta));
    let mut m = linalg::zero();
    m[0][0] = C64::new(p_outer, 0.0);
    m[3][3] = C64::new(p_outer, 0.0);
    m[1][1] = C64::new(p_inner, 0.0);
    m[2][2] = C64::new(p_inner, 0.0);
    m[1][2] = phase * coh;
    m[2][1] = phase.conj() * coh;
    DensityMatrix::new_unchecked(m)
}
