// Copyright 2026 Spinbath Contributors
// SPDX-License-Identifier: Apache-2.0

//! Error type shared across the crate.

use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Failure modes of the simulation core.
///
/// Every variant carries enough context to identify the violated contract
/// without string allocation, so the type stays usable in `no_std` callers.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An input violated a documented domain invariant (e.g. `gamma > 0`).
    Domain {
        /// Name of the offending quantity.
        what: &'static str,
        /// The invariant that was violated, stated as in the docs.
        invariant: &'static str,
        /// The value that was supplied.
        value: f64,
    },
    /// A matrix expected to be Hermitian exceeded the residual tolerance.
    NonHermitian { residual: f64, tolerance: f64 },
    /// A density matrix failed validation on entry to an operation.
    InvalidDensity {
        trace_residual: f64,
        hermiticity_residual: f64,
    },
    /// The state lies outside the sector handled by the closed-form
    /// propagator (non-zero components besides the populations and the
    /// inner coherences). Use `dynamics::evolve_ode` for such states.
    UnsupportedSector { max_unsupported: f64 },
    /// The adaptive integrator could not make progress.
    StepSizeUnderflow { t_reached: f64 },
    /// An intermediate quantity left its numerically meaningful range.
    Numerical {
        context: &'static str,
        value: f64,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain {
                what,
                invariant,
                value,
            } => write!(f, "domain error: {what} = {value} violates `{invariant}`"),
            Error::NonHermitian {
                residual,
                tolerance,
            } => write!(
                f,
                "matrix is not Hermitian: residual {residual:.3e} exceeds {tolerance:.1e}"
            ),
            Error::InvalidDensity {
                trace_residual,
                hermiticity_residual,
            } => write!(
                f,
                "invalid density matrix: |tr - 1| = {trace_residual:.3e}, \
                 Hermiticity residual = {hermiticity_residual:.3e}"
            ),
            Error::UnsupportedSector { max_unsupported } => write!(
                f,
                "state has components of magnitude {max_unsupported:.3e} outside the \
                 population/inner-coherence sector; use evolve_ode for general states"
            ),
            Error::StepSizeUnderflow { t_reached } => write!(
                f,
                "integrator step size underflowed at t = {t_reached:.6e}"
            ),
            Error::Numerical { context, value } => {
                write!(f, "numerical failure in {context}: offending value {value:.3e}")
            }
        }
    }
}

impl core::error::Error for Error {}
