// Copyright 2026 Spinbath Contributors
// SPDX-License-Identifier: Apache-2.0

//! Simulation core for a pair of qubits coupled through an anisotropic
//! Heisenberg XXZ exchange with a Dzyaloshinskii-Moriya (spin-orbit) term,
//! where each qubit additionally relaxes into its own bosonic bath with a
//! Lorentzian spectral density.
//!
//! The crate provides, in order of the processing pipeline:
//!
//! - [`model`] — physical parameters, the system Hamiltonian, the thermal
//!   (Gibbs) initial state, and density-matrix validity diagnostics;
//! - [`dynamics`] — the time-local master equation with the memory-retaining
//!   rate `R(t) = γ₀/2 (1 − e^{−γt})`, integrated either by an adaptive
//!   Runge-Kutta scheme or applied through the closed-form propagator of the
//!   population/inner-coherence block;
//! - [`observables`] — density-matrix spectra, the normalized open-system
//!   specific heat, Wootters concurrence, and entanglement of formation;
//! - [`sweep`] — deterministic parameter-grid evaluation producing plot-ready
//!   records, including the built-in figure presets.
//!
//! Everything operates on dense 4x4 complex matrices in the fixed product
//! basis `{|00>, |10>, |01>, |11>}`. All functions are pure and the crate is
//! `no_std` (`alloc` is used only for sweep result buffers), so grid points
//! may be evaluated concurrently without coordination.

#![no_std]
#![deny(unsafe_code)]
// Index loops are the natural register for fixed 4x4 matrix kernels.
#![allow(clippy::needless_range_loop)]
// Negated comparisons like `!(x >= 0.0)` are deliberate: they also trap NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod model;
pub mod observables;
pub mod sweep;

pub use error::{Error, Result};
pub use linalg::{Matrix4, C64};
pub use model::{
    build_hamiltonian, derived_params, gibbs_state, validate_density, DensityMatrix,
    DerivedParams, InverseTemperature, ModelParams, ValidationReport,
};
