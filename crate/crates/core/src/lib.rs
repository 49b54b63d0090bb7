//! Two-photon scattering by a giant atom in a one-dimensional waveguide.
//!
//! A two-level emitter couples to a chiral-free waveguide at `N ≥ 1` points.
//! The crate implements the analytic scattering theory in units
//! `ħ = v_g = 1` with decay rate `Γ = V²`:
//!
//! * [`model`] — parameters, geometry and interference-renormalised rates.
//! * [`single_photon`] — exact and Markovian single-photon amplitudes.
//! * [`two_photon_eigen`] — Bethe-ansatz and bound two-excitation eigenstates.
//! * [`smatrix`] — e-mode and R/L-mode two-photon S-matrix elements.
//! * [`observables`] — real-space output maps and momentum-space kernels.
//! * [`oracle`] — independent quadrature and lattice-dynamics checks.
//! * [`spec`] — grid, geometry and configuration text formats.

// Range checks are written `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod model;
pub mod observables;
pub mod oracle;
pub mod single_photon;
pub mod smatrix;
pub mod spec;
pub mod two_photon_eigen;

pub use error::{Error, Result};
pub use model::{AtomGeometry, AtomParams, EffectiveRates, Regime};
