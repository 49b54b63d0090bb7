//! Independent numerical oracles: adaptive quadrature checks of the
//! two-photon identities and tight-binding lattice wave-packet dynamics.

pub mod checks;
pub mod lattice;
pub mod quadrature;

pub use checks::{
    flux_closure_r, fourier_consistency_e, quad_bound_norm, quad_overlap_bf, unitarity_e,
    verify_bound_kernel_quadrature, FourierReport, KernelReport, UnitarityReport,
};
