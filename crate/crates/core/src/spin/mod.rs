//! Spinors of `Spin(n,n)` on the Patterson-Walker metric.
//!
//! `S_+` is the even part of `Lambda(R^n)` and `S_-` the odd part for every
//! `n`; `chi = 1` lies in `S_+`.

mod clifford;
mod fields;
mod surd;

pub use clifford::{surd_rank, Chirality, CliffordModule, Spinor};
pub use fields::{
    chi_projector, dirac, eta_checks, eta_equation_residual, eta_equation_rhs, eta_spinor, etacheck_projector,
    lie_derivative_spinor, make_chi_etacheck, projector_identities, purity_kernel_dim, spin_covariant_derivative,
    twistor_residual, EtaReport, ProjectorReport,
};
pub use surd::Surd;
