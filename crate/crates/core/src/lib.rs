//! Exact computational laboratory for Patterson-Walker metrics.
//!
//! A torsion-free affine connection on an `n`-manifold `M` induces a split
//! signature metric on `T*M`. This crate builds that metric with exact
//! rational arithmetic and checks its curvature, spinor, Einstein-scale and
//! symmetry identities by direct computation.

#![allow(clippy::needless_range_loop)]

pub mod einstein;
pub mod error;
pub mod fixtures;
pub mod par;
pub mod projective;
pub mod pwext;
pub mod spin;
pub mod symcore;
pub mod symmetry;

pub use error::{Error, Result};
