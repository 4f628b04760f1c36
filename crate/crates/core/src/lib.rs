//! Exact-arithmetic geometry of convex cones.
//!
//! The crate computes face lattices, dual cones, exposedness and niceness
//! certificates for polyhedral cones and for a small grammar of cones built
//! from positive semidefinite blocks, halfspaces and rays. A cone `K` is
//! *nice* when `K* + F^perp` is closed for every face `F`; every verdict
//! produced here is backed by exact rational witnesses.

pub mod certify;
pub mod closedness;
pub mod error;
pub mod linalg;
pub mod polyhedral;
pub mod structured;

pub use error::{Error, Result};
pub use linalg::{psd_check, Metric, PsdVerdict, QVec, Rat, Subspace, SymMat};
pub use polyhedral::{FaceLattice, PolyCone, PolyFace};

