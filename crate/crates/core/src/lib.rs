//! Construction and verification of q-analogs of packing designs
//! (equivalently, constant-dimension subspace codes).
//!
//! The pipeline: prescribe a group of automorphisms, condense the incidence
//! matrix between `t`- and `k`-subspaces to orbits ([`kramer_mesner`]), pick
//! a conflict-free set of columns with a beam search ([`beam`]), optionally
//! refine the solution along a chain of subgroups, and expand the selected
//! orbits back into a block list that [`designs`] verifies.

pub mod beam;
pub mod cli;
pub mod designs;
pub mod error;
pub mod fixtures;
pub mod gfmat;
pub mod kramer_mesner;
pub mod orbits;

pub use error::{Error, ErrorCategory, Result};
pub use gfmat::{FieldOrder, FqMatrix, Space, Subspace};

/// Exact unbounded counts (Gaussian binomials, packing bounds).
pub type Count = num_bigint::BigUint;
