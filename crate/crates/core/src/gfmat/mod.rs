//! Prime-field linear algebra and the canonical subspace representation.

mod echelon;
pub mod enumerate;
pub mod field;
pub mod gaussian;
pub mod matrix;
pub mod subspace;
pub mod text;

pub use enumerate::{enumerate_subspaces, enumerate_subspaces_capped, subspaces_within, SubLattice, DEFAULT_ENUMERATION_CAP};
pub use field::{FieldOrder, Space};
pub use gaussian::{gaussian_binomial, gaussian_binomial_in, packing_bound_in};
pub use matrix::{FqMatrix, LinearMap};
pub use subspace::{canonicalize, contains, decode_tuple, encode_tuple, intersection_dim, subspace_distance, Encoding, Subspace};
