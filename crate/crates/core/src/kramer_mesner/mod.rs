//! Plain and orbit-condensed incidence matrices, and the machinery for
//! refining a solution along a chain of subgroups.

mod fusion;
mod matrix;
pub(crate) mod solution;
pub mod zoom;

pub use fusion::{
    admissible_columns, complete_greedily, fuse_columns, fuse_matrix, local_modify, merge_rows, translate_solution,
    zoom_prune, Modification,
};
pub use matrix::{plain_matrix, reduced_matrix, reduced_matrix_from, IncidenceMatrix};
pub use solution::{coverage_vector, first_violation, is_feasible, Solution};
