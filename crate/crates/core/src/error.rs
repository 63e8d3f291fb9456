use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the library. Each variant maps to one of the CLI exit
/// categories through [`Error::category`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("field order {0} is not a prime")]
    NotPrime(u32),

    #[error("ambient space F_{q}^{n} does not fit the 64-bit vector encoding")]
    SpaceTooLarge { q: u32, n: usize },

    #[error("empty subspace not representable as a block")]
    EmptySubspace,

    #[error("degenerate block: columns {0:?} are linearly dependent")]
    DegenerateBlock(Vec<u64>),

    #[error("out of range: {value} is not below {limit}")]
    OutOfRange { value: u64, limit: u128 },

    #[error("parameter mismatch: {0}")]
    ParameterMismatch(String),

    #[error("enumeration cap exceeded: {count} subspaces requested, cap is {cap}")]
    EnumerationCap { count: String, cap: u64 },

    #[error("group order cap exceeded: {partial} elements found so far, cap is {cap}")]
    OrderCap { partial: usize, cap: usize },

    #[error("generator {index} is singular over F_{q}")]
    SingularGenerator { index: usize, q: u32 },

    #[error("the first group is not a subgroup of the second")]
    NotSubgroup,

    #[error("no element of order {0} in the group")]
    NoElementOfOrder(u64),

    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("fusion violates incidence preservation: {0}")]
    FusionViolation(String),

    #[error("solution is infeasible: row {row} is covered {count} times")]
    Infeasible { row: usize, count: u64 },

    #[error("representatives {first} and {second} lie in the same orbit")]
    SameOrbit { first: usize, second: usize },

    #[error("design has {size} blocks, above the pairwise threshold {threshold}; use coverage verification")]
    PairwiseThreshold { size: usize, threshold: usize },

    #[error("design is not a valid packing ({violations} violations)")]
    InvalidDesign { violations: usize },

    #[error("{failed} of {total} checks failed")]
    ChecksFailed { failed: usize, total: usize },

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Coarse classification used for process exit statuses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorCategory {
    InvalidInput,
    VerificationFailure,
    ResourceCap,
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::EnumerationCap { .. } | Error::OrderCap { .. } | Error::PairwiseThreshold { .. } => {
                ErrorCategory::ResourceCap
            }
            Error::InvalidDesign { .. } | Error::ChecksFailed { .. } => ErrorCategory::VerificationFailure,
            _ => ErrorCategory::InvalidInput,
        }
    }

    pub(crate) fn mismatch(msg: impl Into<String>) -> Self {
        Error::ParameterMismatch(msg.into())
    }
}
