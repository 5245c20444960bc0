use thiserror::Error;

use crate::index::MultiIndex;

/// Errors raised by every operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WittError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("ring mismatch: {left} vs {right}")]
    RingMismatch { left: String, right: String },

    #[error("non-exact division{}", .index.as_ref().map(|i| format!(" at index {i}")).unwrap_or_default())]
    NonExactDivision { index: Option<MultiIndex> },

    #[error("ring {0} is not a field")]
    NotAField(String),

    #[error("ring {0} is not a Q-algebra")]
    NotQAlgebra(String),

    #[error("unsupported ring {ring} for {operation}")]
    UnsupportedRing { ring: String, operation: String },

    #[error("index {0} is zero")]
    ZeroIndex(MultiIndex),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("index {index} is not in the set")]
    IndexNotInSet { index: MultiIndex },

    #[error("not a truncation set: {k}*{j} is a member but {j} is not")]
    NotTruncationSet { k: u32, j: MultiIndex },

    #[error("not a downward-closed window: {0}")]
    NotWindow(String),

    #[error("index set mismatch")]
    SetMismatch,

    #[error("constant term must be {expected}")]
    ConstantTerm { expected: &'static str },

    #[error("bad split {split} of multidegree {total}")]
    BadSplit { split: MultiIndex, total: MultiIndex },

    #[error("dual element has mixed multidegrees")]
    MixedMultidegree,

    #[error("not in the subalgebra generated by the C_I: rank {rank} of {dimension}")]
    NotInSubalgebra { rank: usize, dimension: usize },

    #[error("no solution to the linear system")]
    NoSolution,

    #[error("universal polynomial for index {index} has a non-integer coefficient")]
    IntegralityFailure { index: MultiIndex },

    #[error("io error: {0}")]
    Io(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Malformed,
    Domain,
    Internal,
}

impl WittError {
    pub fn class(&self) -> ErrorClass {
        use WittError::*;
        match self {
            Parse(_) | DimensionMismatch { .. } | ZeroIndex(_) | NotTruncationSet { .. } | NotWindow(_) => {
                ErrorClass::Malformed
            }
            IntegralityFailure { .. } | Internal(_) | Io(_) => ErrorClass::Internal,
            _ => ErrorClass::Domain,
        }
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        WittError::Parse(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, WittError>;
