use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report.
///
/// Variants fall into three families, mirrored by the CLI exit codes:
/// hypothesis violations (the input does not describe a Fano variety of the
/// supported kind), malformed input, and internal consistency failures that
/// indicate an arithmetic or convention bug.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("series or class is not invertible: constant term is zero")]
    NotInvertible,
    #[error("truncation mismatch: {left} vs {right}")]
    TruncationMismatch { left: usize, right: usize },

    #[error("not Fano: index d_0 = {index} must be positive")]
    NotFano { index: i64 },
    #[error("not a variety: dimension {dim} must be positive")]
    NotAVariety { dim: i64 },
    #[error("branch degree {0} is odd")]
    OddBranchDegree(u64),
    #[error("invalid variety: {0}")]
    InvalidVariety(String),

    #[error("fan is not of Picard rank one: relation space has dimension {kernel_dim}")]
    NotRankOne { kernel_dim: usize },
    #[error("fan cannot be complete: ray relation has mixed signs")]
    NotComplete,
    #[error("fan is not simplicial")]
    NotSimplicial,
    #[error("invalid fan: {0}")]
    InvalidFan(String),

    #[error("operator has z^{power} below the series support")]
    LaurentUnderflow { power: i64 },
    #[error("indicial polynomial vanishes at m = {m}")]
    ResonantIndicialRoot { m: u64 },
    #[error("term z^{power} is not divisible by (D{shift:+})^{exponent}; remainder {remainder}")]
    NotLeftDivisible {
        power: i64,
        shift: i64,
        exponent: u32,
        remainder: String,
    },
    #[error("operator has no constant z-term with nonzero leading part")]
    DegenerateOperator,

    #[error("topological recursion needs exactly 3 insertions with a descendant in the first")]
    TrrNotApplicable,
    #[error("counting matrices are defined for threefolds, got dimension {dim}")]
    NotAThreefold { dim: usize },

    #[error("D3 operator is not divisible by D: {0}")]
    D3NotDivisible(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("malformed input: {0}")]
    Malformed(String),
}

impl Error {
    /// Whether the error reports a violated mathematical hypothesis (as opposed
    /// to malformed input or an internal failure).
    pub fn is_hypothesis_violation(&self) -> bool {
        matches!(
            self,
            Error::NotFano { .. }
                | Error::NotAVariety { .. }
                | Error::ResonantIndicialRoot { .. }
                | Error::NotRankOne { .. }
                | Error::NotComplete
                | Error::NotSimplicial
                | Error::NotAThreefold { .. }
        )
    }

    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::InternalInconsistency(_) | Error::D3NotDivisible(_)
        )
    }
}
