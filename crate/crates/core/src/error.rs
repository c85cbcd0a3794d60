use thiserror::Error;

/// Errors produced by construction, verification and decoding routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: expected {expected}, found {found}")]
    DimensionMismatch {
        op: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("matrix text parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("construction constraint violated: {0}")]
    Constraint(String),

    #[error("unknown masking matrix `{0}`")]
    UnknownMask(String),

    #[error("unknown code `{0}`")]
    UnknownCode(String),

    #[error("rank deficient: expected rank {expected}, measured {measured}")]
    RankDeficient { expected: usize, measured: usize },

    #[error("encoder output {row} violates the parity checks")]
    EncoderInconsistent { row: usize },

    #[error("vector is not a member of the required code ({0})")]
    NotInCode(&'static str),

    #[error("known bits are inconsistent with the parity checks{}", .check.map(|c| format!(" (check {c})")).unwrap_or_default())]
    InconsistentErasures { check: Option<usize> },

    #[error("parity-check matrices {a} and {b} do not define the same code")]
    NotEquivalent { a: usize, b: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
