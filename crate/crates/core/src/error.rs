use thiserror::Error;

/// Errors raised by construction, validation and numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("columns are not orthonormal (deviation {0:.3e})")]
    NotOrthonormal(f64),

    #[error("matrix is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("too many columns: {cols} orthonormal columns cannot live in dimension {rows}")]
    TooManyColumns { rows: usize, cols: usize },

    #[error("POVM completeness violated: |sum |m_k><m_k| - I|_F = {0:.3e}")]
    Incomplete(f64),

    #[error("POVM ket {index} has norm {norm} > 1")]
    KetNormTooLarge { index: usize, norm: f64 },

    #[error("outcome count {outcomes} is smaller than dimension {dim}")]
    TooFewOutcomes { outcomes: usize, dim: usize },

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid optimizer configuration: {0}")]
    InvalidConfig(String),

    #[error("eigensolver did not converge")]
    EigenNoConvergence,
}

pub type Result<T> = std::result::Result<T, Error>;
