use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("operator is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("operator is not a density operator: {0}")]
    NotDensity(String),

    #[error("channel is not trace preserving (max deviation of sum K^dag K from I is {deviation:e})")]
    NotTracePreserving { deviation: f64 },

    #[error("channel is not unital (max deviation of E(I) from I is {deviation:e})")]
    NotUnital { deviation: f64 },

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("invalid stochastic matrix: {0}")]
    InvalidStochastic(String),

    #[error("measurement is not incoherent (max off-diagonal {off_diagonal:e})")]
    NotIncoherent { off_diagonal: f64 },

    #[error("unsupported scale: {0}")]
    UnsupportedScale(String),

    #[error("dimension {dim} exceeds the configured cap of {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("invalid Kraus rank {rank} for dimension {dim} (need 1 <= rank <= {max})")]
    InvalidRank { rank: usize, dim: usize, max: usize },

    #[error("POVM normalisation failed: total operator is singular (min eigenvalue {min_eigenvalue:e})")]
    SingularTotal { min_eigenvalue: f64 },

    #[error("generator produced an invalid instance: {0}")]
    ConstructionFailed(String),

    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
