use thiserror::Error;

/// Every fallible operation in the crate reports one of these.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("wire {wire} out of range for a {num_wires}-wire register")]
    WireOutOfRange { wire: usize, num_wires: usize },

    #[error("gate wires must be distinct, got ({0}, {0})")]
    RepeatedWire(usize),

    #[error("matrix is not unitary (max deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("partial trace needs a nonempty set of kept wires")]
    EmptyKeep,

    #[error("wire {0} listed more than once")]
    DuplicateWire(usize),

    #[error("shot count must be positive")]
    ZeroShots,

    #[error("probability list is all zero")]
    AllZero,

    #[error("probability list has a negative entry {0}")]
    NegativeProbability(f64),

    #[error("invalid probability {0}")]
    InvalidProbability(f64),

    #[error("confusion matrix for wire {0} is not column stochastic")]
    NotStochastic(usize),

    #[error("confusion matrix for wire {0} is singular")]
    SingularConfusion(usize),

    #[error("folding scale must be an odd positive integer, got {0}")]
    InvalidScale(u32),

    #[error("extrapolation needs at least two distinct scales")]
    InsufficientScales,

    #[error("invalid subsystem: {0}")]
    InvalidSubsystem(String),

    #[error("expected {expected} angle pairs, got {got}")]
    AngleCount { expected: usize, got: usize },

    #[error("{0} spins is too many for a dense operator")]
    TooLarge(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
