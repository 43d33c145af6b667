use thiserror::Error;

use crate::probes::StrategyId;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not unitary (max |U^dag U - I| = {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("matrix is not Hermitian (max |M - M^dag| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("invalid density operator: {0}")]
    InvalidDensity(String),

    #[error("eigenvalue {value:e} is below the clipping window")]
    NegativeEigenvalue { value: f64 },

    #[error("qubit index {index} out of range for {num_qubits} qubits")]
    QubitIndex { index: usize, num_qubits: usize },

    #[error("control and target must differ (both {0})")]
    SameControlTarget(usize),

    #[error("mixedness parameter p = {0} outside [0, 1]")]
    InvalidMixedness(f64),

    #[error("strategy {strategy} needs at least {min} qubits, got {n}")]
    TooFewQubits {
        strategy: StrategyId,
        n: usize,
        min: usize,
    },

    #[error("operation not defined for strategy {0}")]
    UnsupportedStrategy(StrategyId),

    #[error("{what}: {value} exceeds the compute limit {limit}")]
    ComputeLimit {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no sign change found on ({lo}, {hi})")]
    NoSignChange { lo: f64, hi: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
