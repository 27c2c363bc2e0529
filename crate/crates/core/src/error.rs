use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid dimension {0}: {1}")]
    InvalidDimension(usize, &'static str),

    #[error("non-finite value at index {0}")]
    NonFinite(usize),

    #[error("phase gate index must be at least 1, got {0}")]
    InvalidPhaseIndex(i64),

    #[error("negative divisor exponent {exponent} for target {target}, control {control}")]
    NegativeExponent {
        exponent: i64,
        target: usize,
        control: usize,
    },

    #[error("invalid qubit placement: target {target}, control {control:?} on {n_qubits} qubits")]
    InvalidPlacement {
        target: usize,
        control: Option<usize>,
        n_qubits: usize,
    },

    #[error("{n_qubits} qubits exceeds the dense realization cap of {cap}")]
    CapExceeded { n_qubits: usize, cap: usize },

    #[error("invalid tolerance {0}")]
    InvalidTolerance(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Parse(#[from] crate::gates::ParseError),
}
