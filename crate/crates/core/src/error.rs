use thiserror::Error;

/// Errors raised by simulation, synthesis and the experiment driver.
#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count {0} outside supported range 1..=6")]
    QubitCount(usize),
    #[error("invalid basis label {label:?} for {n} qubits")]
    BadLabel { label: String, n: usize },
    #[error("qubit index {index} out of range for {n} qubits")]
    QubitIndex { index: usize, n: usize },
    #[error("two-qubit gate requires distinct qubits, got {0} twice")]
    RepeatedQubit(usize),
    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },
    #[error("invalid distribution: {0}")]
    Distribution(String),
    #[error("invalid oracle: {0}")]
    Oracle(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("confusion matrix is singular")]
    Singular,
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
