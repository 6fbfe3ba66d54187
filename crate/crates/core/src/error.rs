use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("size error: {0}")]
    Size(String),

    #[error("qubit index {index} out of range for {num_qubits} qubits")]
    Index { index: usize, num_qubits: usize },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("domain error: component {index} = {value} lies outside [-1, 1]")]
    OutOfBounds { index: usize, value: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("data error: {0}")]
    Data(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("unbalanced classes: {class0} points in class 0 vs {class1} in class 1; balance the training set first (datasets::balance_classes)")]
    Unbalanced { class0: usize, class1: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
