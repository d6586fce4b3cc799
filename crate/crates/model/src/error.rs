use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("operator {op} is not diagonal in the readout basis at qubit {qubit}")]
    BasisMismatch { op: String, qubit: usize },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid pauli string {0:?}")]
    ParsePauli(String),
    #[error("no shots")]
    NoShots,
}
