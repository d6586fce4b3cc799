use atomarray_model::ModelError;
use atomarray_stabilizer::StabilizerError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CodesError {
    #[error("layout does not match the graph: {0}")]
    LayoutMismatch(String),
    #[error("invalid code definition: {0}")]
    InvalidCode(String),
    #[error("unknown code {0:?}")]
    UnknownCode(String),
    #[error("syndrome has {got} entries, code has {expected} stabilizers")]
    InvalidSyndromeLength { expected: usize, got: usize },
    #[error("code {0:?} has no decoder")]
    NoDecoder(String),
    #[error("no matching explains the syndrome")]
    Unmatchable,
    #[error("missing shots for the {0:?} setting")]
    MissingSetting(crate::compile::Setting),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Stabilizer(#[from] StabilizerError),
}
