use atomarray_model::Violation;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StabilizerError {
    #[error("rotation angle {angle} is not a multiple of pi/2")]
    NonCliffordAngle { angle: f64 },
    #[error("unknown atom id {0}")]
    UnknownAtom(u32),
    #[error("measurement layer passed to apply_layer")]
    MeasurementLayer,
    #[error("invalid circuit: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidCircuit(Vec<Violation>),
    #[error("invalid noise model: {0}")]
    InvalidNoise(String),
    #[error("circuit has no final measurement")]
    MissingMeasurement,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Model(#[from] atomarray_model::ModelError),
}
