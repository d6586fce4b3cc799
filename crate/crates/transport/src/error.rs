use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum TransportError {
    #[error("invalid trap parameters: {0}")]
    InvalidTraps(String),
    #[error("move duration must be positive, got {0} us")]
    NonPositiveDuration(f64),
    #[error("AOD {axis} {index} would cross its neighbour ({detail})")]
    OrderingViolation { axis: &'static str, index: u32, detail: String },
    #[error("atoms on AOD {axis} {index} disagree on its position")]
    ToneNotShared { axis: &'static str, index: u32 },
    #[error("atom {0} is missing from one of the layouts")]
    MissingAtom(u32),
    #[error("atom {0} changes trap kind or AOD row/column between layouts")]
    MembershipChanged(u32),
    #[error("static atom {0} cannot move")]
    StaticMoved(u32),
    #[error("graph cannot be split into static and mobile sublattices")]
    NonBipartite,
    #[error("no layout found: {0}")]
    NoLayout(String),
    #[error("csv: {0}")]
    Csv(String),
}

impl From<csv::Error> for TransportError {
    fn from(e: csv::Error) -> Self {
        TransportError::Csv(e.to_string())
    }
}
