use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown experiment `{0}`")]
    UnknownExperiment(String),
    #[error("invalid configuration: {0}")]
    Validation(String),
    #[error("cannot compare reports of `{a}` and `{b}`")]
    ExperimentMismatch { a: String, b: String },
    #[error("{context}: {message}")]
    Runtime { context: String, message: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl CliError {
    /// 2 for anything the user can fix in the invocation or inputs, 3 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::UnknownExperiment(_) | CliError::Validation(_) | CliError::ExperimentMismatch { .. } => 2,
            CliError::Runtime { .. } | CliError::Io { .. } => 3,
        }
    }

    pub fn io(path: impl AsRef<std::path::Path>, e: impl std::fmt::Display) -> Self {
        CliError::Io { path: path.as_ref().display().to_string(), message: e.to_string() }
    }
}

/// Wraps a module error with the step that raised it.
pub(crate) fn ctx<E: std::fmt::Display>(context: &'static str) -> impl Fn(E) -> CliError {
    move |e| CliError::Runtime { context: context.to_string(), message: e.to_string() }
}
