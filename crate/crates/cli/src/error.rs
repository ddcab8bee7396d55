use thiserror::Error;
use unital_core::{Error as CoreError, ValidationReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_TOLERANCE: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at {path} (line {line}, column {column}): {message}")]
    Parse {
        /// Field path such as `kraus[1]`; empty for document-level errors.
        path: String,
        /// 1-based; 0 when the error was found after decoding.
        line: usize,
        column: usize,
        message: String,
    },
    #[error("could not read {path}: {message}")]
    Io { path: String, message: String },
    #[error("input is not a unital channel (tp residual {:e}, unital residual {:e})", .0.tp_residual, .0.unital_residual)]
    Validation(ValidationReport),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(CoreError),
}

impl CliError {
    pub(crate) fn parse(path: impl Into<String>, message: String) -> Self {
        CliError::Parse {
            path: path.into(),
            line: 0,
            column: 0,
            message,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Io { .. } | CliError::Usage(_) => EXIT_PARSE,
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Core(e) => match e {
                CoreError::ToleranceFailure(_)
                | CoreError::NonConvergence { .. }
                | CoreError::MultisetMismatch(_) => EXIT_TOLERANCE,
                _ => EXIT_VALIDATION,
            },
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse { .. } => "parse",
            CliError::Io { .. } => "io",
            CliError::Validation(_) => "validation",
            CliError::Usage(_) => "usage",
            CliError::Core(e) => match e {
                CoreError::ToleranceFailure(_) => "tolerance",
                CoreError::NonConvergence { .. } => "non_convergence",
                CoreError::MultisetMismatch(_) => "multiset_mismatch",
                CoreError::DimensionTooLarge { .. } => "dimension_too_large",
                _ => "invalid_input",
            },
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::NotUnitalChannel(report) => CliError::Validation(report),
            other => CliError::Core(other),
        }
    }
}
