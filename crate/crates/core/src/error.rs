use thiserror::Error;

pub type Result<T> = std::result::Result<T, OnqError>;

#[derive(Debug, Error)]
pub enum OnqError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("spin I = {spin} has no quadrupole moment (requires I > 1/2)")]
    SpinTooSmall { spin: f64 },

    #[error("singular denominator: {0}")]
    Singularity(String),

    #[error("division by zero: {0}")]
    DivisionByZero(String),

    #[error("fit failure: {0}")]
    FitFailure(String),

    #[error("time step {dt:e} s exceeds the stability bound; use dt <= {required:e} s")]
    StepTooLarge { dt: f64, required: f64 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl OnqError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        OnqError::InvalidArgument(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        OnqError::Parse {
            line,
            message: msg.into(),
        }
    }

    /// True for refusals of the numerical machinery (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            OnqError::Singularity(_)
                | OnqError::DivisionByZero(_)
                | OnqError::FitFailure(_)
                | OnqError::StepTooLarge { .. }
        )
    }
}

pub(crate) fn csv_err(e: csv::Error) -> OnqError {
    let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => OnqError::Io(io),
        kind => OnqError::parse(line, format!("{kind:?}")),
    }
}
