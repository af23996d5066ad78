use onq_core::OnqError;
use thiserror::Error;

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Failure classes with a stable exit-code mapping.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("numerical refusal: {0}")]
    Numerical(String),

    #[error("I/O error: {0}")]
    Io(String),

    #[error("regression mismatch: {0}")]
    Regression(String),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    /// 0 success, 1 config, 2 numerical refusal, 3 I/O, 4 regression mismatch.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Io(_) => 3,
            CliError::Regression(_) => 4,
        }
    }

    /// Wraps a library error raised while processing `context`.
    pub fn from_core(context: &str, e: OnqError) -> Self {
        if e.is_numerical() {
            return CliError::Numerical(format!("{context}: {e}"));
        }
        match e {
            OnqError::Io(_) | OnqError::Parse { .. } => CliError::Io(format!("{context}: {e}")),
            _ => CliError::Config(format!("{context}: {e}")),
        }
    }

    pub fn io(path: &std::path::Path, e: std::io::Error) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }
}

/// `?`-friendly adaptor: `core_call().ctx("optical cavity")?`.
pub trait Context<T> {
    fn ctx(self, context: &str) -> CliResult<T>;
}

impl<T> Context<T> for onq_core::Result<T> {
    fn ctx(self, context: &str) -> CliResult<T> {
        self.map_err(|e| CliError::from_core(context, e))
    }
}
