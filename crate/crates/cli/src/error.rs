use std::path::PathBuf;
use std::process::ExitCode;

use nls_conserve::Error;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Output { path: PathBuf, source: std::io::Error },

    #[error(transparent)]
    Run(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidGrid(_)
            | Error::GridMismatch
            | Error::InvalidField(_)
            | Error::InvalidNonlinearity(_)
            | Error::InvalidConfig(_)
            | Error::Oracle(_)
            | Error::Format(_) => CliError::Config(e.to_string()),
            other => CliError::Run(other),
        }
    }
}

impl CliError {
    pub fn output(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Output { path, source }
    }

    /// 2 for unusable configuration or output paths, 3 for blow-up, 1 for
    /// any other failure during a run.
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Config(_) | CliError::Output { .. } => 2,
            CliError::Run(Error::BlowUp(_)) => 3,
            CliError::Run(_) => 1,
        })
    }
}
