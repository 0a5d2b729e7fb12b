use thiserror::Error;

use crate::dynamics::BlowUp;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("invalid nonlinearity: {0}")]
    InvalidNonlinearity(String),

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("quadrature: {0}")]
    Quadrature(String),

    #[error("non-finite state detected at t = {}", .0.time)]
    BlowUp(Box<BlowUp>),

    #[error("Picard iteration stopped contracting after {iterations} iterations (shrink T)")]
    NonContraction { iterations: usize, differences: Vec<f64> },

    #[error("Picard iteration did not reach tolerance in {iterations} iterations")]
    MaxIterations { iterations: usize, differences: Vec<f64> },

    #[error("identity check: {0}")]
    Identity(String),

    #[error("oracle: {0}")]
    Oracle(String),

    #[error("field file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
