use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported matrix dimension {0} (only 2 and 4 are supported)")]
    Dimension(usize),

    #[error("expected {expected} entries, got {got}")]
    EntryCount { expected: usize, got: usize },

    #[error("matrix is not Hermitian: max |M[i][j] - conj(M[j][i])| = {asymmetry:e}")]
    NotHermitian { asymmetry: f64 },

    #[error("trace {trace} deviates from 1 by more than {tol:e}")]
    Trace { trace: f64, tol: f64 },

    #[error("state is not positive semidefinite: minimum eigenvalue {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("invalid parameter {name} = {value}: {reason}")]
    Parameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid time grid: {0}")]
    Grid(String),

    #[error("integration accuracy lost at t = {time}: {detail}; use a smaller dt")]
    Integration { time: f64, detail: String },

    #[error("{0}")]
    Validation(String),
}
