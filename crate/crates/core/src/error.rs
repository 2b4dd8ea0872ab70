use thiserror::Error;

use crate::channels::ValidityReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("depolarization rate {0} is outside [0, 1]")]
    InvalidRate(f64),

    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("not a valid density matrix: {0:?}")]
    InvalidDensity(ValidityReport),

    #[error("Kraus operators are incomplete (deviation {deviation:e})")]
    IncompleteKraus { deviation: f64 },

    #[error("expectation value has imaginary part {imag:e}")]
    NonRealExpectation { imag: f64 },

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("row {row}: {message}")]
    Row { row: usize, message: String },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}
