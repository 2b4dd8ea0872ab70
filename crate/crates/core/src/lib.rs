//! Single-qubit density-matrix simulation with the standard depolarizing
//! channel and a two-operator reformulation of it, together with the
//! variational classifier and data plumbing used to exercise both.
//!
//! Matrix products are the unit of cost throughout: every routine that
//! multiplies 2×2 matrices accepts an optional [`MulCounter`] so the number of
//! products a given evaluation strategy needs can be measured exactly.

pub mod channels;
pub mod data;
pub mod error;
pub mod gates;
pub mod linalg2;
pub mod qml;

pub use channels::{ChannelKind, DensityMatrix, KrausSet, Observable, ValidityReport};
pub use error::{Error, Result};
pub use gates::Gate;
pub use linalg2::{Complex, Mat2, MulCounter};

/// Fixed 17-significant-digit float rendering used in every CSV.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}
