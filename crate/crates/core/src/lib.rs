//! Quantum mechanics with diagonalizable non-hermitian operators that have a
//! real spectrum.
//!
//! The crate builds biorthogonal eigensystems, the metric operator they
//! induce, the similarity map to an isospectral hermitian operator, metric
//! consistent probabilities, and time evolution for moving metrics including
//! the inertial correction term.

pub mod error;
pub mod exec;
pub mod matrixcore;
pub mod biortho;
pub mod measurement;
pub mod dynamics;
pub mod models;
pub mod suite;
pub mod cli;

pub use error::{Error, Result};
pub use matrixcore::{ComplexMatrix, Spectrum};
pub use num_complex::Complex64;
