//! Dense complex linear algebra: the matrix carrier, LU, hermitian and
//! general eigensolvers, spectral matrix functions and commutator series.

mod algebra;
mod eigen;
mod hermitian;
pub mod io;
mod lu;
mod matrix;
mod spectrum;
pub mod vector;

pub use algebra::{
    anticommutator, bch_transform, bch_transform_capped, bch_transform_converged, commutator,
    DEFAULT_BCH_CAP,
};
pub use eigen::{
    eig_decompose, eig_general, eigenvalues, fix_phase, lowest_eigenpairs, schur, spectral_norm,
    EigenDecomposition, Schur,
};
pub use hermitian::{herm_matrix_function, hermitian_eigen, HermitianEigen, MatrixFunction};
pub use lu::{invert, solve_matrix, Lu};
pub use matrix::ComplexMatrix;
pub use spectrum::{canonical_order, Spectrum};
pub use vector::Bra;

/// Default relative tolerance used across the crate.
pub const DEFAULT_TOL: f64 = 1e-10;
