//! Dense complex linear algebra primitives shared by every other module:
//! density-matrix construction and validation, Hermitian eigensolves,
//! Schatten norms, partial traces, and the matrix exponential.

mod density;
mod expm;
mod matrix;

pub use density::{partial_trace_matrix, BlochParams, DensityMatrix, Subsystem};
pub use expm::matrix_exponential;
pub use matrix::ComplexMatrix;

use thiserror::Error;

/// Complex double-precision scalar used throughout the crate.
pub type C64 = num_complex::Complex<f64>;

/// Entrywise tolerance for Hermiticity checks on density matrices.
pub const TOL_HERM: f64 = 1e-10;
/// Tolerance on |Tr(rho) - 1|.
pub const TOL_TRACE: f64 = 1e-10;
/// Eigenvalues above this (negative) threshold are clamped to zero.
pub const TOL_EIGEN_NEG: f64 = -1e-10;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum LinalgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (max |M - M^+| = {deviation:.3e})")]
    NotHermitian { deviation: f64 },
    #[error("trace is not one (trace = {trace:.17e})")]
    TraceNotOne { trace: f64 },
    #[error("eigenvalue {value:.3e} below the PSD tolerance")]
    NegativeEigenvalue { value: f64 },
    #[error("Schatten order p = {p} is below 1")]
    InvalidOrder { p: f64 },
    #[error("dimension mismatch ({left} vs {right})")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix entries exceed the representable range")]
    Overflow,
    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFiniteEntry { row: usize, col: usize },
    #[error("entry count {found} does not match {rows}x{cols}")]
    EntryCount {
        rows: usize,
        cols: usize,
        found: usize,
    },
    #[error("Bloch parameter {name} = {value} out of range")]
    InvalidBloch { name: &'static str, value: f64 },
    #[error("empty state vector")]
    EmptyVector,
}

/// `[a, b] = ab - ba`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    &(a * b) - &(b * a)
}

/// `{a, b} = ab + ba`.
pub fn anticommutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    &(a * b) + &(b * a)
}

/// Pauli sigma_x.
pub fn sigma_x() -> ComplexMatrix {
    ComplexMatrix::from_real_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])
}

/// Pauli sigma_y.
pub fn sigma_y() -> ComplexMatrix {
    let i = C64::new(0.0, 1.0);
    ComplexMatrix::from_slice(2, 2, &[C64::new(0.0, 0.0), -i, i, C64::new(0.0, 0.0)])
}

/// Pauli sigma_z.
pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::from_real_slice(2, 2, &[1.0, 0.0, 0.0, -1.0])
}

/// Uniform grid of `n >= 2` points over `[a, b]`, endpoints exact.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "linspace needs at least two points");
    let step = (b - a) / (n - 1) as f64;
    let mut out: Vec<f64> = (0..n).map(|k| a + k as f64 * step).collect();
    out[n - 1] = b;
    out
}
