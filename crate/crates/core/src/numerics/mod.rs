//! Dense complex linear algebra with fixed tolerances.
//!
//! Matrices are plain `nalgebra` dense matrices over `Complex64`. The
//! decompositions here add the things the rest of the crate leans on:
//! sorted spectra, clamped PSD square roots, polar factors and a
//! deterministic unitary completion.

mod linalg;
mod random;

pub use linalg::*;
pub use random::*;

use nalgebra::{DMatrix, DVector};
pub use num_complex::Complex64;

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

/// Hermiticity and unitarity checks (max-entry norm).
pub const HERMITIAN_TOL: f64 = 1e-9;
pub const UNITARY_TOL: f64 = 1e-9;
/// Eigenvalues in `[PSD_FLOOR, 0)` are treated as rounding noise and clamped.
pub const PSD_FLOOR: f64 = -1e-9;
pub const RECONSTRUCTION_TOL: f64 = 1e-8;
/// Smallest singular value accepted by [`polar_unitary`].
pub const RANK_TOL: f64 = 1e-12;

#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}
