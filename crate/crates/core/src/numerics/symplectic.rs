//! Symplectic invariants of two-mode covariance matrices.
//!
//! Covariances are 4×4, ordered `(q₁, p₁, q₂, p₂)`, with vacuum variance 1/2
//! per quadrature and partitioned as `V = [[A, C], [Cᵀ, B]]`.

use super::matrix::RealMatrix;
use crate::error::{Error, Result};

/// Largest tolerated negative discriminant (relative to `max(1, Σ²)`).
pub const DISCRIMINANT_TOL: f64 = 1e-9;
/// Negative radicands down to this value are clamped to zero.
pub const RADICAND_CLAMP: f64 = 1e-12;

fn blocks(v: &RealMatrix) -> (f64, f64, f64, f64) {
    assert_eq!((v.rows(), v.cols()), (4, 4), "two-mode covariance must be 4x4");
    let a = v.block(0, 0, 2, 2).det2();
    let b = v.block(2, 2, 2, 2).det2();
    let c = v.block(0, 2, 2, 2).det2();
    (a, b, c, det4(v))
}

fn smallest(sigma: f64, det: f64) -> Result<f64> {
    let disc = sigma * sigma - 4.0 * det;
    if disc < -DISCRIMINANT_TOL * sigma.powi(2).max(1.0) {
        return Err(Error::InvalidCovariance(format!("negative discriminant {disc:e}")));
    }
    let root = disc.max(0.0).sqrt();
    // ν₋² = (Σ − √disc)/2, evaluated as 2 det/(Σ + √disc) to avoid cancellation
    let mut inner = if sigma + root > 0.0 { 2.0 * det / (sigma + root) } else { (sigma - root) / 2.0 };
    if inner < 0.0 {
        if inner < -RADICAND_CLAMP {
            return Err(Error::InvalidCovariance(format!("negative radicand {inner:e}")));
        }
        inner = 0.0;
    }
    Ok(inner.sqrt())
}

/// Smallest symplectic eigenvalue of the partial transpose of `v`.
///
/// Uses `Σ̃ = det A + det B − 2 det C`; the transposition is carried by the
/// sign of the `det C` term, so `v` is passed untransposed.
pub fn symplectic_nu(v: &RealMatrix) -> Result<f64> {
    let (a, b, c, det) = blocks(v);
    smallest(a + b - 2.0 * c, det)
}

/// Both symplectic eigenvalues `(ν₋, ν₊)` of `v` itself (no transposition).
pub fn symplectic_eigenvalues(v: &RealMatrix) -> Result<(f64, f64)> {
    let (a, b, c, det) = blocks(v);
    let sigma = a + b + 2.0 * c;
    let lo = smallest(sigma, det)?;
    let hi = ((sigma + (sigma * sigma - 4.0 * det).max(0.0).sqrt()) / 2.0).sqrt();
    Ok((lo, hi))
}

/// Which mode's momentum changes sign under partial transposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransposedMode {
    First,
    Second,
}

/// Explicit partial transpose: flips the sign of one mode's momentum.
pub fn partial_transpose(v: &RealMatrix, mode: TransposedMode) -> RealMatrix {
    let p = match mode {
        TransposedMode::First => 1,
        TransposedMode::Second => 3,
    };
    let mut t = v.clone();
    for k in 0..4 {
        if k != p {
            t[(p, k)] = -t[(p, k)];
            t[(k, p)] = -t[(k, p)];
        }
    }
    t
}

/// Determinant of a 4×4 matrix by cofactor expansion over 2×2 minors.
pub fn det4(m: &RealMatrix) -> f64 {
    let e = |i: usize, j: usize| m[(i, j)];
    let s0 = e(0, 0) * e(1, 1) - e(1, 0) * e(0, 1);
    let s1 = e(0, 0) * e(1, 2) - e(1, 0) * e(0, 2);
    let s2 = e(0, 0) * e(1, 3) - e(1, 0) * e(0, 3);
    let s3 = e(0, 1) * e(1, 2) - e(1, 1) * e(0, 2);
    let s4 = e(0, 1) * e(1, 3) - e(1, 1) * e(0, 3);
    let s5 = e(0, 2) * e(1, 3) - e(1, 2) * e(0, 3);
    let c5 = e(2, 2) * e(3, 3) - e(3, 2) * e(2, 3);
    let c4 = e(2, 1) * e(3, 3) - e(3, 1) * e(2, 3);
    let c3 = e(2, 1) * e(3, 2) - e(3, 1) * e(2, 2);
    let c2 = e(2, 0) * e(3, 3) - e(3, 0) * e(2, 3);
    let c1 = e(2, 0) * e(3, 2) - e(3, 0) * e(2, 2);
    let c0 = e(2, 0) * e(3, 1) - e(3, 0) * e(2, 1);
    s0 * c5 - s1 * c4 + s2 * c3 + s3 * c2 - s4 * c1 + s5 * c0
}

/// Covariance of a two-mode squeezed vacuum with squeezing `r`.
pub fn two_mode_squeezed(r: f64) -> RealMatrix {
    let (a, c) = (0.5 * (2.0 * r).cosh(), 0.5 * (2.0 * r).sinh());
    RealMatrix::from_rows([[a, 0.0, c, 0.0], [0.0, a, 0.0, -c], [c, 0.0, a, 0.0], [0.0, -c, 0.0, a]])
}
