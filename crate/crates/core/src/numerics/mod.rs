//! Small dense kernels: LU solves, 2-D Newton, characteristic polynomials,
//! Routh–Hurwitz, Lyapunov and symplectic invariants.

pub mod lu;
pub mod lyapunov;
pub mod matrix;
pub mod newton;
pub mod poly;
pub mod symplectic;

use num_complex::Complex64;

pub use lu::{residual_inf, solve, Lu, PIVOT_TOL};
pub use lyapunov::{lyapunov_residual, lyapunov_solve};
pub use matrix::{vec_norm_inf, ComplexMatrix, Matrix, RealMatrix, Scalar};
pub use newton::{newton2d, newton2d_multistart, square_grid, DEFAULT_TOL};
pub use poly::{char_poly, is_hurwitz, routh_hurwitz, routh_hurwitz_stable, RouthHurwitz, ROUTH_EPSILON};
pub use symplectic::{partial_transpose, symplectic_eigenvalues, symplectic_nu, TransposedMode};

/// Complex linear solve by LU with partial pivoting.
pub fn solve_complex(a: &ComplexMatrix, b: &[Complex64]) -> crate::Result<Vec<Complex64>> {
    solve(a, b)
}
