//! Continuous Lyapunov equation `J V + V Jᵀ = −D` by vectorization.

use super::lu::Lu;
use super::matrix::RealMatrix;
use super::poly::is_hurwitz;
use crate::error::{Error, Result};

/// Solves `j v + v jᵀ = −d` for symmetric `v`.
///
/// The `n² × n²` system `(J ⊗ I + I ⊗ J) vec(V) = −vec(D)` (row-major vec) is
/// solved by LU with one step of iterative refinement, then `V` is
/// symmetrized. `j` must be Hurwitz stable.
pub fn lyapunov_solve(j: &RealMatrix, d: &RealMatrix) -> Result<RealMatrix> {
    if !j.is_square() || !d.is_square() || j.rows() != d.rows() {
        return Err(Error::DimensionMismatch("Lyapunov: J and D must be square and equal size".into()));
    }
    if !is_hurwitz(j) {
        return Err(Error::UnstableDrift);
    }
    let n = j.rows();
    // Work with J/s and D/s; the solution V is unchanged.
    let s = j.norm_max();
    let js = j.scale(1.0 / s);
    let ds = d.scale(1.0 / s);

    let mut k = RealMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for c in 0..n {
            let row = i * n + c;
            for l in 0..n {
                // (J V)_{ic} = Σ_l J_il V_lc ;  (V Jᵀ)_{ic} = Σ_l V_il J_cl
                k[(row, l * n + c)] += js[(i, l)];
                k[(row, i * n + l)] += js[(c, l)];
            }
        }
    }
    let rhs: Vec<f64> = ds.as_slice().iter().map(|x| -x).collect();
    let lu = Lu::factor(&k).map_err(|_| Error::SingularSystem)?;
    let mut x = lu.solve(&rhs)?;
    let r: Vec<f64> = k.matvec(&x).iter().zip(&rhs).map(|(a, b)| b - a).collect();
    let dx = lu.solve(&r)?;
    for (xi, di) in x.iter_mut().zip(dx) {
        *xi += di;
    }
    Ok(RealMatrix::from_row_major(n, n, x).symmetrized())
}

/// `‖J V + V Jᵀ + D‖max`
pub fn lyapunov_residual(j: &RealMatrix, v: &RealMatrix, d: &RealMatrix) -> f64 {
    j.matmul(v).add(&v.matmul(&j.transpose())).add(d).norm_max()
}
