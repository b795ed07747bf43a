//! LU factorization with partial pivoting.

use super::matrix::{vec_norm_inf, Matrix, Scalar};
use crate::error::{Error, Result};

/// Relative pivot threshold: a pivot below `PIVOT_TOL * ‖a‖∞` is treated as zero.
pub const PIVOT_TOL: f64 = 1e-14;

#[derive(Debug, Clone)]
pub struct Lu<T> {
    lu: Matrix<T>,
    perm: Vec<usize>,
}

impl<T: Scalar> Lu<T> {
    pub fn factor(a: &Matrix<T>) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch(format!("LU needs a square matrix, got {}x{}", a.rows(), a.cols())));
        }
        let n = a.rows();
        let threshold = PIVOT_TOL * a.norm_inf();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();

        for k in 0..n {
            let (p, pivot) =
                (k..n)
                    .map(|i| (i, lu[(i, k)].modulus()))
                    .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if !(pivot > threshold) {
                return Err(Error::SingularMatrix { column: k, pivot });
            }
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                perm.swap(k, p);
            }
            let d = lu[(k, k)];
            for i in (k + 1)..n {
                let l = lu[(i, k)] / d;
                lu[(i, k)] = l;
                if l.is_zero() {
                    continue;
                }
                for j in (k + 1)..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= l * u;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn solve(&self, b: &[T]) -> Result<Vec<T>> {
        let n = self.dim();
        if b.len() != n {
            return Err(Error::DimensionMismatch(format!("rhs has length {}, expected {n}", b.len())));
        }
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.lu[(i, j)];
                let xj = x[j];
                x[i] -= l * xj;
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                let u = self.lu[(i, j)];
                let xj = x[j];
                x[i] -= u * xj;
            }
            x[i] /= self.lu[(i, i)];
        }
        Ok(x)
    }
}

/// Solves `a x = b` by LU with partial pivoting.
///
/// Returns [`Error::SingularMatrix`] when a pivot falls below `1e-14·‖a‖∞`.
pub fn solve<T: Scalar>(a: &Matrix<T>, b: &[T]) -> Result<Vec<T>> {
    Lu::factor(a)?.solve(b)
}

/// `‖a x − b‖∞`
pub fn residual_inf<T: Scalar>(a: &Matrix<T>, x: &[T], b: &[T]) -> f64 {
    let ax = a.matvec(x);
    let r: Vec<T> = ax.iter().zip(b).map(|(&p, &q)| p - q).collect();
    vec_norm_inf(&r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::ComplexMatrix;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_returns_rhs() {
        let a = ComplexMatrix::identity(6);
        let mut b = vec![c(0.0, 0.0); 6];
        b[2] = c(1.0, 0.0);
        assert_eq!(solve(&a, &b).unwrap(), b);
    }

    #[test]
    fn diagonal_imaginary() {
        let a = ComplexMatrix::from_diagonal(&[c(0.0, 2.0); 6]);
        let b = vec![c(1.0, 0.0); 6];
        let x = solve(&a, &b).unwrap();
        for xi in x {
            assert!((xi - c(1.0, 0.0) / c(0.0, 2.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn singular_is_reported() {
        let a = ComplexMatrix::from_rows([[c(1.0, 0.0), c(2.0, 0.0)], [c(2.0, 0.0), c(4.0, 0.0)]]);
        assert!(matches!(solve(&a, &[c(1.0, 0.0), c(0.0, 0.0)]), Err(Error::SingularMatrix { .. })));
    }

    #[test]
    fn rhs_length_checked() {
        let a = ComplexMatrix::identity(3);
        assert!(matches!(solve(&a, &[c(1.0, 0.0)]), Err(Error::DimensionMismatch(_))));
    }

    fn well_conditioned() -> impl Strategy<Value = (ComplexMatrix, Vec<Complex64>)> {
        (prop::collection::vec(-1.0..1.0f64, 72), prop::collection::vec(-1.0..1.0f64, 12)).prop_map(|(m, v)| {
            let mut a = ComplexMatrix::from_row_major(6, 6, m.chunks(2).map(|p| c(p[0], p[1])).collect());
            // diagonal dominance keeps the condition number modest
            for i in 0..6 {
                a[(i, i)] += c(8.0, 0.0);
            }
            (a, v.chunks(2).map(|p| c(p[0], p[1])).collect())
        })
    }

    proptest! {
        #[test]
        fn residual_below_bound((a, b) in well_conditioned()) {
            let x = solve(&a, &b).unwrap();
            let bound = 1e-10 * (a.norm_inf() * vec_norm_inf(&x) + vec_norm_inf(&b));
            prop_assert!(residual_inf(&a, &x, &b) <= bound);
        }

        #[test]
        fn solve_inverts_matvec((a, x0) in well_conditioned()) {
            let b = a.matvec(&x0);
            let x = solve(&a, &b).unwrap();
            let err = x.iter().zip(&x0).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
            prop_assert!(err <= 1e-9 * vec_norm_inf(&x0).max(1e-300));
        }
    }
}
