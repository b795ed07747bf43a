//! Characteristic polynomials and the Routh–Hurwitz test.

use super::matrix::RealMatrix;

/// Replacement for a vanishing first-column Routh entry.
pub const ROUTH_EPSILON: f64 = 1e-30;

/// Monic characteristic polynomial `det(λI − a)` by the Faddeev–LeVerrier
/// recursion. Coefficients are in descending powers: `[1, c₁, …, cₙ]`.
pub fn char_poly(a: &RealMatrix) -> Vec<f64> {
    assert!(a.is_square(), "characteristic polynomial needs a square matrix");
    let n = a.rows();
    let mut coeffs = vec![0.0; n + 1];
    coeffs[0] = 1.0;
    let ident = RealMatrix::identity(n);
    let mut m = RealMatrix::zeros(n, n);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{k-1} I ;  c_k = −tr(A M_k) / k
        m = a.matmul(&m).add(&ident.scale(coeffs[k - 1]));
        coeffs[k] = -a.matmul(&m).trace() / k as f64;
    }
    coeffs
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RouthHurwitz {
    /// Every root has a strictly negative real part.
    pub stable: bool,
    /// The ε-substitution or a vanishing row was needed; roots lie on or
    /// very near the imaginary axis.
    pub marginal: bool,
}

/// Routh array test on a polynomial with positive leading coefficient,
/// coefficients in descending powers.
pub fn routh_hurwitz(coeffs: &[f64]) -> RouthHurwitz {
    assert!(!coeffs.is_empty(), "empty polynomial");
    assert!(coeffs[0] > 0.0, "leading coefficient must be positive");
    let degree = coeffs.len() - 1;
    if degree == 0 {
        return RouthHurwitz { stable: true, marginal: false };
    }
    if coeffs.iter().any(|c| !c.is_finite()) {
        return RouthHurwitz { stable: false, marginal: false };
    }
    let width = degree / 2 + 1;
    let take = |start: usize| -> Vec<f64> {
        let mut row: Vec<f64> = coeffs.iter().skip(start).step_by(2).copied().collect();
        row.resize(width, 0.0);
        row
    };
    let mut prev = take(0);
    let mut cur = take(1);
    let mut marginal = false;
    let mut first_column = vec![prev[0]];

    for _ in 1..=degree {
        let scale = prev.iter().chain(cur.iter()).fold(0.0f64, |m, x| m.max(x.abs()));
        if cur.iter().all(|x| x.abs() <= 1e-12 * scale) {
            // roots symmetric about the origin
            return RouthHurwitz { stable: false, marginal: true };
        }
        if cur[0].abs() <= 1e-12 * scale {
            cur[0] = ROUTH_EPSILON;
            marginal = true;
        }
        first_column.push(cur[0]);
        let mut next = vec![0.0; width];
        for j in 0..width - 1 {
            next[j] = (cur[0] * prev[j + 1] - prev[0] * cur[j + 1]) / cur[0];
        }
        prev = cur;
        cur = next;
    }
    let stable = first_column.iter().all(|&x| x > 0.0) && !marginal;
    RouthHurwitz { stable, marginal }
}

pub fn routh_hurwitz_stable(coeffs: &[f64]) -> bool {
    routh_hurwitz(coeffs).stable
}

/// Hurwitz stability of a real square matrix. The matrix is rescaled by its
/// largest entry first so the polynomial coefficients stay O(1).
pub fn is_hurwitz(a: &RealMatrix) -> bool {
    let s = a.norm_max();
    if s == 0.0 || !s.is_finite() {
        return false;
    }
    routh_hurwitz_stable(&char_poly(&a.scale(1.0 / s)))
}

/// Expands `∏ (λ − rᵢ)` for real roots; used to build reference polynomials.
pub fn poly_from_real_roots(roots: &[f64]) -> Vec<f64> {
    let mut c = vec![1.0];
    for &r in roots {
        let mut next = vec![0.0; c.len() + 1];
        for (i, &ci) in c.iter().enumerate() {
            next[i] += ci;
            next[i + 1] -= r * ci;
        }
        c = next;
    }
    c
}
