//! Closed-form transfer coefficients as cofactor ratios of `A(ω)`.
//!
//! The expressions are written out term by term so that each can be
//! compared against the published closed forms. The printed versions carry
//! four slips; [`AppendixForm::AsPrinted`] keeps them for comparison.

use num_complex::Complex64;

use super::{build_matrix, TransferCoefficients, I};
use crate::error::{Error, Result};
use crate::model::{DerivedCouplings, SystemParams};
use crate::steadystate::SteadyState;

/// Relative floor below which `|d(ω)|` is treated as a pole.
pub const POLE_TOL: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AppendixForm {
    /// Expressions consistent with `A(ω)`; `d(ω) = det A(ω)`.
    #[default]
    Corrected,
    /// Verbatim published expressions, including their slips.
    AsPrinted,
}

/// Scalars entering the closed forms at one frequency.
struct Terms {
    w: Complex64,
    gm: Complex64,
    wm: Complex64,
    g0: Complex64,
    cs: Complex64,
    csb: Complex64,
    g1: Complex64,
    g1b: Complex64,
    g2: Complex64,
    g2b: Complex64,
    g3: Complex64,
    g3b: Complex64,
    m1: Complex64,
    m2: Complex64,
    n1: Complex64,
    n2: Complex64,
}

impl Terms {
    fn new(params: &SystemParams, c: &DerivedCouplings, ss: &SteadyState, omega: f64) -> Self {
        let fm = build_matrix(params, c, ss, omega);
        let re = |x: f64| Complex64::new(x, 0.0);
        Self {
            w: re(omega),
            gm: re(params.gamma_m),
            wm: re(params.omega_m),
            g0: re(c.g0),
            cs: ss.c_s,
            csb: ss.c_s.conj(),
            g1: c.g1,
            g1b: c.g1.conj(),
            g2: c.g2,
            g2b: c.g2.conj(),
            g3: c.g3,
            g3b: c.g3.conj(),
            m1: fm.mu1,
            m2: fm.mu2,
            n1: fm.nu1,
            n2: fm.nu2,
        }
    }

    fn denominator(&self, form: AppendixForm) -> Complex64 {
        let Terms { w, gm, wm, g0, cs, csb, g1, g1b, g2, g2b, g3, g3b, m1, m2, n1, n2 } = *self;
        let a1 = g1.norm_sqr();
        let a2 = g2.norm_sqr();
        let a3 = g3.norm_sqr();
        let ac = cs.norm_sqr();
        let x = g1 * g3b + g3 * g1b;
        let g02 = g0 * g0;

        let mu1_term = match form {
            AppendixForm::Corrected => -m1 * w * (I * w - gm) * (g1 * g2b * g3b + g3 * g1b * g2b),
            AppendixForm::AsPrinted => -m1 * w * (I * w + gm) * (g1 * g2b * g3b - g3 * g1b * g2b),
        };
        let g3_cs = match form {
            AppendixForm::Corrected => csb * csb,
            AppendixForm::AsPrinted => cs * cs,
        };
        let cs_bracket = |wm_on_ac: Complex64| {
            cs * cs * g3b * (n1 * g2b - g2 * n2) - I * g1 * cs * cs * g3b * g3b
                + g3 * g3_cs * (n1 * g2b - I * g3 * g1b - g2 * n2)
                + ac * ((m1 - m2) * (a1 - n1 * n2) + n1 * g2b * g2b - 2.0 * I * x * g2.re - g2 * g2 * n2) * wm_on_ac
        };
        let g0_term = match form {
            AppendixForm::Corrected => I * g02 * wm * cs_bracket(Complex64::new(1.0, 0.0)),
            AppendixForm::AsPrinted => I * g02 * cs_bracket(wm),
        };

        -2.0 * I * w * a2 * a3 * gm + mu1_term + m2 * w * (I * w - gm) * (g1 * g2 * g3b + g2 * g3 * g1b)
            - w * (w + I * gm) * (m1 * m2 * a1 - m1 * n1 * g2b * g2b - g2 * g2 * m2 * n2 - m1 * m2 * n1 * n2)
            + g0_term
            + (2.0 * a2 * a3 - m1 * n1 * g2b * g2b
                + I * m1 * g2b * x
                + m2 * (m1 * a1 - I * g2 * x - n2 * (g2 * g2 + m1 * n1)))
                * wm
                * wm
            + a2 * (g02 * wm * (g1 * csb * csb + cs * cs * g1b) - 2.0 * w * w * a3)
            + (a2 * a2 + a3 * a3) * (I * w * gm - wm * wm + w * w)
            + a3 * (I * (n1 - n2) * g02 * wm * ac - (m2 * n1 + m1 * n2) * (w * w + I * gm * w)
                + (m2 * n1 + m1 * n2) * wm * wm)
    }

    /// Numerators of `(A′, B′, C′, D′, F′)` without the `√(2κ)`, `√(2γ_a)`
    /// and `1/d` factors.
    fn numerators(&self, form: AppendixForm) -> [Complex64; 5] {
        let Terms { w, gm, wm, g0, cs, csb, g1, g1b, g2, g2b, g3, g3b, m1: _, m2, n1, n2 } = *self;
        let a1 = g1.norm_sqr();
        let a2 = g2.norm_sqr();
        let a3 = g3.norm_sqr();
        let ac = cs.norm_sqr();
        let g02 = g0 * g0;
        // recurring frequency polynomial iωγ_m − ω_m² + ω²
        let p = I * w * gm - wm * wm + w * w;

        let common = n2 * a3 - n2 * m2 * n1 + m2 * a1;
        let a = I * g02 * wm * ac * (a1 - n1 * n2) - (w * w + I * w * gm) * common
            + wm * wm * common
            + (g1 * g3b * g2b + g3 * g1b * g2b + I * n1 * g2b * g2b) * (w * gm - I * w * w + I * wm * wm);

        let b = I
            * (g02 * cs * cs * wm * (a1 - n1 * n2)
                + p * (g1 * a2 + I * g3 * g2b * n1 + g3 * g3 * g1b - I * g2 * g3 * n2));

        let c = I
            * (-g02 * wm * (g1b * g3 * ac + cs * cs * g1b * g2b - I * n2 * (g2 * ac + cs * cs * g3b))
                + (w * w + I * w * gm - wm * wm) * (a3 * g2b - a2 * g2b - m2 * n2 * g2 - I * g3 * m2 * g1b));

        let last = match form {
            AppendixForm::Corrected => I * g3 * n1 * m2,
            AppendixForm::AsPrinted => -I * g3 * n1 * m2,
        };
        let d = g2b * g02 * cs * cs * n1 * wm + p * (I * a2 * g3 + g1 * g2 * m2 - I * a3 * g3 + last)
            - I * g3b * g1 * g02 * cs * cs * wm
            + g02 * wm * ac * (g3 * n1 - I * g1 * g2);

        let f = I
            * g0
            * wm
            * (cs * (n2 * (a3 - m2 * n1) + m2 * a1 - n1 * g2b * g2b)
                + I * a2 * g1 * csb
                + I * g2b * g1 * g3b * cs
                + g2b * g3 * (I * g1b * cs - n1 * csb)
                + g3 * csb * (g2 * n2 + I * g3 * g1b));

        [a, b, c, d, f]
    }
}

/// Closed-form denominator `d(ω)`.
pub fn appendix_denominator(
    params: &SystemParams,
    couplings: &DerivedCouplings,
    ss: &SteadyState,
    omega: f64,
    form: AppendixForm,
) -> Complex64 {
    Terms::new(params, couplings, ss, omega).denominator(form)
}

pub fn transfer_closed_form(
    params: &SystemParams,
    couplings: &DerivedCouplings,
    ss: &SteadyState,
    omega: f64,
) -> Result<TransferCoefficients> {
    transfer_closed_form_with(params, couplings, ss, omega, AppendixForm::Corrected)
}

pub fn transfer_closed_form_with(
    params: &SystemParams,
    couplings: &DerivedCouplings,
    ss: &SteadyState,
    omega: f64,
    form: AppendixForm,
) -> Result<TransferCoefficients> {
    let t = Terms::new(params, couplings, ss, omega);
    let d = t.denominator(form);
    // d is a degree-6 polynomial in the entries of A(ω)
    let scale = build_matrix(params, couplings, ss, omega).a.norm_max().powi(6);
    if !(d.norm() >= POLE_TOL * scale) {
        return Err(Error::PoleAtOmega { omega });
    }
    let n = t.numerators(form);
    let (sk, sa) = ((2.0 * params.kappa).sqrt(), (2.0 * params.gamma_a).sqrt());
    let primed = [n[0] * sk / d, n[1] * sk / d, n[2] * sa / d, n[3] * sa / d, n[4] / d];
    Ok(TransferCoefficients::from_intracavity(omega, params.kappa, primed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::derive_couplings;
    use crate::numerics::Lu;
    use crate::spectrum::transfer_direct;
    use crate::steadystate::fixed_point;

    fn det6(params: &SystemParams, c: &DerivedCouplings, ss: &SteadyState, omega: f64) -> Complex64 {
        // determinant from the pivots of an unpivoted-equivalent elimination
        let a = build_matrix(params, c, ss, omega).a;
        let mut m = a.clone();
        let mut det = Complex64::new(1.0, 0.0);
        for k in 0..6 {
            let p = (k..6).max_by(|&i, &j| m[(i, k)].norm().total_cmp(&m[(j, k)].norm())).unwrap();
            if p != k {
                for j in 0..6 {
                    let t = m[(k, j)];
                    m[(k, j)] = m[(p, j)];
                    m[(p, j)] = t;
                }
                det = -det;
            }
            det *= m[(k, k)];
            for i in k + 1..6 {
                let l = m[(i, k)] / m[(k, k)];
                for j in k..6 {
                    let u = m[(k, j)];
                    m[(i, j)] -= l * u;
                }
            }
        }
        assert!(Lu::factor(&a).is_ok());
        det
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / a.norm().max(b.norm())
    }

    #[test]
    fn denominator_is_determinant() {
        for (case, g) in [(1.0, 25.0), (2.5, 50.0), (8.0, 100.0)] {
            let p = SystemParams::with_case(case, case, g);
            let ss = fixed_point(&p).unwrap();
            let c = derive_couplings(&p, &ss);
            for w in [-1.4, -0.6, 0.3, 1.0, 1.9].map(|x| x * p.omega_m) {
                let d = appendix_denominator(&p, &c, &ss, w, AppendixForm::Corrected);
                assert!(rel(d, det6(&p, &c, &ss, w)) < 1e-9);
            }
        }
    }

    #[test]
    fn as_printed_form_disagrees() {
        let p = SystemParams::with_case(1.0, 1.0, 50.0);
        let ss = fixed_point(&p).unwrap();
        let c = derive_couplings(&p, &ss);
        let w = 0.9 * p.omega_m;
        let good = transfer_closed_form(&p, &c, &ss, w).unwrap();
        let bad = transfer_closed_form_with(&p, &c, &ss, w, AppendixForm::AsPrinted).unwrap();
        let direct = transfer_direct(&p, &c, &ss, w).unwrap();
        assert!(rel(good.d_c, direct.d_c) < 1e-8);
        assert!(rel(bad.d_c, direct.d_c) > 1e-6);
    }

    #[test]
    fn mechanical_response_vanishes_without_optomechanics() {
        let mut p = SystemParams::with_case(1.0, 1.0, 25.0);
        p.omega_c = 0.0;
        let ss = fixed_point(&p).unwrap();
        let c = derive_couplings(&p, &ss);
        let t = transfer_closed_form(&p, &c, &ss, 0.7 * p.omega_m).unwrap();
        assert_eq!(t.f_c.norm(), 0.0);
    }

    #[test]
    fn empty_cavity_closed_form() {
        let p = SystemParams::with_case(2.5, 2.5, 0.0);
        let ss = fixed_point(&p).unwrap();
        let c = derive_couplings(&p, &ss);
        assert_eq!(ss.c_s.norm(), 0.0);
        let w = 1.1 * p.omega_m;
        let t = transfer_closed_form(&p, &c, &ss, w).unwrap();
        assert_eq!(t.f_c.norm(), 0.0);
        assert!((t.a_c.norm() - 1.0).abs() < 1e-12);
    }
}
