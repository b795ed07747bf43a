//! Frequency-domain fluctuations, transfer coefficients of the output field
//! and the output intensity squeezing spectrum.

mod appendix;
mod sweep;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{DerivedCouplings, SystemParams, HBAR, K_B};
use crate::numerics::{ComplexMatrix, Lu};
use crate::steadystate::SteadyState;

pub use appendix::{appendix_denominator, transfer_closed_form, transfer_closed_form_with, AppendixForm};
pub use sweep::{spectrum_sweep, SpectrumColumn, SpectrumTable};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `A(ω)` in the basis `(δc, δc†(−ω), δB, δB†(−ω), δx, δp)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FluctuationMatrix {
    pub omega: f64,
    pub a: ComplexMatrix,
    pub mu1: Complex64,
    pub mu2: Complex64,
    pub nu1: Complex64,
    pub nu2: Complex64,
}

/// Output-field coefficients of `δc_out = A δc_in + B δc_in† + C δB_in + D δB_in† + F ξ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransferCoefficients {
    pub omega: f64,
    pub a_c: Complex64,
    pub b_c: Complex64,
    pub c_c: Complex64,
    pub d_c: Complex64,
    pub f_c: Complex64,
}

impl TransferCoefficients {
    pub fn as_array(&self) -> [Complex64; 5] {
        [self.a_c, self.b_c, self.c_c, self.d_c, self.f_c]
    }

    /// Output mapping from the intracavity coefficients `(A′, B′, C′, D′, F′)`.
    fn from_intracavity(omega: f64, kappa: f64, primed: [Complex64; 5]) -> Self {
        let s = (2.0 * kappa).sqrt();
        Self {
            omega,
            a_c: primed[0] * s - 1.0,
            b_c: primed[1] * s,
            c_c: primed[2] * s,
            d_c: primed[3] * s,
            f_c: primed[4] * s,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumPoint {
    pub omega_over_omega_m: f64,
    pub s_out: f64,
}

pub fn build_matrix(
    params: &SystemParams,
    couplings: &DerivedCouplings,
    ss: &SteadyState,
    omega: f64,
) -> FluctuationMatrix {
    let c = couplings;
    let zero = Complex64::new(0.0, 0.0);
    let re = |x: f64| Complex64::new(x, 0.0);
    let mu1 = Complex64::new(params.kappa, params.delta - omega);
    let mu2 = Complex64::new(params.kappa, -(params.delta + omega));
    let nu1 = Complex64::new(params.gamma_a, c.delta_a_prime - omega);
    let nu2 = Complex64::new(params.gamma_a, -(c.delta_a_prime + omega));
    let g0cs = ss.c_s * c.g0;
    let (g1, g2, g3) = (c.g1, c.g2, c.g3);

    let a = ComplexMatrix::from_rows([
        [mu1, zero, I * g2, -I * g3, -I * g0cs, zero],
        [zero, mu2, I * g3.conj(), -I * g2.conj(), I * g0cs.conj(), zero],
        [I * g2, -I * g3, nu1, -I * g1, zero, zero],
        [I * g3.conj(), -I * g2.conj(), I * g1.conj(), nu2, zero, zero],
        [zero, zero, zero, zero, I * omega, re(params.omega_m)],
        [-g0cs.conj(), -g0cs, zero, zero, re(params.omega_m), Complex64::new(params.gamma_m, -omega)],
    ]);
    FluctuationMatrix { omega, a, mu1, mu2, nu1, nu2 }
}

/// Transfer coefficients from one LU of `A(ω)` and unit noise injections.
pub fn transfer_direct(
    params: &SystemParams,
    couplings: &DerivedCouplings,
    ss: &SteadyState,
    omega: f64,
) -> Result<TransferCoefficients> {
    let fm = build_matrix(params, couplings, ss, omega);
    let lu = Lu::factor(&fm.a).map_err(|_| Error::PoleAtOmega { omega })?;
    // first row of A⁻¹: response of δc to a unit source in each channel
    let mut m1 = [Complex64::new(0.0, 0.0); 6];
    for (j, m) in m1.iter_mut().enumerate() {
        if j == 4 {
            continue;
        }
        let mut e = vec![Complex64::new(0.0, 0.0); 6];
        e[j] = Complex64::new(1.0, 0.0);
        *m = lu.solve(&e)?[0];
    }
    let (sk, sa) = ((2.0 * params.kappa).sqrt(), (2.0 * params.gamma_a).sqrt());
    let primed = [m1[0] * sk, m1[1] * sk, m1[2] * sa, m1[3] * sa, m1[5]];
    Ok(TransferCoefficients::from_intracavity(omega, params.kappa, primed))
}

/// Mechanical bath factor `(γ_m/ω_m)·ω·[coth(ħω/2k_BT) − 1]`, with its
/// zero-temperature and zero-frequency limits.
pub fn thermal_factor(params: &SystemParams, omega: f64) -> f64 {
    let rate = params.gamma_m / params.omega_m;
    if params.temperature == 0.0 {
        return if omega < 0.0 { -2.0 * rate * omega } else { 0.0 };
    }
    if omega == 0.0 {
        return rate * 2.0 * K_B * params.temperature / HBAR;
    }
    let x = HBAR * omega / (2.0 * K_B * params.temperature);
    // coth x − 1 = 2/(e^{2x} − 1)
    rate * omega * 2.0 / (2.0 * x).exp_m1()
}

/// Spectrum from coefficients at `+ω` and `−ω`.
pub fn spectrum_from_coefficients(plus: &TransferCoefficients, minus: &TransferCoefficients, theta: f64) -> f64 {
    let ac = plus.a_c + plus.c_c;
    let bd = minus.b_c + minus.d_c;
    let s = ac.norm_sqr() + bd.norm_sqr() + (plus.f_c.norm_sqr() + minus.f_c.norm_sqr()) * theta
        - 2.0 * (ac * bd + plus.f_c * minus.f_c * theta).norm();
    // a variance; clamp roundoff below zero
    s.max(0.0)
}

pub fn output_spectrum(
    params: &SystemParams,
    couplings: &DerivedCouplings,
    ss: &SteadyState,
    omega: f64,
) -> Result<SpectrumPoint> {
    let plus = transfer_direct(params, couplings, ss, omega)?;
    let minus = transfer_direct(params, couplings, ss, -omega)?;
    Ok(SpectrumPoint {
        omega_over_omega_m: omega / params.omega_m,
        s_out: spectrum_from_coefficients(&plus, &minus, thermal_factor(params, omega)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::derive_couplings;
    use crate::steadystate::fixed_point;

    fn setup(p: &SystemParams) -> (DerivedCouplings, SteadyState) {
        let ss = fixed_point(p).unwrap();
        (derive_couplings(p, &ss), ss)
    }

    #[test]
    fn decoupled_matrix_is_block_diagonal() {
        let mut p = SystemParams::with_case(1.0, 1.0, 0.0);
        p.omega_c = 0.0;
        let (c, ss) = setup(&p);
        let fm = build_matrix(&p, &c, &ss, 0.0);
        for i in 0..6 {
            for j in 0..6 {
                let same_block = i / 2 == j / 2;
                if !same_block {
                    assert_eq!(fm.a[(i, j)], Complex64::new(0.0, 0.0), "({i},{j})");
                }
            }
        }
        assert_eq!(fm.a[(0, 0)], fm.mu1);
        assert_eq!(fm.a[(1, 1)], fm.mu2);
        assert_eq!(fm.a[(0, 1)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn sparsity_and_mechanical_row() {
        let p = SystemParams::default();
        let (c, ss) = setup(&p);
        let fm = build_matrix(&p, &c, &ss, 0.8 * p.omega_m);
        assert_eq!(fm.a[(5, 0)], -(ss.c_s * c.g0).conj());
        assert_eq!(fm.a[(5, 1)], -(ss.c_s * c.g0));
        let zeros = [
            (0, 1),
            (0, 5),
            (1, 0),
            (1, 5),
            (2, 4),
            (2, 5),
            (3, 4),
            (3, 5),
            (4, 0),
            (4, 1),
            (4, 2),
            (4, 3),
            (5, 2),
            (5, 3),
        ];
        for (i, j) in zeros {
            assert_eq!(fm.a[(i, j)], Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn frequency_reflection_of_shorthands() {
        let p = SystemParams::default();
        let (c, ss) = setup(&p);
        let w = 1.3 * p.omega_m;
        let plus = build_matrix(&p, &c, &ss, w);
        let minus = build_matrix(&p, &c, &ss, -w);
        assert!((plus.mu1 - minus.mu2.conj()).norm() <= 1e-9 * plus.mu1.norm());
        assert!((plus.nu1 - minus.nu2.conj()).norm() <= 1e-9 * plus.nu1.norm());
    }

    #[test]
    fn empty_cavity_reflection_is_unimodular() {
        let p = SystemParams::with_case(1.0, 1.0, 0.0);
        let (c, ss) = setup(&p);
        for w in [0.3, 1.0, 1.7].map(|x| x * p.omega_m) {
            let t = transfer_direct(&p, &c, &ss, w).unwrap();
            assert!((t.a_c.norm() - 1.0).abs() < 1e-12);
            let expected = Complex64::new(p.kappa, -(p.delta - w)) / Complex64::new(p.kappa, p.delta - w);
            assert!((t.a_c - expected).norm() < 1e-12);
            for x in [t.b_c, t.c_c, t.d_c, t.f_c] {
                assert_eq!(x.norm(), 0.0);
            }
        }
    }

    #[test]
    fn shot_noise_without_coupling() {
        let p = SystemParams::with_case(2.5, 2.5, 0.0);
        let (c, ss) = setup(&p);
        for k in 1..=20 {
            let w = 0.1 * k as f64 * p.omega_m;
            let s = output_spectrum(&p, &c, &ss, w).unwrap().s_out;
            assert!((s - 1.0).abs() <= 1e-10, "S_out({w}) = {s}");
        }
    }

    #[test]
    fn thermal_factor_limits() {
        let mut p = SystemParams::default();
        let w = p.omega_m;
        assert_eq!(thermal_factor(&p, w), 0.0);
        assert!((thermal_factor(&p, -w) - 2.0 * p.gamma_m).abs() < 1e-9 * p.gamma_m);
        p.temperature = 1e-3;
        let x = HBAR * w / (2.0 * K_B * p.temperature);
        let direct = p.gamma_m / p.omega_m * w * (1.0 / x.tanh() - 1.0);
        assert!((thermal_factor(&p, w) - direct).abs() <= 1e-10 * direct);
        // continuity through ω = 0
        let tiny = 1e-3;
        assert!((thermal_factor(&p, tiny) - thermal_factor(&p, 0.0)).abs() <= 1e-6 * thermal_factor(&p, 0.0));
        assert!(thermal_factor(&p, -w) > 0.0);
    }

    #[test]
    fn smoke_on_figure_grid() {
        let p = SystemParams::default();
        let (c, ss) = setup(&p);
        let t = transfer_direct(&p, &c, &ss, p.omega_m).unwrap();
        assert!(t.as_array().iter().all(|z| z.re.is_finite() && z.im.is_finite()));
        assert!(appendix_denominator(&p, &c, &ss, p.omega_m, AppendixForm::Corrected).norm() > 0.0);
    }
}
