//! Physical parameters, derived couplings and regime checks.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::steadystate::{solve_beta, SteadyState};

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;
/// Speed of light, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Drive wavelength used for the default cavity frequency, m.
pub const DEFAULT_WAVELENGTH: f64 = 1064e-9;

/// Excitation above which the first-order bosonization is doubtful.
pub const HIGH_EXCITATION: f64 = 0.5;
/// Ensembles smaller than this are not treated as collective modes.
pub const SMALL_ENSEMBLE: f64 = 100.0;

/// All physical inputs, SI units (angular frequencies in rad/s).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub omega_m: f64,
    /// Cavity amplitude decay rate.
    pub kappa: f64,
    /// Collective atomic decay rate.
    pub gamma_a: f64,
    pub gamma_m: f64,
    pub n_atoms: f64,
    /// Collective atom–cavity coupling `g√N`.
    pub coupling_g: f64,
    /// Effective cavity detuning, already shifted by the static displacement.
    pub delta: f64,
    pub delta_r: f64,
    pub gamma_r: f64,
    pub cavity_length: f64,
    pub mirror_mass: f64,
    /// Only enters the single-photon optomechanical coupling.
    pub omega_c: f64,
    pub temperature: f64,
    pub n_thermal: f64,
    /// Collective drive `Ω√N`; inferred from the rates when absent.
    pub chi: Option<f64>,
    /// Bare atomic detuning; inferred from the rates when absent.
    pub delta_a: Option<f64>,
}

impl Default for SystemParams {
    fn default() -> Self {
        let omega_m = 2.0 * PI * 4e7;
        let kappa = 2.0 * PI * 2.5e6;
        Self {
            omega_m,
            kappa,
            gamma_a: 20.0 * kappa,
            gamma_m: 1e-3 * omega_m,
            n_atoms: 1e7,
            coupling_g: 25.0 * kappa,
            delta: -omega_m,
            delta_r: 1.0,
            gamma_r: 1.0,
            cavity_length: 1e-3,
            mirror_mass: 1e-13,
            omega_c: 2.0 * PI * SPEED_OF_LIGHT / DEFAULT_WAVELENGTH,
            temperature: 0.0,
            n_thermal: 0.0,
            chi: None,
            delta_a: None,
        }
    }
}

impl SystemParams {
    /// Defaults with the excitation case and coupling (in units of κ) replaced.
    pub fn with_case(delta_r: f64, gamma_r: f64, g_over_kappa: f64) -> Self {
        let mut p = Self::default();
        p.delta_r = delta_r;
        p.gamma_r = gamma_r;
        p.coupling_g = g_over_kappa * p.kappa;
        p
    }

    /// Single-photon optomechanical coupling `ω_c/L·√(ħ/(m ω_m))`.
    pub fn g0(&self) -> f64 {
        self.omega_c / self.cavity_length * (HBAR / (self.mirror_mass * self.omega_m)).sqrt()
    }

    pub fn sqrt_n(&self) -> f64 {
        self.n_atoms.sqrt()
    }

    /// Multiplies every rate and frequency by `s`. The cavity frequency
    /// scales as `s^{3/2}` so that `G₀/s` is unchanged.
    pub fn scaled(&self, s: f64) -> Self {
        let mut p = *self;
        p.omega_m *= s;
        p.kappa *= s;
        p.gamma_a *= s;
        p.gamma_m *= s;
        p.coupling_g *= s;
        p.delta *= s;
        p.omega_c *= s * s.sqrt();
        p.temperature *= s;
        p.chi = p.chi.map(|c| c * s);
        p.delta_a = p.delta_a.map(|d| d * s);
        p
    }
}

/// Couplings of the linearized fluctuation equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedCouplings {
    pub g0: f64,
    pub g1: Complex64,
    pub g2: Complex64,
    pub g3: Complex64,
    pub delta_a_prime: f64,
    /// Drive amplitude and bare atomic detuning actually used.
    pub chi: f64,
    pub delta_a: f64,
    pub g_px: f64,
    pub g_py: f64,
    pub g_mu: f64,
    pub g_nu: f64,
    pub g3_mu: f64,
    pub g3_nu: f64,
}

/// Cavity-induced shift `G²Δ/(κ²+Δ²)` entering the effective atomic rates.
pub fn cavity_shift(params: &SystemParams, delta: f64) -> f64 {
    let g = params.coupling_g;
    g * g * delta / (params.kappa * params.kappa + delta * delta)
}

/// Drive amplitude `χ` and bare atomic detuning `Δ_a`.
///
/// Explicit config values win. Otherwise both are recovered by inverting the
/// effective-rate definitions at the given excitation, so that the supplied
/// `(Δ_r, γ_r)` are reproduced exactly.
pub fn resolve_drive(params: &SystemParams, excitation: f64) -> (f64, f64) {
    let s = cavity_shift(params, params.delta);
    let omega = match params.chi {
        Some(chi) => chi / params.sqrt_n(),
        None => (params.gamma_a + s * (1.0 - excitation)) / params.gamma_r,
    };
    let delta_a = params.delta_a.unwrap_or(omega * params.delta_r + s * (1.0 - 2.0 * excitation));
    (omega * params.sqrt_n(), delta_a)
}

pub fn derive_couplings(params: &SystemParams, ss: &SteadyState) -> DerivedCouplings {
    let sqrt_n = params.sqrt_n();
    let g = params.coupling_g;
    let g0 = params.g0();
    let beta = ss.beta;
    let cs = ss.c_s;
    let (chi, delta_a) = resolve_drive(params, ss.excitation);

    let g1 = (cs * g + chi) * beta / sqrt_n;
    let g2 = Complex64::new(g * (1.0 - beta.norm_sqr()), 0.0);
    let g3 = beta * beta * (g / 2.0);
    let delta_a_prime = delta_a - 2.0 * g / sqrt_n * (cs.conj() * beta).re - 2.0 * chi / sqrt_n * beta.re;

    DerivedCouplings {
        g0,
        g1,
        g2,
        g3,
        delta_a_prime,
        chi,
        delta_a,
        g_px: 2f64.sqrt() * g0 * cs.re,
        g_py: 2f64.sqrt() * g0 * cs.im,
        g_mu: -g1.im,
        g_nu: g1.re,
        g3_mu: -g3.im,
        g3_nu: g3.re,
    }
}

/// A strained modeling assumption. Not fatal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Warning {
    HighExcitation { excitation: f64 },
    OverdampedMechanics,
    SmallEnsemble,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::HighExcitation { excitation } => {
                write!(f, "high excitation: |beta|^2 = {excitation:.3} exceeds {HIGH_EXCITATION}")
            }
            Warning::OverdampedMechanics => f.write_str("overdamped mechanics"),
            Warning::SmallEnsemble => f.write_str("small ensemble"),
        }
    }
}

fn require(name: &'static str, value: f64, ok: bool, reason: &str) -> Result<()> {
    if value.is_finite() && ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, reason: format!("{reason}, got {value}") })
    }
}

/// Rejects non-physical inputs and reports strained approximations.
pub fn validate(params: &SystemParams) -> Result<Vec<Warning>> {
    let p = params;
    for (name, v) in [
        ("omega_m", p.omega_m),
        ("kappa", p.kappa),
        ("gamma_a", p.gamma_a),
        ("gamma_m", p.gamma_m),
        ("gamma_r", p.gamma_r),
        ("cavity_length", p.cavity_length),
        ("mirror_mass", p.mirror_mass),
        ("omega_c", p.omega_c),
    ] {
        require(name, v, v > 0.0, "must be positive")?;
    }
    require("n_atoms", p.n_atoms, p.n_atoms >= 1.0, "must be at least 1")?;
    require("coupling_G", p.coupling_g, p.coupling_g >= 0.0, "must be non-negative")?;
    require("temperature", p.temperature, p.temperature >= 0.0, "must be non-negative")?;
    require("n_thermal", p.n_thermal, p.n_thermal >= 0.0, "must be non-negative")?;
    require("delta", p.delta, true, "must be finite")?;
    require("delta_r", p.delta_r, true, "must be finite")?;
    if let Some(chi) = p.chi {
        require("chi", chi, chi > 0.0, "must be positive")?;
    }
    if let Some(da) = p.delta_a {
        require("delta_a", da, true, "must be finite")?;
    }

    let mut warnings = Vec::new();
    let excitation = solve_beta(p.delta_r, p.gamma_r)?[0].norm_sqr();
    if excitation > HIGH_EXCITATION {
        warnings.push(Warning::HighExcitation { excitation });
    }
    if p.gamma_m >= p.omega_m {
        warnings.push(Warning::OverdampedMechanics);
    }
    if p.n_atoms < SMALL_ENSEMBLE {
        warnings.push(Warning::SmallEnsemble);
    }
    Ok(warnings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::steadystate::fixed_point;
    use approx::assert_relative_eq;

    fn zero_state() -> SteadyState {
        SteadyState {
            beta: Complex64::new(0.0, 0.0),
            excitation: 0.0,
            c_s: Complex64::new(0.0, 0.0),
            x_s: 0.0,
            p_s: 0.0,
            residual: 0.0,
            branch_count: 1,
        }
    }

    #[test]
    fn zero_excitation_limit() {
        let p = SystemParams::default();
        let c = derive_couplings(&p, &zero_state());
        assert_eq!(c.g1, Complex64::new(0.0, 0.0));
        assert_eq!(c.g2, Complex64::new(p.coupling_g, 0.0));
        assert_eq!(c.g3, Complex64::new(0.0, 0.0));
        assert_eq!((c.g_px, c.g_py), (0.0, 0.0));
    }

    #[test]
    fn single_photon_coupling_value() {
        // hand evaluation: 2πc/λ / L · sqrt(ħ/(m ω_m))
        let omega_c = 2.0 * PI * 299_792_458.0 / 1064e-9;
        let expected = omega_c / 1e-3 * (1.054_571_817e-34 / (1e-13 * 2.0 * PI * 4e7)).sqrt();
        assert_relative_eq!(SystemParams::default().g0(), expected, max_relative = 1e-15);
        assert_relative_eq!(SystemParams::default().g0(), 3_626.411_588_592_97, max_relative = 1e-12);
    }

    #[test]
    fn high_excitation_reduces_g2() {
        let p = SystemParams::default();
        let ss = fixed_point(&p).unwrap();
        let c = derive_couplings(&p, &ss);
        assert!((c.g2.re / p.coupling_g - 0.745).abs() < 2e-3);
        assert_eq!(c.g2.im, 0.0);
    }

    #[test]
    fn inferred_drive_reproduces_rates() {
        let p = SystemParams::with_case(2.5, 2.5, 50.0);
        let exc = 0.069;
        let (chi, delta_a) = resolve_drive(&p, exc);
        let omega = chi / p.sqrt_n();
        let s = cavity_shift(&p, p.delta);
        assert_relative_eq!((delta_a - s * (1.0 - 2.0 * exc)) / omega, 2.5, max_relative = 1e-12);
        assert_relative_eq!((p.gamma_a + s * (1.0 - exc)) / omega, 2.5, max_relative = 1e-12);
    }

    #[test]
    fn explicit_drive_wins() {
        let mut p = SystemParams::default();
        p.chi = Some(1e9);
        p.delta_a = Some(-3e8);
        assert_eq!(resolve_drive(&p, 0.2), (1e9, -3e8));
    }

    #[test]
    fn quadrature_couplings_norm() {
        let p = SystemParams::default();
        let ss = fixed_point(&p).unwrap();
        let c = derive_couplings(&p, &ss);
        let lhs = c.g_px.powi(2) + c.g_py.powi(2);
        assert_relative_eq!(lhs, 2.0 * c.g0 * c.g0 * ss.c_s.norm_sqr(), max_relative = 1e-14);
    }

    #[test]
    fn phase_rotation_of_beta() {
        let p = SystemParams::default();
        let ss = fixed_point(&p).unwrap();
        let base = derive_couplings(&p, &ss);
        let phase = Complex64::from_polar(1.0, 0.7);
        let rotated = derive_couplings(&p, &SteadyState { beta: ss.beta * phase, ..ss });
        assert_relative_eq!(rotated.g2.norm(), base.g2.norm(), max_relative = 1e-15);
        assert!((rotated.g1 - base.g1 * phase).norm() <= 1e-12 * base.g1.norm());
        assert!((rotated.g3 - base.g3 * phase * phase).norm() <= 1e-12 * base.g3.norm());
    }

    #[test]
    fn figure_defaults_validate_cleanly() {
        assert!(validate(&SystemParams::default()).unwrap().is_empty());
    }

    #[test]
    fn strained_regimes_warn() {
        let mut p = SystemParams::default();
        p.gamma_m = 2.0 * p.omega_m;
        assert_eq!(validate(&p).unwrap(), vec![Warning::OverdampedMechanics]);
        assert_eq!(Warning::OverdampedMechanics.to_string(), "overdamped mechanics");

        let mut p = SystemParams::default();
        p.n_atoms = 10.0;
        assert_eq!(validate(&p).unwrap(), vec![Warning::SmallEnsemble]);
        assert_eq!(Warning::SmallEnsemble.to_string(), "small ensemble");
    }

    #[test]
    fn invalid_fields_rejected() {
        let mut p = SystemParams::default();
        p.kappa = -1.0;
        assert!(matches!(validate(&p), Err(Error::InvalidParameter { name: "kappa", .. })));
        let mut p = SystemParams::default();
        p.delta = f64::NAN;
        assert!(matches!(validate(&p), Err(Error::InvalidParameter { name: "delta", .. })));
        let mut p = SystemParams::default();
        p.n_atoms = 0.5;
        assert!(validate(&p).is_err());
    }
}
