//! Nonlinear steady state of the collective atomic amplitude and the fixed
//! point of the full system.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{cavity_shift, SystemParams};
use crate::numerics::{newton2d_multistart, square_grid, DEFAULT_TOL};

/// Start grid resolution for the root search on `[−2, 2]²`.
pub const ROOT_GRID: usize = 21;
pub const ROOT_GRID_HALF_WIDTH: f64 = 2.0;
/// Self-consistent iteration limits.
pub const SELF_CONSISTENT_TOL: f64 = 1e-10;
pub const SELF_CONSISTENT_MAX_ITERATIONS: usize = 200;

/// Fixed point `(β, c_s, x_s, p_s)` with `β = B_s/√N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SteadyState {
    pub beta: Complex64,
    /// `|β|²`
    pub excitation: f64,
    pub c_s: Complex64,
    pub x_s: f64,
    pub p_s: f64,
    /// `‖·‖∞` of the amplitude equation at `beta`.
    pub residual: f64,
    pub branch_count: usize,
}

/// Left-hand side of `−2(Δ_r − iγ_r)β + 2|β|² + β² − 2 = 0`.
pub fn beta_equation(beta: Complex64, delta_r: f64, gamma_r: f64) -> Complex64 {
    Complex64::new(-2.0 * delta_r, 2.0 * gamma_r) * beta + 2.0 * beta.norm_sqr() + beta * beta - 2.0
}

fn max_abs(z: Complex64) -> f64 {
    z.re.abs().max(z.im.abs())
}

/// All roots of the amplitude equation found from a `ROOT_GRID²` start grid,
/// sorted by ascending `|β|²`.
pub fn solve_beta(delta_r: f64, gamma_r: f64) -> Result<Vec<Complex64>> {
    solve_beta_on_grid(delta_r, gamma_r, ROOT_GRID)
}

pub fn solve_beta_on_grid(delta_r: f64, gamma_r: f64, grid: usize) -> Result<Vec<Complex64>> {
    let f = |v: [f64; 2]| {
        let r = beta_equation(Complex64::new(v[0], v[1]), delta_r, gamma_r);
        [r.re, r.im]
    };
    let starts = square_grid(-ROOT_GRID_HALF_WIDTH, ROOT_GRID_HALF_WIDTH, grid);
    let mut roots: Vec<Complex64> =
        newton2d_multistart(f, &starts, DEFAULT_TOL).into_iter().map(|v| Complex64::new(v[0], v[1])).collect();
    if roots.is_empty() {
        return Err(Error::NoRoot { delta_r, gamma_r });
    }
    roots.sort_by(|a, b| a.norm_sqr().total_cmp(&b.norm_sqr()));
    Ok(roots)
}

/// Cavity amplitude driven by the atomic coherence at detuning `delta`.
pub fn cavity_amplitude(params: &SystemParams, beta: Complex64, delta: f64) -> Complex64 {
    let num = Complex64::new(0.0, -params.coupling_g * params.sqrt_n()) * beta * (1.0 - beta.norm_sqr() / 2.0);
    num / Complex64::new(params.kappa, delta)
}

impl SteadyState {
    /// Completes the fixed point for a given amplitude root.
    pub fn from_beta(params: &SystemParams, beta: Complex64, branch_count: usize) -> Self {
        let c_s = if params.coupling_g == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            cavity_amplitude(params, beta, params.delta)
        };
        Self {
            beta,
            excitation: beta.norm_sqr(),
            c_s,
            x_s: params.g0() * c_s.norm_sqr() / params.omega_m,
            p_s: 0.0,
            residual: max_abs(beta_equation(beta, params.delta_r, params.gamma_r)),
            branch_count,
        }
    }
}

/// Fixed point on the lowest-excitation branch.
pub fn fixed_point(params: &SystemParams) -> Result<SteadyState> {
    let roots = solve_beta(params.delta_r, params.gamma_r)?;
    Ok(SteadyState::from_beta(params, roots[0], roots.len()))
}

/// How the cavity detuning is treated during the self-consistent iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EffectiveDetuning {
    /// `Δ` is the configured value throughout.
    Fixed,
    /// `Δ = Δ_c − G₀x_s` is updated from each new fixed point.
    Tracked { delta_c: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfConsistent {
    pub delta_r: f64,
    pub gamma_r: f64,
    pub beta: Complex64,
    /// Effective cavity detuning at convergence.
    pub delta: f64,
    pub iterations: usize,
}

/// Effective atomic rates `(Δ_r, γ_r)` at a given excitation and detuning.
pub fn effective_rates(params: &SystemParams, omega: f64, delta_a: f64, excitation: f64, delta: f64) -> (f64, f64) {
    let s = cavity_shift(params, delta);
    ((delta_a - s * (1.0 - 2.0 * excitation)) / omega, (params.gamma_a + s * (1.0 - excitation)) / omega)
}

/// Experimental mode: iterates the effective rates and the amplitude root to
/// a common fixed point. Needs `chi` and `delta_a` in `params`.
///
/// `relaxation` in `(0, 1]` mixes the new excitation into the old one; `1`
/// is the plain iteration.
pub fn self_consistent_rates(
    params: &SystemParams,
    initial_beta: Complex64,
    detuning: EffectiveDetuning,
    relaxation: f64,
) -> Result<SelfConsistent> {
    let chi = params
        .chi
        .ok_or_else(|| Error::InvalidParameter { name: "chi", reason: "required in self-consistent mode".into() })?;
    let delta_a = params.delta_a.ok_or_else(|| Error::InvalidParameter {
        name: "delta_a",
        reason: "required in self-consistent mode".into(),
    })?;
    if !(relaxation > 0.0 && relaxation <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "relaxation",
            reason: format!("must lie in (0, 1], got {relaxation}"),
        });
    }
    let omega = chi / params.sqrt_n();
    let mut excitation = initial_beta.norm_sqr();
    let mut delta = params.delta;

    for iteration in 1..=SELF_CONSISTENT_MAX_ITERATIONS {
        let (delta_r, gamma_r) = effective_rates(params, omega, delta_a, excitation, delta);
        let beta = solve_beta(delta_r, gamma_r)?[0];
        let next = beta.norm_sqr();
        if let EffectiveDetuning::Tracked { delta_c } = detuning {
            let c_s = cavity_amplitude(params, beta, delta);
            delta = delta_c - params.g0() * params.g0() * c_s.norm_sqr() / params.omega_m;
        }
        if (next - excitation).abs() < SELF_CONSISTENT_TOL {
            return Ok(SelfConsistent { delta_r, gamma_r, beta, delta, iterations: iteration });
        }
        excitation += relaxation * (next - excitation);
    }
    Err(Error::NoConvergence { iterations: SELF_CONSISTENT_MAX_ITERATIONS, last_excitation: excitation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn high_excitation_root() {
        let roots = solve_beta(1.0, 1.0).unwrap();
        let b = roots[0];
        assert!((b - c(-0.411, -0.291)).norm() < 2e-3, "beta = {b}");
        assert!((b.norm_sqr() - 0.255).abs() < 2e-3);
    }

    #[test]
    fn medium_and_low_excitation() {
        assert!((solve_beta(2.5, 2.5).unwrap()[0].norm_sqr() - 0.069).abs() < 1e-3);
        let b = solve_beta(8.0, 8.0).unwrap()[0];
        assert!((b.norm_sqr() - 0.008).abs() < 1e-3);
        assert!((b - c(-0.062, -0.061)).norm() < 2e-3);
    }

    #[test]
    fn every_root_satisfies_equation() {
        for (dr, gr) in [(1.0, 1.0), (2.5, 2.5), (8.0, 8.0), (-1.0, 0.5), (0.2, 3.0)] {
            for b in solve_beta(dr, gr).unwrap() {
                assert!(max_abs(beta_equation(b, dr, gr)) <= 1e-10);
            }
        }
    }

    #[test]
    fn roots_stable_under_grid_refinement() {
        for (dr, gr) in [(1.0, 1.0), (2.5, 2.5), (8.0, 8.0)] {
            let coarse = solve_beta_on_grid(dr, gr, 21).unwrap();
            let fine = solve_beta_on_grid(dr, gr, 41).unwrap();
            for r in &fine {
                assert!(coarse.iter().any(|q| (q - r).norm() < 1e-8), "{r} missing from coarse grid");
            }
            for r in &coarse {
                assert!(fine.iter().any(|q| (q - r).norm() < 1e-8));
            }
        }
    }

    #[test]
    fn fixed_point_invariants() {
        let p = SystemParams::default();
        let ss = fixed_point(&p).unwrap();
        assert_eq!(ss.p_s, 0.0);
        assert!(ss.residual <= 1e-10);
        assert!((ss.excitation - 0.255).abs() < 2e-3);
        let x = p.g0() * ss.c_s.norm_sqr() / p.omega_m;
        assert!((ss.x_s - x).abs() <= 1e-12 * x);
        assert!(ss.branch_count >= 1);

        let low = fixed_point(&SystemParams::with_case(8.0, 8.0, 25.0)).unwrap();
        assert!((low.excitation - 0.008).abs() < 1e-3);
    }

    #[test]
    fn uncoupled_cavity_is_empty() {
        let p = SystemParams::with_case(1.0, 1.0, 0.0);
        let ss = fixed_point(&p).unwrap();
        assert_eq!(ss.c_s, c(0.0, 0.0));
        assert_eq!(ss.x_s, 0.0);
    }

    fn drive_for_unit_rates(p: &SystemParams, excitation: f64) -> SystemParams {
        let (chi, delta_a) = crate::model::resolve_drive(p, excitation);
        SystemParams { chi: Some(chi), delta_a: Some(delta_a), ..*p }
    }

    #[test]
    fn uncoupled_rates_are_bare() {
        let mut p = SystemParams::with_case(1.0, 1.0, 0.0);
        p.chi = Some(3e9);
        p.delta_a = Some(2e8);
        let sc = self_consistent_rates(&p, c(0.1, 0.0), EffectiveDetuning::Fixed, 1.0).unwrap();
        let omega = 3e9 / p.sqrt_n();
        assert!((sc.delta_r - 2e8 / omega).abs() < 1e-15 * sc.delta_r.abs());
        assert!((sc.gamma_r - p.gamma_a / omega).abs() < 1e-15 * sc.gamma_r);
        assert!(sc.iterations <= 2);
    }

    #[test]
    fn self_consistent_matches_direct_root() {
        let base = SystemParams::default();
        let target = solve_beta(1.0, 1.0).unwrap()[0];
        let p = drive_for_unit_rates(&base, target.norm_sqr());
        // the plain iteration oscillates in this high-excitation case
        let sc = self_consistent_rates(&p, c(0.0, 0.0), EffectiveDetuning::Fixed, 0.5).unwrap();
        assert!((sc.beta - target).norm() < 1e-8, "{} vs {target}", sc.beta);
        assert!((sc.delta_r - 1.0).abs() < 1e-8 && (sc.gamma_r - 1.0).abs() < 1e-8);
    }

    #[test]
    fn missing_drive_rejected() {
        let r = self_consistent_rates(&SystemParams::default(), c(0.0, 0.0), EffectiveDetuning::Fixed, 1.0);
        assert!(matches!(r, Err(Error::InvalidParameter { name: "chi", .. })));
    }

    #[test]
    fn tracked_detuning_shifts_by_displacement() {
        let base = SystemParams::default();
        let exc = solve_beta(1.0, 1.0).unwrap()[0].norm_sqr();
        let p = drive_for_unit_rates(&base, exc);
        let delta_c = base.delta + 1e5;
        let sc = self_consistent_rates(&p, c(0.0, 0.0), EffectiveDetuning::Tracked { delta_c }, 0.5).unwrap();
        let c_s = cavity_amplitude(&p, sc.beta, sc.delta);
        let shift = p.g0() * p.g0() * c_s.norm_sqr() / p.omega_m;
        assert!((sc.delta - (delta_c - shift)).abs() <= 1e-6 * shift.max(1.0));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn relaxation_does_not_move_fixed_point(g in 0.0..60.0f64, case in 0usize..3) {
            let rates = [1.0, 2.5, 8.0][case];
            let base = SystemParams::with_case(rates, rates, g);
            let exc = solve_beta(rates, rates).unwrap()[0].norm_sqr();
            let p = drive_for_unit_rates(&base, exc);
            let plain = self_consistent_rates(&p, c(0.0, 0.0), EffectiveDetuning::Fixed, 1.0);
            let damped = self_consistent_rates(&p, c(0.0, 0.0), EffectiveDetuning::Fixed, 0.5).unwrap();
            if let Ok(plain) = plain {
                prop_assert!((plain.beta - damped.beta).norm() < 1e-7);
            }
        }
    }
}
