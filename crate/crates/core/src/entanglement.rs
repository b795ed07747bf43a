//! Quadrature drift system, steady covariance and optomechanical
//! logarithmic negativity.
//!
//! Basis `(δx, δp, δX, δY, δU, δV)` with `δX = (δc + δc†)/√2`,
//! `δY = (δc − δc†)/(i√2)` and likewise `δU, δV` for the atomic mode.
//! Vacuum variance is 1/2 per quadrature.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{derive_couplings, DerivedCouplings, SystemParams};
use crate::numerics::{is_hurwitz, lyapunov_solve, symplectic_nu, RealMatrix};
use crate::steadystate::{fixed_point, solve_beta, SteadyState};

#[derive(Debug, Clone, PartialEq)]
pub struct DriftSystem {
    pub j: RealMatrix,
    pub d: RealMatrix,
    /// Atom–cavity shorthands `t₁…t₈`, in the order they appear in rows 3–6.
    pub t: [f64; 8],
}

impl DriftSystem {
    pub fn is_stable(&self) -> bool {
        is_hurwitz(&self.j)
    }
}

pub fn build_drift(params: &SystemParams, couplings: &DerivedCouplings, _ss: &SteadyState) -> DriftSystem {
    let c = couplings;
    let g2 = c.g2.re;
    let t = [
        c.g3_mu,
        g2 + c.g3_nu,
        c.g3_nu - g2,
        -c.g3_mu,
        c.g_mu - params.gamma_a,
        c.g_nu + c.delta_a_prime,
        c.g_nu - c.delta_a_prime,
        -params.gamma_a - c.g_mu,
    ];
    let (wm, k, dl) = (params.omega_m, params.kappa, params.delta);
    let j = RealMatrix::from_rows([
        [0.0, wm, 0.0, 0.0, 0.0, 0.0],
        [-wm, -params.gamma_m, c.g_px, c.g_py, 0.0, 0.0],
        [-c.g_py, 0.0, -k, dl, t[0], t[1]],
        [c.g_px, 0.0, -dl, -k, t[2], t[3]],
        [0.0, 0.0, t[0], t[1], t[4], t[5]],
        [0.0, 0.0, t[2], t[3], t[6], t[7]],
    ]);
    let d = RealMatrix::from_diagonal(&[
        0.0,
        params.gamma_m * (2.0 * params.n_thermal + 1.0),
        params.kappa,
        params.kappa,
        params.gamma_a,
        params.gamma_a,
    ]);
    DriftSystem { j, d, t }
}

pub fn steady_covariance(ds: &DriftSystem) -> Result<RealMatrix> {
    lyapunov_solve(&ds.j, &ds.d)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntanglementResult {
    pub delta_over_omega_m: f64,
    pub stable: bool,
    pub e_n: Option<f64>,
    pub nu: Option<f64>,
    /// Set when the point could not be evaluated for a reason other than
    /// instability.
    pub error: Option<String>,
}

/// Mechanics–optics block of a 6×6 covariance; the atomic mode is traced out.
pub fn reduced_covariance(v: &RealMatrix) -> RealMatrix {
    v.block(0, 0, 4, 4)
}

/// `E_N = max(0, −ln 2ν)` of the mechanics–optics bipartition.
pub fn log_negativity(v: &RealMatrix) -> Result<(f64, f64)> {
    let nu = symplectic_nu(&reduced_covariance(v))?;
    Ok(((-(2.0 * nu).ln()).max(0.0), nu))
}

/// Full pipeline at one detuning; `params.delta` is replaced by `delta`.
pub fn entanglement_at(params: &SystemParams, delta: f64) -> EntanglementResult {
    let mut p = *params;
    p.delta = delta;
    evaluate(&p, fixed_point(&p))
}

fn evaluate(p: &SystemParams, ss: Result<SteadyState>) -> EntanglementResult {
    let mut row =
        EntanglementResult { delta_over_omega_m: p.delta / p.omega_m, stable: false, e_n: None, nu: None, error: None };
    let ss = match ss {
        Ok(ss) => ss,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    let ds = build_drift(p, &derive_couplings(p, &ss), &ss);
    row.stable = ds.is_stable();
    if !row.stable {
        return row;
    }
    match steady_covariance(&ds).and_then(|v| log_negativity(&v)) {
        Ok((e_n, nu)) => {
            row.e_n = Some(e_n);
            row.nu = Some(nu);
        }
        Err(Error::UnstableDrift) => row.stable = false,
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

/// `E_N` over a grid of detunings (rad/s) for the excitation case
/// `(Δ_r, γ_r)` and coupling `g` (rad/s). Rows keep grid order. The atomic
/// amplitude does not depend on the detuning, so it is solved once.
pub fn detuning_sweep(params: &SystemParams, case: (f64, f64), g: f64, delta_grid: &[f64]) -> Vec<EntanglementResult> {
    let mut p = *params;
    p.delta_r = case.0;
    p.gamma_r = case.1;
    p.coupling_g = g;
    let roots = solve_beta(p.delta_r, p.gamma_r);
    delta_grid
        .par_iter()
        .map(|&delta| {
            let mut q = p;
            q.delta = delta;
            let ss = match &roots {
                Ok(r) => Ok(SteadyState::from_beta(&q, r[0], r.len())),
                Err(e) => Err(e.clone()),
            };
            evaluate(&q, ss)
        })
        .collect()
}
