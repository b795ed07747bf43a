use rayon::prelude::*;
use serde::Serialize;

use super::output_spectrum;
use crate::entanglement::build_drift;
use crate::error::Result;
use crate::model::{derive_couplings, SystemParams};
use crate::steadystate::fixed_point;

/// One coupling strength of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumColumn {
    /// Coupling `G`, rad/s.
    pub coupling_g: f64,
    /// Routh–Hurwitz stability of the linearized dynamics.
    pub stable: bool,
    /// `None` at poles of `A(ω)` and when the steady state failed.
    pub s_out: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumTable {
    pub omega_over_omega_m: Vec<f64>,
    pub columns: Vec<SpectrumColumn>,
}

/// `S_out` on `omega_grid` (rad/s) for each coupling in `g_values` (rad/s)
/// at the excitation case `(Δ_r, γ_r)`. The steady state is computed once per
/// coupling; evaluation order does not affect the result.
pub fn spectrum_sweep(params: &SystemParams, case: (f64, f64), g_values: &[f64], omega_grid: &[f64]) -> SpectrumTable {
    let columns = g_values
        .iter()
        .map(|&g| {
            let mut p = *params;
            p.delta_r = case.0;
            p.gamma_r = case.1;
            p.coupling_g = g;
            column(&p, omega_grid).unwrap_or_else(|_| SpectrumColumn {
                coupling_g: g,
                stable: false,
                s_out: vec![None; omega_grid.len()],
            })
        })
        .collect();
    SpectrumTable { omega_over_omega_m: omega_grid.iter().map(|w| w / params.omega_m).collect(), columns }
}

fn column(p: &SystemParams, omega_grid: &[f64]) -> Result<SpectrumColumn> {
    let ss = fixed_point(p)?;
    let c = derive_couplings(p, &ss);
    let stable = build_drift(p, &c, &ss).is_stable();
    let s_out = omega_grid.par_iter().map(|&w| output_spectrum(p, &c, &ss, w).ok().map(|pt| pt.s_out)).collect();
    Ok(SpectrumColumn { coupling_g: p.coupling_g, stable, s_out })
}
