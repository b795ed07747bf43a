//! Seeded self-checks shared by the acceptance suite and the CLI `verify`
//! command.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::entanglement::{build_drift, log_negativity, steady_covariance};
use crate::model::{derive_couplings, DerivedCouplings, SystemParams};
use crate::numerics::lyapunov_residual;
use crate::spectrum::{transfer_closed_form_with, transfer_direct, AppendixForm, TransferCoefficients};
use crate::steadystate::{beta_equation, fixed_point, solve_beta, SteadyState};

/// Agreement required between the two transfer routes.
pub const CROSS_ROUTE_TOL: f64 = 1e-8;
/// Coefficients smaller than this fraction of the largest one at the same
/// point are compared in absolute terms against it.
pub const CROSS_ROUTE_FLOOR: f64 = 1e-10;
pub const LYAPUNOV_TOL: f64 = 1e-9;

/// A randomly drawn parameter set with a stable linearization.
#[derive(Debug, Clone)]
pub struct AuditPoint {
    pub params: SystemParams,
    pub ss: SteadyState,
    pub couplings: DerivedCouplings,
    /// Probe frequency, rad/s.
    pub omega: f64,
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

fn draw(rng: &mut ChaCha8Rng) -> (SystemParams, f64) {
    let omega_m = 2.0 * PI * 4e7;
    let kappa = rng.random_range(0.02..0.5) * omega_m;
    let p = SystemParams {
        omega_m,
        kappa,
        gamma_a: rng.random_range(5.0..40.0) * kappa,
        gamma_m: log_uniform(rng, 1e-4, 1e-2) * omega_m,
        n_atoms: log_uniform(rng, 1e5, 1e8),
        coupling_g: rng.random_range(0.0..100.0) * kappa,
        delta: rng.random_range(-2.0..2.0) * omega_m,
        delta_r: rng.random_range(0.5..10.0),
        gamma_r: rng.random_range(0.5..10.0),
        mirror_mass: log_uniform(rng, 1e-16, 1e-12),
        ..SystemParams::default()
    };
    (p, rng.random_range(-2.0..2.0) * omega_m)
}

/// `count` stable points drawn deterministically from `seed`.
pub fn random_stable_points(seed: u64, count: usize) -> Vec<AuditPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count && attempts < 200 * count.max(1) {
        attempts += 1;
        let (params, omega) = draw(&mut rng);
        let Ok(ss) = fixed_point(&params) else { continue };
        let couplings = derive_couplings(&params, &ss);
        if build_drift(&params, &couplings, &ss).is_stable() {
            out.push(AuditPoint { params, ss, couplings, omega });
        }
    }
    out
}

/// Largest per-coefficient relative difference.
pub fn coefficient_mismatch(a: &TransferCoefficients, b: &TransferCoefficients) -> f64 {
    let (xa, xb) = (a.as_array(), b.as_array());
    let largest = xa.iter().chain(&xb).map(|z| z.norm()).fold(0.0, f64::max);
    let floor = CROSS_ROUTE_FLOOR * largest;
    xa.iter()
        .zip(&xb)
        .map(|(p, q)| (p - q).norm() / p.norm().max(q.norm()).max(floor).max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossRouteReport {
    pub points: usize,
    pub failures: usize,
    pub max_mismatch: f64,
}

impl CrossRouteReport {
    pub fn passed(&self, required: usize) -> bool {
        self.points >= required && self.failures == 0
    }
}

/// Compares the direct and closed-form transfer routes on seeded points.
pub fn cross_route_audit(seed: u64, count: usize, form: AppendixForm) -> CrossRouteReport {
    let points = random_stable_points(seed, count);
    let mismatches: Vec<f64> = points
        .par_iter()
        .map(|pt| {
            let direct = transfer_direct(&pt.params, &pt.couplings, &pt.ss, pt.omega);
            let closed = transfer_closed_form_with(&pt.params, &pt.couplings, &pt.ss, pt.omega, form);
            match (direct, closed) {
                (Ok(a), Ok(b)) => coefficient_mismatch(&a, &b),
                _ => f64::INFINITY,
            }
        })
        .collect();
    CrossRouteReport {
        points: points.len(),
        failures: mismatches.iter().filter(|&&m| !(m <= CROSS_ROUTE_TOL)).count(),
        max_mismatch: mismatches.iter().copied().fold(0.0, f64::max),
    }
}

/// Lyapunov residual, bona-fide and `E_N ≥ 0` checks on seeded points.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceReport {
    pub points: usize,
    /// Largest `‖JV + VJᵀ + D‖max / ‖D‖max`.
    pub max_residual: f64,
    /// Smallest symplectic eigenvalue of any untransposed reduced covariance.
    pub min_symplectic: f64,
    pub min_log_negativity: f64,
    pub errors: usize,
}

impl CovarianceReport {
    pub fn passed(&self) -> bool {
        self.errors == 0
            && self.max_residual <= LYAPUNOV_TOL
            && self.min_symplectic >= 0.5 - 1e-9
            && self.min_log_negativity >= 0.0
    }
}

pub fn covariance_audit(seed: u64, count: usize) -> CovarianceReport {
    let points = random_stable_points(seed, count);
    let rows: Vec<Option<(f64, f64, f64)>> = points
        .par_iter()
        .map(|pt| {
            let ds = build_drift(&pt.params, &pt.couplings, &pt.ss);
            let v = steady_covariance(&ds).ok()?;
            let residual = lyapunov_residual(&ds.j, &v, &ds.d) / ds.d.norm_max();
            let (lo, _) = crate::numerics::symplectic_eigenvalues(&v.block(0, 0, 4, 4)).ok()?;
            let (e_n, _) = log_negativity(&v).ok()?;
            Some((residual, lo, e_n))
        })
        .collect();
    let ok: Vec<_> = rows.iter().flatten().collect();
    CovarianceReport {
        points: points.len(),
        max_residual: ok.iter().map(|r| r.0).fold(0.0, f64::max),
        min_symplectic: ok.iter().map(|r| r.1).fold(f64::INFINITY, f64::min),
        min_log_negativity: ok.iter().map(|r| r.2).fold(f64::INFINITY, f64::min),
        errors: rows.len() - ok.len(),
    }
}

/// Largest amplitude-equation residual over every root of the figure cases
/// and a seeded set of random rates.
pub fn root_residual_audit(seed: u64, count: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = vec![(1.0, 1.0), (2.5, 2.5), (8.0, 8.0)];
    cases.extend((0..count).map(|_| (rng.random_range(-5.0..10.0), rng.random_range(0.2..10.0))));
    cases
        .par_iter()
        .map(|&(dr, gr)| match solve_beta(dr, gr) {
            Ok(roots) => roots
                .iter()
                .map(|&b| {
                    let r = beta_equation(b, dr, gr);
                    r.re.abs().max(r.im.abs())
                })
                .fold(0.0, f64::max),
            Err(_) => f64::INFINITY,
        })
        .reduce(|| 0.0, f64::max)
}
