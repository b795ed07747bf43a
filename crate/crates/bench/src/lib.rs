//! Shared fixtures for the criterion benchmarks.

use atomcavity::{derive_couplings, fixed_point, DerivedCouplings, SteadyState, SystemParams};

/// Default parameters at one excitation case and coupling, with the steady
/// state and couplings.
pub fn figure_point(delta_r: f64, gamma_r: f64, g_over_kappa: f64) -> (SystemParams, SteadyState, DerivedCouplings) {
    let p = SystemParams::with_case(delta_r, gamma_r, g_over_kappa);
    let ss = fixed_point(&p).expect("figure parameters have a steady state");
    let c = derive_couplings(&p, &ss);
    (p, ss, c)
}

/// `n` evenly spaced values on `[lo, hi]` scaled by `unit`.
pub fn grid(lo: f64, hi: f64, n: usize, unit: f64) -> Vec<f64> {
    (0..n).map(|k| (lo + (hi - lo) * k as f64 / (n - 1).max(1) as f64) * unit).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints() {
        assert_eq!(grid(0.5, 1.5, 3, 2.0), vec![1.0, 2.0, 3.0]);
        assert_eq!(grid(1.0, 2.0, 1, 1.0), vec![1.0]);
    }

    #[test]
    fn fixture_is_consistent() {
        let (p, ss, c) = figure_point(1.0, 1.0, 25.0);
        assert!((ss.excitation - 0.2545).abs() < 1e-3);
        assert_eq!(c.g0, p.g0());
    }
}
