//! Numerical self-checks. Every check is seeded, so a run is reproducible.

use atomcavity::audit::{covariance_audit, cross_route_audit, root_residual_audit, CROSS_ROUTE_TOL, LYAPUNOV_TOL};
use atomcavity::spectrum::output_spectrum;
use atomcavity::{derive_couplings, fixed_point, solve_beta, AppendixForm, SystemParams};

use crate::CliError;

const COVARIANCE_POINTS: usize = 60;
const ROOT_CASES: usize = 40;
const ROOT_TOL: f64 = 1e-10;
const EXCITATION_TOL: f64 = 0.003;
const COMPONENT_TOL: f64 = 0.005;
const SHOT_NOISE_TOL: f64 = 1e-10;
const SHOT_NOISE_POINTS: usize = 100;

pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

pub fn checks(seed: u64, points: usize, form: AppendixForm) -> Vec<Check> {
    let mut out = Vec::new();

    let r = cross_route_audit(seed, points, form);
    out.push(Check {
        name: "transfer routes agree",
        passed: r.passed(points),
        detail: format!("{} points, {} above {CROSS_ROUTE_TOL:e}, max {:.2e}", r.points, r.failures, r.max_mismatch),
    });

    let c = covariance_audit(seed, COVARIANCE_POINTS);
    out.push(Check {
        name: "covariance audit",
        passed: c.passed(),
        detail: format!(
            "{} points, residual {:.1e} (tol {LYAPUNOV_TOL:e}), min symplectic {:.6}, min E_N {:.1e}, {} errors",
            c.points, c.max_residual, c.min_symplectic, c.min_log_negativity, c.errors
        ),
    });

    let worst = root_residual_audit(seed, ROOT_CASES);
    out.push(Check {
        name: "steady-state roots",
        passed: worst <= ROOT_TOL,
        detail: format!("max residual {worst:.1e}"),
    });

    out.push(excitation_check());
    out.push(shot_noise_check());
    out
}

fn excitation_check() -> Check {
    let targets = [(1.0, 0.255), (2.5, 0.069), (8.0, 0.008)];
    let roots = [(1.0, (-0.411, -0.291)), (8.0, (-0.062, -0.061))];
    let mut passed = true;
    let mut parts = Vec::new();
    for (rates, want) in targets {
        let got = solve_beta(rates, rates).map_or(f64::NAN, |r| r[0].norm_sqr());
        passed &= (got - want).abs() <= EXCITATION_TOL;
        parts.push(format!("{got:.4}"));
    }
    for (rates, (re, im)) in roots {
        passed &= solve_beta(rates, rates)
            .is_ok_and(|r| (r[0].re - re).abs() <= COMPONENT_TOL && (r[0].im - im).abs() <= COMPONENT_TOL);
    }
    Check { name: "reference excitations", passed, detail: format!("|beta|^2 = {}", parts.join(", ")) }
}

fn shot_noise_check() -> Check {
    let p = SystemParams::with_case(1.0, 1.0, 0.0);
    let worst = fixed_point(&p).map_or(f64::INFINITY, |ss| {
        let c = derive_couplings(&p, &ss);
        (0..SHOT_NOISE_POINTS)
            .map(|k| {
                let w = (0.02 + 2.0 * k as f64 / SHOT_NOISE_POINTS as f64) * p.omega_m;
                output_spectrum(&p, &c, &ss, w).map_or(f64::INFINITY, |s| (s.s_out - 1.0).abs())
            })
            .fold(0.0, f64::max)
    });
    Check {
        name: "shot-noise floor",
        passed: worst <= SHOT_NOISE_TOL,
        detail: format!("max |S_out - 1| = {worst:.1e}"),
    }
}

pub fn table(checks: &[Check]) -> String {
    let mut s = String::new();
    for c in checks {
        s.push_str(&format!("{:<24} {:<4}  {}\n", c.name, if c.passed { "PASS" } else { "FAIL" }, c.detail));
    }
    s
}

/// Prints the table; the error carries the number of failed checks.
pub fn run(seed: u64, points: usize, as_printed: bool) -> Result<(), CliError> {
    let form = if as_printed { AppendixForm::AsPrinted } else { AppendixForm::Corrected };
    let results = checks(seed, points, form);
    print!("{}", table(&results));
    let failed = results.iter().filter(|c| !c.passed).count();
    println!("{} of {} checks passed", results.len() - failed, results.len());
    if failed > 0 {
        return Err(CliError::Numeric(format!("{failed} of {} verification checks failed", results.len())));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_rows_match_checks() {
        let c = [
            Check { name: "a", passed: true, detail: "ok".into() },
            Check { name: "b", passed: false, detail: "x".into() },
        ];
        let t = table(&c);
        assert_eq!(t.lines().count(), 2);
        assert!(t.lines().nth(1).unwrap().contains("FAIL"));
    }

    #[test]
    fn reference_checks_pass() {
        assert!(excitation_check().passed);
        assert!(shot_noise_check().passed);
    }
}
