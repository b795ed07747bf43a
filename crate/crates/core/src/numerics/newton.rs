//! Multistart Newton iteration for maps ℝ² → ℝ².

pub const DEFAULT_TOL: f64 = 1e-12;
pub const MAX_ITERATIONS: usize = 100;
/// Converged points closer than this are considered the same root.
pub const DEDUP_DISTANCE: f64 = 1e-6;

fn inf_norm(v: [f64; 2]) -> f64 {
    v[0].abs().max(v[1].abs())
}

fn jacobian<F: Fn([f64; 2]) -> [f64; 2]>(f: &F, x: [f64; 2]) -> [[f64; 2]; 2] {
    let mut jac = [[0.0; 2]; 2];
    for k in 0..2 {
        let h = 1e-7 * (1.0 + x[k].abs());
        let mut xp = x;
        let mut xm = x;
        xp[k] += h;
        xm[k] -= h;
        let (fp, fm) = (f(xp), f(xm));
        for i in 0..2 {
            jac[i][k] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    jac
}

/// Newton iteration from a single start with a central-difference Jacobian
/// and step halving on the residual. `None` if it does not reach `tol`.
pub fn newton2d<F>(f: &F, start: [f64; 2], tol: f64) -> Option<[f64; 2]>
where
    F: Fn([f64; 2]) -> [f64; 2],
{
    let mut x = start;
    let mut fx = f(x);
    let mut res = inf_norm(fx);
    for _ in 0..MAX_ITERATIONS {
        if !res.is_finite() {
            return None;
        }
        if res <= tol {
            return Some(x);
        }
        let j = jacobian(f, x);
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let dx = [-(j[1][1] * fx[0] - j[0][1] * fx[1]) / det, -(-j[1][0] * fx[0] + j[0][0] * fx[1]) / det];
        let mut step = 1.0;
        loop {
            let trial = [x[0] + step * dx[0], x[1] + step * dx[1]];
            let ft = f(trial);
            let rt = inf_norm(ft);
            if rt < res || step < 1e-4 {
                x = trial;
                fx = ft;
                res = rt;
                break;
            }
            step *= 0.5;
        }
    }
    (res <= tol).then_some(x)
}

/// Runs [`newton2d`] from every start point and returns the distinct roots
/// found, in order of discovery. Starts that fail to converge are dropped
/// silently, so an empty list is a valid result.
pub fn newton2d_multistart<F>(f: F, grid: &[[f64; 2]], tol: f64) -> Vec<[f64; 2]>
where
    F: Fn([f64; 2]) -> [f64; 2],
{
    let mut roots: Vec<[f64; 2]> = Vec::new();
    for &start in grid {
        if let Some(r) = newton2d(&f, start, tol) {
            let dup = roots.iter().any(|q| ((q[0] - r[0]).powi(2) + (q[1] - r[1]).powi(2)).sqrt() <= DEDUP_DISTANCE);
            if !dup {
                roots.push(r);
            }
        }
    }
    roots
}

/// Uniform `n × n` grid of start points on `[lo, hi]²`.
pub fn square_grid(lo: f64, hi: f64, n: usize) -> Vec<[f64; 2]> {
    let step = if n > 1 { (hi - lo) / (n - 1) as f64 } else { 0.0 };
    (0..n).flat_map(|i| (0..n).map(move |j| [lo + i as f64 * step, lo + j as f64 * step])).collect()
}
