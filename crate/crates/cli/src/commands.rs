use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use atomcavity::{
    detuning_sweep, fixed_point, spectrum_sweep, validate, EntanglementResult, SpectrumTable, SystemParams,
};
use serde::Serialize;

use crate::output::{csv, label, line_plot, number, Series};
use crate::{verify, CaseArgs, Cli, CliError, Command, Figure, OutputArgs};

/// Figure grids in units of ω_m.
const SPECTRUM_RANGE: (f64, f64) = (0.5, 1.5);
const DETUNING_RANGE: (f64, f64) = (0.0, 3.0);
const FIG_SPECTRUM_POINTS: usize = 1001;
const FIG_DETUNING_POINTS: usize = 500;
const FIG2_COUPLINGS: [f64; 4] = [25.0, 50.0, 75.0, 100.0];

pub fn dispatch(cli: &Cli) -> Result<(), CliError> {
    let params = cli.params.resolve()?;
    match &cli.command {
        Command::Steady { json } => steady(&params, *json),
        Command::Spectrum { case, g, omega_min, omega_max, points, output } => {
            let case = excitation_case(cli, case, &params);
            let g = if g.is_empty() { vec![params.coupling_g / params.kappa] } else { g.clone() };
            let grid = grid(*omega_min, *omega_max, *points, "omega")?;
            spectrum(&params, case, &g, &grid, output)
        }
        Command::Entangle { case, g, delta_min, delta_max, points, output } => {
            let case = excitation_case(cli, case, &params);
            let g = g.unwrap_or(params.coupling_g / params.kappa);
            let grid = grid(*delta_min, *delta_max, *points, "delta")?;
            entangle(&params, case, g, &grid, output)
        }
        Command::Reproduce { figure, outdir, points } => reproduce(&params, *figure, outdir, *points),
        Command::Verify { seed, points, appendix_as_printed } => verify::run(*seed, *points, *appendix_as_printed),
    }
}

/// Explicit `--delta-r`/`--gamma-r` win over `--case`, which wins over the file.
fn excitation_case(cli: &Cli, case: &CaseArgs, params: &SystemParams) -> (f64, f64) {
    (
        cli.params.delta_r.or(case.case).unwrap_or(params.delta_r),
        cli.params.gamma_r.or(case.case).unwrap_or(params.gamma_r),
    )
}

/// `points` evenly spaced values on `[lo, hi]`, in units of ω_m.
pub fn grid(lo: f64, hi: f64, points: usize, name: &str) -> Result<Vec<f64>, CliError> {
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(CliError::Config(format!("{name} range must be finite")));
    }
    match points {
        0 => Err(CliError::Config("--points must be at least 1".into())),
        1 => Ok(vec![lo]),
        _ if hi <= lo => Err(CliError::Config(format!("--{name}-max must exceed --{name}-min"))),
        n => Ok((0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()),
    }
}

/// Rejects invalid parameters and reports regime warnings on stderr.
fn checked(params: &SystemParams) -> Result<(), CliError> {
    for w in validate(params)? {
        eprintln!("warning: {w}");
    }
    Ok(())
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn emit(output: &OutputArgs, csv_text: &str, svg: impl FnOnce() -> String) -> Result<(), CliError> {
    match &output.out {
        Some(path) => write_file(path, csv_text)?,
        None => print!("{csv_text}"),
    }
    if let Some(path) = &output.svg {
        write_file(path, &svg())?;
    }
    Ok(())
}

#[derive(Serialize)]
struct SteadyRecord {
    beta_re: f64,
    beta_im: f64,
    excitation: f64,
    c_s_re: f64,
    c_s_im: f64,
    x_s: f64,
    p_s: f64,
    residual: f64,
    branch_count: usize,
    warnings: Vec<String>,
}

fn steady(params: &SystemParams, json: bool) -> Result<(), CliError> {
    let warnings: Vec<String> = validate(params)?.iter().map(ToString::to_string).collect();
    let ss = fixed_point(params)?;
    let record = SteadyRecord {
        beta_re: ss.beta.re,
        beta_im: ss.beta.im,
        excitation: ss.excitation,
        c_s_re: ss.c_s.re,
        c_s_im: ss.c_s.im,
        x_s: ss.x_s,
        p_s: ss.p_s,
        residual: ss.residual,
        branch_count: ss.branch_count,
        warnings,
    };
    if json {
        let text = serde_json::to_string_pretty(&record).map_err(|e| CliError::Io(e.to_string()))?;
        println!("{text}");
    } else {
        print!("{}", steady_text(&record));
    }
    Ok(())
}

fn steady_text(r: &SteadyRecord) -> String {
    let mut s = String::new();
    let rows = [
        ("beta", format!("{:>19.11e} {:+.11e}i", r.beta_re, r.beta_im)),
        ("excitation |beta|^2", format!("{:>19.11e}", r.excitation)),
        ("c_s", format!("{:>19.11e} {:+.11e}i", r.c_s_re, r.c_s_im)),
        ("x_s", format!("{:>19.11e}", r.x_s)),
        ("residual", format!("{:>19.11e}", r.residual)),
        ("branches", format!("{:>19}", r.branch_count)),
    ];
    for (k, v) in rows {
        let _ = writeln!(s, "{k:<20} {v}");
    }
    for w in &r.warnings {
        let _ = writeln!(s, "{:<20} {w}", "warning");
    }
    s
}

/// SI sweep over `g` (units of κ) and `grid` (units of ω_m).
fn spectrum_table(params: &SystemParams, case: (f64, f64), g: &[f64], grid: &[f64]) -> Result<SpectrumTable, CliError> {
    let mut p = *params;
    p.delta_r = case.0;
    p.gamma_r = case.1;
    for &gk in g {
        p.coupling_g = gk * p.kappa;
        checked(&p)?;
    }
    let g_si: Vec<f64> = g.iter().map(|x| x * params.kappa).collect();
    let omega: Vec<f64> = grid.iter().map(|x| x * params.omega_m).collect();
    let table = spectrum_sweep(params, case, &g_si, &omega);
    for (col, gk) in table.columns.iter().zip(g) {
        if !col.stable {
            eprintln!("note: G = {gk} kappa is outside the stable region; its spectrum is formal");
        }
    }
    Ok(table)
}

pub fn spectrum_csv(table: &SpectrumTable, g: &[f64]) -> String {
    let mut header = vec!["omega_over_omega_m".to_string()];
    header.extend(g.iter().map(|gk| format!("s_out_g{}", label(*gk))));
    let rows = table.omega_over_omega_m.iter().enumerate().map(|(i, &w)| {
        let mut row = vec![number(Some(w))];
        row.extend(table.columns.iter().map(|c| number(c.s_out[i])));
        row
    });
    csv(&header, rows)
}

fn spectrum_svg(table: &SpectrumTable, g: &[f64], case: (f64, f64)) -> String {
    let series: Vec<Series> = table
        .columns
        .iter()
        .zip(g)
        .map(|(c, gk)| Series {
            name: format!("G = {}κ", label(*gk)),
            points: table.omega_over_omega_m.iter().copied().zip(c.s_out.iter().copied()).collect(),
        })
        .collect();
    let title = format!("Δr = {}, γr = {}", label(case.0), label(case.1));
    line_plot(&title, "ω/ωm", "S_out(ω)", &series)
}

fn spectrum(
    params: &SystemParams,
    case: (f64, f64),
    g: &[f64],
    grid: &[f64],
    output: &OutputArgs,
) -> Result<(), CliError> {
    let table = spectrum_table(params, case, g, grid)?;
    emit(output, &spectrum_csv(&table, g), || spectrum_svg(&table, g, case))
}

fn detuning_rows(
    params: &SystemParams,
    case: (f64, f64),
    g: f64,
    grid: &[f64],
) -> Result<Vec<EntanglementResult>, CliError> {
    let mut p = *params;
    p.delta_r = case.0;
    p.gamma_r = case.1;
    p.coupling_g = g * p.kappa;
    checked(&p)?;
    let delta: Vec<f64> = grid.iter().map(|x| x * params.omega_m).collect();
    let rows = detuning_sweep(params, case, g * params.kappa, &delta);
    let errors: Vec<&str> = rows.iter().filter_map(|r| r.error.as_deref()).collect();
    if errors.len() == rows.len() && !rows.is_empty() {
        return Err(CliError::Numeric(format!("no detuning could be evaluated: {}", errors[0])));
    }
    if let Some(first) = errors.first() {
        eprintln!("note: {} of {} detunings failed ({first})", errors.len(), rows.len());
    }
    Ok(rows)
}

pub fn entangle_csv(rows: &[EntanglementResult]) -> String {
    let header = ["delta_over_omega_m", "stable", "e_n", "nu"].map(String::from);
    csv(
        &header,
        rows.iter()
            .map(|r| vec![number(Some(r.delta_over_omega_m)), r.stable.to_string(), number(r.e_n), number(r.nu)]),
    )
}

fn entanglement_series(name: String, rows: &[EntanglementResult]) -> Series {
    Series { name, points: rows.iter().map(|r| (r.delta_over_omega_m, r.e_n)).collect() }
}

fn entangle(
    params: &SystemParams,
    case: (f64, f64),
    g: f64,
    grid: &[f64],
    output: &OutputArgs,
) -> Result<(), CliError> {
    let rows = detuning_rows(params, case, g, grid)?;
    emit(output, &entangle_csv(&rows), || {
        let title = format!("G = {}κ, Δr = {}, γr = {}", label(g), label(case.0), label(case.1));
        line_plot(&title, "Δ/ωm", "E_N", &[entanglement_series("E_N".into(), &rows)])
    })
}

/// Several labelled `E_N` curves on a shared detuning grid.
fn entanglement_panel(columns: &[(String, Vec<EntanglementResult>)]) -> String {
    let mut header = vec!["delta_over_omega_m".to_string()];
    header.extend(columns.iter().map(|(name, _)| format!("e_n_{name}")));
    let n = columns.first().map_or(0, |c| c.1.len());
    csv(
        &header,
        (0..n).map(|i| {
            let mut row = vec![number(Some(columns[0].1[i].delta_over_omega_m))];
            row.extend(columns.iter().map(|(_, rows)| number(rows[i].e_n)));
            row
        }),
    )
}

/// CSV and SVG text of one panel.
type PanelResult = Result<(String, String), CliError>;

struct Panel {
    name: String,
    csv: String,
    svg: String,
}

fn fig2_panel(params: &SystemParams, rates: f64, points: usize) -> Result<(String, String), CliError> {
    let grid = grid(SPECTRUM_RANGE.0, SPECTRUM_RANGE.1, points, "omega")?;
    let mut p = *params;
    p.delta = -p.omega_m;
    let table = spectrum_table(&p, (rates, rates), &FIG2_COUPLINGS, &grid)?;
    Ok((spectrum_csv(&table, &FIG2_COUPLINGS), spectrum_svg(&table, &FIG2_COUPLINGS, (rates, rates))))
}

fn fig3_panel(params: &SystemParams, g: f64, points: usize) -> Result<(String, String), CliError> {
    let grid = grid(DETUNING_RANGE.0, DETUNING_RANGE.1, points, "delta")?;
    let mut p = *params;
    p.n_atoms = 1e7;
    let mut columns = Vec::new();
    for rates in [1.0, 8.0] {
        columns.push((format!("case{}", label(rates)), detuning_rows(&p, (rates, rates), g, &grid)?));
    }
    let series: Vec<Series> = columns
        .iter()
        .zip([1.0, 8.0])
        .map(|((_, rows), r)| entanglement_series(format!("Δr = γr = {}", label(r)), rows))
        .collect();
    Ok((entanglement_panel(&columns), line_plot(&format!("G = {}κ", label(g)), "Δ/ωm", "E_N", &series)))
}

fn fig4_panel(params: &SystemParams, g: f64, points: usize) -> Result<(String, String), CliError> {
    let grid = grid(DETUNING_RANGE.0, DETUNING_RANGE.1, points, "delta")?;
    let mut columns = Vec::new();
    for n in [1e6, 1e7] {
        let mut p = *params;
        p.n_atoms = n;
        columns.push((format!("n{n:e}"), detuning_rows(&p, (1.0, 1.0), g, &grid)?));
    }
    let series: Vec<Series> =
        columns.iter().map(|(name, rows)| entanglement_series(format!("N = {}", &name[1..]), rows)).collect();
    Ok((entanglement_panel(&columns), line_plot(&format!("G = {}κ, Δr = γr = 1", label(g)), "Δ/ωm", "E_N", &series)))
}

/// Panels are independent: a failing panel is reported and the rest are
/// still written.
fn reproduce(params: &SystemParams, figure: Figure, outdir: &Path, points: Option<usize>) -> Result<(), CliError> {
    std::fs::create_dir_all(outdir).map_err(|e| CliError::Io(format!("cannot create {}: {e}", outdir.display())))?;
    let panels: Vec<(String, PanelResult)> = match figure {
        Figure::Fig2 => [("fig2a", 1.0), ("fig2b", 2.5), ("fig2c", 8.0)]
            .into_iter()
            .map(|(name, r)| (name.to_string(), fig2_panel(params, r, points.unwrap_or(FIG_SPECTRUM_POINTS))))
            .collect(),
        Figure::Fig3 => [("fig3a", 25.0), ("fig3b", 100.0)]
            .into_iter()
            .map(|(name, g)| (name.to_string(), fig3_panel(params, g, points.unwrap_or(FIG_DETUNING_POINTS))))
            .collect(),
        Figure::Fig4 => [("fig4a", 25.0), ("fig4b", 100.0)]
            .into_iter()
            .map(|(name, g)| (name.to_string(), fig4_panel(params, g, points.unwrap_or(FIG_DETUNING_POINTS))))
            .collect(),
    };
    let total = panels.len();
    let mut failed = 0;
    for (name, result) in panels {
        let written = result.and_then(|(csv, svg)| {
            let panel = Panel { name, csv, svg };
            write_panel(outdir, &panel)
        });
        match written {
            Ok(paths) => {
                for p in paths {
                    eprintln!("wrote {}", p.display());
                }
            }
            Err(e) => {
                failed += 1;
                eprintln!("error: {e}");
            }
        }
    }
    if failed > 0 {
        return Err(CliError::Numeric(format!("{failed} of {total} panels failed")));
    }
    Ok(())
}

fn write_panel(outdir: &Path, panel: &Panel) -> Result<Vec<PathBuf>, CliError> {
    let csv_path = outdir.join(format!("{}.csv", panel.name));
    let svg_path = outdir.join(format!("{}.svg", panel.name));
    write_file(&csv_path, &panel.csv)?;
    write_file(&svg_path, &panel.svg)?;
    Ok(vec![csv_path, svg_path])
}
