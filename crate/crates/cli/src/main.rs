//! `oscishell`: path sweeps, single-state diagnosis, contour export and the
//! verification suite.
//!
//! Exit codes: 0 success, 1 invalid arguments or input, 2 some sweep points
//! failed, 3 a verification checkpoint failed.

mod config;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use oscishell::checkpoints::{all_passed, run_checkpoints, Level, VerifyConfig};
use oscishell::entropy::{EntropyReport, Flag, QuadConfig};
use oscishell::nodal::contour::{DEFAULT_CONTOUR_SUBDIVISIONS, DEFAULT_WINDOW};
use oscishell::nodal::{
    contour_polylines, grid_polynomial, polylines_to_svg, polylines_to_text, GridSpec, DEFAULT_HALF_WIDTH,
    DEFAULT_SUBDIVISIONS,
};
use oscishell::paths::{make_path_with_alpha, sweep, CoefficientPath, PathKind, SweepConfig};
use oscishell::report::{diagnosis, render_text, to_csv, to_json, SweepDocument};
use oscishell::shell::{build_affine_poly, ShellState};

use config::FileConfig;

const EXIT_PARTIAL: u8 = 2;
const EXIT_VERIFY: u8 = 3;
/// Deviation of the input `sum c^2` from one that triggers a warning.
const NORM_WARNING: f64 = 1e-6;
const DEFAULT_T_STEPS: usize = 61;

#[derive(Parser)]
#[command(
    name = "oscishell",
    version,
    about = "Nodal-domain and entropy diagnostics for 2D oscillator shells"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every diagnostic along a coefficient path.
    Sweep(SweepArgs),
    /// Report everything about one state.
    Diagnose(DiagnoseArgs),
    /// Export nodal curves as polylines or SVG.
    Contour(ContourArgs),
    /// Run the analytic checkpoints and oracle cross-checks.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct GridArgs {
    /// Grid subdivisions per axis.
    #[arg(long = "grid-n")]
    grid_n: Option<usize>,
    /// Grid half width in dimensionless units.
    #[arg(long = "grid-L")]
    grid_l: Option<f64>,
    /// Quadrature panels per axis.
    #[arg(long)]
    panels: Option<usize>,
    /// Quadrature convergence tolerance.
    #[arg(long = "abs-tol")]
    abs_tol: Option<f64>,
    /// Recount domains on finer and wider grids (true/false).
    #[arg(long)]
    refine: Option<bool>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    path: String,
    /// Shell index; required for the general family.
    #[arg(long)]
    shell: Option<usize>,
    #[arg(long = "t-steps")]
    t_steps: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[command(flatten)]
    grid: GridArgs,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args)]
struct DiagnoseArgs {
    #[arg(long)]
    shell: usize,
    /// Comma-separated c_0, ..., c_N.
    #[arg(long, allow_hyphen_values = true)]
    coeffs: String,
    #[arg(long)]
    alpha: Option<f64>,
    #[command(flatten)]
    grid: GridArgs,
    /// Also write the report as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct ContourArgs {
    #[arg(long)]
    path: String,
    #[arg(long)]
    shell: Option<usize>,
    /// Comma-separated parameter values in [0, 1].
    #[arg(long)]
    t: String,
    #[arg(long)]
    alpha: Option<f64>,
    /// Half width of the plotting window, dimensionless.
    #[arg(long)]
    window: Option<f64>,
    #[arg(long)]
    subdivisions: Option<usize>,
    /// SVG output file.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Polyline text output file; standard output when neither output is given.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// quick or full.
    #[arg(long)]
    level: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Multiplies every tolerance.
    #[arg(long = "tol-scale", hide = true)]
    tol_scale: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (csv or json)")),
        }
    }
}

fn sweep_config(g: &GridArgs, cfg: &FileConfig) -> Result<SweepConfig> {
    let grid = GridSpec::new(
        cfg.pick(g.grid_l, "grid_L", DEFAULT_HALF_WIDTH)?,
        cfg.pick(g.grid_n, "grid_n", DEFAULT_SUBDIVISIONS)?,
    )?;
    let d = QuadConfig::default();
    let quad = QuadConfig {
        half_width: cfg.pick(None, "quad_L", d.half_width)?,
        panels_per_axis: cfg.pick(g.panels, "panels", d.panels_per_axis)?,
        abs_tol: cfg.pick(g.abs_tol, "abs_tol", d.abs_tol)?,
        max_panels: cfg.pick(None, "max_panels", d.max_panels)?,
        ..d
    };
    quad.validate()?;
    Ok(SweepConfig {
        grid,
        quad,
        refinement_check: cfg.pick(g.refine, "refine", true)?,
        ..SweepConfig::default()
    })
}

fn resolve_path(name: &str, shell: Option<usize>, alpha: f64) -> Result<CoefficientPath> {
    let kind = PathKind::from_str(name)?;
    let path = match (kind, shell) {
        (PathKind::General, None) => bail!("the general path needs --shell"),
        (PathKind::General, Some(n)) => make_path_with_alpha(kind, n, alpha)?,
        (_, given) => {
            let p = make_path_with_alpha(kind, 0, alpha)?;
            if let Some(n) = given.filter(|&n| n != p.shell) {
                bail!("path {kind} lives in shell {}, not {n}", p.shell);
            }
            p
        }
    };
    Ok(path)
}

fn parse_list(text: &str, what: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .with_context(|| format!("bad {what} value `{}`", v.trim()))
        })
        .collect()
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn warn_flags(reports: &[EntropyReport]) {
    for r in reports {
        for f in &r.flags {
            if *f != Flag::AnalyticEndpoint {
                eprintln!("warning: t = {}: {f}", r.t);
            }
        }
    }
}

fn cmd_sweep(a: SweepArgs, cfg: &FileConfig) -> Result<u8> {
    let alpha = cfg.pick(a.alpha, "alpha", 1.0)?;
    let path = resolve_path(&a.path, a.shell, alpha)?;
    let steps = cfg.pick(a.t_steps, "t_steps", DEFAULT_T_STEPS)?;
    if steps < 2 {
        bail!("--t-steps must be at least 2");
    }
    let format: Format = cfg
        .pick(a.format, "format", "csv".to_string())?
        .parse()
        .map_err(anyhow::Error::msg)?;
    let sweep_cfg = sweep_config(&a.grid, cfg)?;
    let reports = sweep(&path, &path.t_grid(steps), &sweep_cfg);
    warn_flags(&reports);
    let failures = reports.iter().filter(|r| r.has_failures()).count();
    let text = match format {
        Format::Csv => to_csv(&reports),
        Format::Json => to_json(&SweepDocument::new(path.name(), path.shell, alpha, reports))?,
    };
    write_output(a.out.as_deref(), &text)?;
    if failures > 0 {
        eprintln!("{failures} point(s) failed; see the flags column");
        return Ok(EXIT_PARTIAL);
    }
    Ok(0)
}

fn cmd_diagnose(a: DiagnoseArgs, cfg: &FileConfig) -> Result<u8> {
    let alpha = cfg.pick(a.alpha, "alpha", 1.0)?;
    let coeffs = parse_list(&a.coeffs, "coefficient")?;
    let (state, norm_sq) = ShellState::normalized(a.shell, coeffs, alpha)?;
    if (norm_sq - 1.0).abs() > NORM_WARNING {
        eprintln!("warning: sum of squared coefficients is {norm_sq}; normalized to one");
    }
    let sweep_cfg = sweep_config(&a.grid, cfg)?;
    let report = diagnosis(&state, norm_sq, &sweep_cfg);
    for f in &report.flags {
        eprintln!("warning: {f}");
    }
    write_output(None, &render_text(&report))?;
    if let Some(p) = &a.json {
        write_output(Some(p), &to_json(&report)?)?;
    }
    Ok(if report.flags.iter().any(|f| matches!(f, Flag::Failed(_))) {
        EXIT_PARTIAL
    } else {
        0
    })
}

fn cmd_contour(a: ContourArgs, cfg: &FileConfig) -> Result<u8> {
    let alpha = cfg.pick(a.alpha, "alpha", 1.0)?;
    let path = resolve_path(&a.path, a.shell, alpha)?;
    let ts = parse_list(&a.t, "t")?;
    if let Some(t) = ts.iter().find(|t| !(0.0..=1.0).contains(*t)) {
        bail!("t = {t} is outside [0, 1]");
    }
    let window = cfg.pick(a.window, "window", DEFAULT_WINDOW)?;
    let grid = GridSpec::new(
        window,
        cfg.pick(a.subdivisions, "subdivisions", DEFAULT_CONTOUR_SUBDIVISIONS)?,
    )?;
    let mut groups = Vec::with_capacity(ts.len());
    let mut text = String::new();
    for &t in &ts {
        let state = path.state(t)?;
        let poly = grid_polynomial(&build_affine_poly(&state), state.alpha());
        let lines = contour_polylines(&poly, &grid);
        text.push_str(&format!("# {} t = {t}, {} polyline(s)\n", path.name(), lines.len()));
        text.push_str(&polylines_to_text(&lines));
        groups.push((format!("{} t = {t}", path.name()), lines));
    }
    if let Some(p) = &a.svg {
        write_output(Some(p), &polylines_to_svg(&groups, window))?;
    }
    if a.out.is_some() || a.svg.is_none() {
        write_output(a.out.as_deref(), &text)?;
    }
    Ok(0)
}

fn cmd_verify(a: VerifyArgs, cfg: &FileConfig) -> Result<u8> {
    let level: Level = cfg.pick(a.level, "level", "quick".to_string())?.parse()?;
    let seed = cfg.pick(a.seed, "seed", 42)?;
    let tol_scale = a.tol_scale.unwrap_or(1.0);
    let results = run_checkpoints(&VerifyConfig { level, seed, tol_scale });
    let mut out = String::new();
    for r in &results {
        out.push_str(&format!("{r}\n"));
    }
    let passed = results.iter().filter(|r| r.passed).count();
    out.push_str(&format!(
        "verify ({level}, seed {seed}): {passed} passed, {} failed\n",
        results.len() - passed
    ));
    write_output(None, &out)?;
    Ok(if all_passed(&results) { 0 } else { EXIT_VERIFY })
}

fn run(cli: Cli) -> Result<u8> {
    let cfg = FileConfig::from_env()?;
    match cli.command {
        Command::Sweep(a) => cmd_sweep(a, &cfg),
        Command::Diagnose(a) => cmd_diagnose(a, &cfg),
        Command::Contour(a) => cmd_contour(a, &cfg),
        Command::Verify(a) => cmd_verify(a, &cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
