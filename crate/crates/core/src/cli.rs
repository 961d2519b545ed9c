//! Command-line front end.
//!
//! Every command writes to the supplied writers and returns a process exit
//! code: 0 on success, 2 for unusable flags, 3 when a solver fails (or, for
//! `table --check`, when a row is outside tolerance).

use std::fmt::Write as _;
use std::io::Write;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::reference::{numerov_solve, numerov_wavefunction, Units};
use crate::samples::{trapezoid_squared, RadialSamples};
use crate::solvers::{
    energy_scale, log_eigenvalue, log_length_scale, power_law_eigenvalue, Convention, PotentialSpec,
    LOG_NU_DEFAULT,
};
use crate::specfun::{airy_ai, airy_zero};
use crate::tables::{check_table, compute_table, numerov_power_law, TablePreset, TableRow};
use crate::variational::{
    d_minimized, default_fit_grid, linspace, refit_correction_constants, AnsatzParams, CorrectionFit, DMode,
    QuantumState, Sign, DEFAULT_D_BRACKET,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "radvar", version, about = "Variational eigenvalues of power-law and logarithmic radial potentials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One eigenvalue as a JSON record (two records for --method both).
    Eigen(EigenArgs),
    /// Reproduce a published table as CSV or JSON lines.
    Table(TableArgs),
    /// Variational and exact/Numerov radial functions as CSV.
    Wavefunction(WaveArgs),
    /// Refit the correction-factor constants of the shape exponent.
    Fit(FitArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PotentialKind {
    Power,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Variational,
    Numerov,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Plain,
    Ref11,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Plain => Convention::Plain,
            ConventionArg::Ref11 => Convention::Ref11,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// `fit`, `minimize` or `fixed=<d>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DModeArg(pub DMode);

impl FromStr for DModeArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "fit" => Ok(DModeArg(DMode::Fitted)),
            "minimize" => Ok(DModeArg(DMode::Minimized)),
            _ => {
                let v = s
                    .strip_prefix("fixed=")
                    .ok_or_else(|| format!("expected fit, minimize or fixed=<d>, got {s:?}"))?;
                let d: f64 = v.parse().map_err(|_| format!("bad shape exponent {v:?}"))?;
                if d > 0.0 && d.is_finite() {
                    Ok(DModeArg(DMode::Fixed(d)))
                } else {
                    Err(format!("shape exponent must be positive, got {d}"))
                }
            }
        }
    }
}

fn parse_sign(s: &str) -> std::result::Result<Sign, String> {
    match s {
        "+" | "+1" | "1" | "repulsive" => Ok(Sign::Repulsive),
        "-" | "-1" | "attractive" => Ok(Sign::Attractive),
        _ => Err(format!("expected + or - (or attractive/repulsive), got {s:?}")),
    }
}

#[derive(Debug, Clone, Args)]
pub struct PotentialArgs {
    #[arg(long, value_enum, default_value = "power")]
    pub potential: PotentialKind,
    /// Strength A of sgn·A·r^ν.
    #[arg(long = "A", default_value_t = 1.0)]
    pub a: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<f64>,
    /// Defaults to - for ν < 0 and + otherwise.
    #[arg(long, value_parser = parse_sign, allow_hyphen_values = true)]
    pub sign: Option<Sign>,
    #[arg(long, default_value_t = 0)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub l: usize,
    /// Small exponent standing in for log r.
    #[arg(long, default_value_t = LOG_NU_DEFAULT)]
    pub nu_limit: f64,
}

#[derive(Debug, Clone, Args)]
pub struct EigenArgs {
    #[command(flatten)]
    pub potential: PotentialArgs,
    #[arg(long, default_value = "fit")]
    pub d_mode: DModeArg,
    #[arg(long, value_enum, default_value = "plain")]
    pub convention: ConventionArg,
    #[arg(long, value_enum, default_value = "variational")]
    pub method: MethodArg,
}

#[derive(Debug, Clone, Args)]
pub struct TableArgs {
    pub preset: String,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Exit nonzero unless every row matches the printed value.
    #[arg(long)]
    pub check: bool,
    /// Skip the Numerov oracle column.
    #[arg(long)]
    pub no_oracle: bool,
}

#[derive(Debug, Clone, Args)]
pub struct WaveArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(2..=5))]
    pub figure: Option<u8>,
    #[command(flatten)]
    pub potential: PotentialArgs,
    #[arg(long)]
    pub rmax: Option<f64>,
    #[arg(long, default_value_t = 500)]
    pub points: usize,
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    #[arg(long, default_value_t = -1.5, allow_hyphen_values = true)]
    pub grid_min: f64,
    #[arg(long, default_value_t = 8.0, allow_hyphen_values = true)]
    pub grid_max: f64,
    #[arg(long, default_value_t = 40)]
    pub grid_points: usize,
    /// json: one record with constants and the d(ν) curve; csv: the curve only.
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

/// Parse `args` (including the program name) and run.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Eigen(a) => cmd_eigen(&a).map(|s| (s, EXIT_OK)),
        Command::Table(a) => cmd_table(&a, err),
        Command::Wavefunction(a) => cmd_wavefunction(&a).map(|s| (s, EXIT_OK)),
        Command::Fit(a) => cmd_fit(&a, err).map(|s| (s, EXIT_OK)),
    };
    match result {
        Ok((text, code)) => {
            if out.write_all(text.as_bytes()).is_err() {
                return EXIT_SOLVER;
            }
            code
        }
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Solver(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_SOLVER
        }
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Solver(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            // parameters that fail validation came straight from the flags
            Error::Domain { .. } | Error::InvalidParameter(_) | Error::InvalidGrid(_) | Error::DegenerateExponent => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Solver(other),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Fixed-point text with six significant digits.
pub fn sig6(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    // round in scientific form first so a carry (9.9999996 -> 1.00000e1)
    // is reflected in the exponent
    let sci = format!("{v:.5e}");
    let exp: i32 = sci.split('e').nth(1).and_then(|e| e.parse().ok()).unwrap_or(0);
    let decimals = (5 - exp).max(0) as usize;
    format!("{v:.decimals$}")
}

fn opt6(v: Option<f64>) -> String {
    v.map(sig6).unwrap_or_default()
}

#[derive(Debug, Serialize)]
struct EigenRecord {
    #[serde(rename = "E")]
    e: f64,
    epsilon: Option<f64>,
    x: Option<f64>,
    d: Option<f64>,
    method: &'static str,
    convention: &'static str,
}

fn convention_name(c: Convention) -> &'static str {
    match c {
        Convention::Plain => "plain",
        Convention::Ref11 => "ref11",
    }
}

struct Resolved {
    pot: PotentialSpec,
    state: QuantumState,
}

fn resolve(p: &PotentialArgs) -> CliResult<Resolved> {
    let state = QuantumState::new(p.n, p.l);
    let pot = match p.potential {
        PotentialKind::Log => PotentialSpec::Logarithmic,
        PotentialKind::Power => {
            let nu = p.nu.ok_or_else(|| CliError::Usage("--nu is required for --potential power".into()))?;
            let sign = p.sign.unwrap_or_else(|| Sign::binding_for(nu));
            if sign == Sign::Attractive && nu >= 0.0 {
                return Err(CliError::Usage(format!("--sign - needs nu < 0 (got {nu})")));
            }
            PotentialSpec::power_law(p.a, nu, sign)?
        }
    };
    Ok(Resolved { pot, state })
}

fn log_d_override(state: QuantumState, nu_limit: f64, mode: DMode) -> Result<Option<f64>> {
    match mode {
        DMode::Fitted => Ok(None),
        DMode::Fixed(d) => Ok(Some(d)),
        DMode::Minimized => d_minimized(state, nu_limit, Sign::Repulsive, DEFAULT_D_BRACKET).map(Some),
    }
}

fn cmd_eigen(a: &EigenArgs) -> CliResult<String> {
    let Resolved { pot, state } = resolve(&a.potential)?;
    let convention: Convention = a.convention.into();
    let mode = a.d_mode.0;
    let mut records = Vec::new();

    let (variational, scale) = match pot {
        PotentialSpec::Logarithmic => {
            if convention != Convention::Plain {
                return Err(CliError::Usage("--convention ref11 applies to power laws only".into()));
            }
            let nu_limit = a.potential.nu_limit;
            let d = log_d_override(state, nu_limit, mode)?;
            (log_eigenvalue(state, nu_limit, d)?, None)
        }
        PotentialSpec::PowerLaw { a: amp, nu, .. } => (
            power_law_eigenvalue(&pot, state, mode, convention)?,
            Some(energy_scale(amp, nu, convention)),
        ),
    };
    if a.method != MethodArg::Numerov {
        records.push(EigenRecord {
            e: variational.e,
            epsilon: Some(variational.reduced.epsilon),
            x: Some(variational.reduced.params.x),
            d: Some(variational.reduced.params.d),
            method: "variational",
            convention: convention_name(convention),
        });
    }
    if a.method != MethodArg::Variational {
        let e = match pot {
            PotentialSpec::Logarithmic => numerov_solve(&pot, state, variational.e, Units::Physical)?.energy,
            PotentialSpec::PowerLaw { .. } => numerov_power_law(&pot, state, convention, variational.e)?,
        };
        records.push(EigenRecord {
            e,
            epsilon: scale.map(|s| e / s),
            x: None,
            d: None,
            method: "numerov",
            convention: convention_name(convention),
        });
    }
    let mut s = String::new();
    for r in records {
        s.push_str(&serde_json::to_string(&r).map_err(|e| CliError::Usage(e.to_string()))?);
        s.push('\n');
    }
    Ok(s)
}

pub const TABLE_HEADER: &str =
    "potential,n,l,value_this_work,value_oracle,value_paper,value_paper_numerical,abs_diff,rel_diff";

pub fn table_csv(rows: &[TableRow]) -> String {
    let mut s = String::from(TABLE_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{}",
            r.potential,
            r.n,
            r.l,
            sig6(r.value_this_work),
            opt6(r.value_oracle),
            sig6(r.value_paper),
            opt6(r.value_paper_numerical),
            sig6(r.abs_diff),
            sig6(r.rel_diff)
        );
    }
    s
}

fn table_json(rows: &[TableRow]) -> String {
    // numbers go through the same six-digit formatting as the CSV so both
    // formats carry identical values
    let round = |v: f64| sig6(v).parse::<f64>().unwrap_or(v);
    let mut s = String::new();
    for r in rows {
        let rec = serde_json::json!({
            "potential": r.potential,
            "n": r.n,
            "l": r.l,
            "value_this_work": round(r.value_this_work),
            "value_oracle": r.value_oracle.map(round),
            "value_paper": round(r.value_paper),
            "value_paper_numerical": r.value_paper_numerical.map(round),
            "abs_diff": round(r.abs_diff),
            "rel_diff": round(r.rel_diff),
        });
        s.push_str(&rec.to_string());
        s.push('\n');
    }
    s
}

fn cmd_table(a: &TableArgs, err: &mut dyn Write) -> CliResult<(String, i32)> {
    let preset: TablePreset = a.preset.parse()?;
    let rows = compute_table(preset, !a.no_oracle)?;
    let text = match a.format {
        Format::Csv => table_csv(&rows),
        Format::Json => table_json(&rows),
    };
    let mut code = EXIT_OK;
    if a.check {
        let failures = check_table(preset, &rows);
        if let Some(first) = failures.first() {
            let _ = writeln!(err, "{preset} check failed at {first} ({} row(s) out of tolerance)", failures.len());
            code = EXIT_SOLVER;
        } else {
            let _ = writeln!(err, "{preset} check passed, {} rows", rows.len());
        }
    }
    Ok((text, code))
}

/// Radial functions for one comparison plot, both unit-L² normalized on
/// `grid` and positive at their first maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct WavePair {
    pub grid: Vec<f64>,
    pub variational: Vec<f64>,
    pub reference: Vec<f64>,
}

impl WavePair {
    pub fn max_abs_deviation(&self) -> f64 {
        self.variational
            .iter()
            .zip(&self.reference)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("rho,g_variational,g_exact_or_numerov\n");
        for ((r, v), e) in self.grid.iter().zip(&self.variational).zip(&self.reference) {
            let _ = writeln!(s, "{},{},{}", sig6(*r), sig6(*v), sig6(*e));
        }
        s
    }
}

/// Settings behind `--figure k`.
pub fn figure_args(figure: u8) -> Option<(PotentialSpec, QuantumState)> {
    let linear = PotentialSpec::PowerLaw {
        a: 1.0,
        nu: 1.0,
        sign: Sign::Repulsive,
    };
    match figure {
        2 => Some((linear, QuantumState::new(0, 0))),
        3 => Some((linear, QuantumState::new(4, 0))),
        4 => Some((PotentialSpec::Logarithmic, QuantumState::new(0, 0))),
        5 => Some((PotentialSpec::Logarithmic, QuantumState::new(4, 4))),
        _ => None,
    }
}

fn normalize_aligned(grid: &[f64], values: Vec<f64>) -> Vec<f64> {
    let mut s = RadialSamples::raw(grid.to_vec(), values).normalized().align_sign();
    if trapezoid_squared(&s.grid, &s.values) == 0.0 {
        s.values.iter_mut().for_each(|v| *v = 0.0);
    }
    s.values
}

/// Linear interpolation of `s` at `r`; zero outside the sampled range.
fn interpolate(s: &RadialSamples, r: f64) -> f64 {
    let g = &s.grid;
    if g.is_empty() || r < g[0] || r > g[g.len() - 1] {
        return 0.0;
    }
    let i = g.partition_point(|&x| x <= r).clamp(1, g.len() - 1);
    let (r0, r1) = (g[i - 1], g[i]);
    let t = (r - r0) / (r1 - r0);
    s.values[i - 1] * (1.0 - t) + s.values[i] * t
}

/// Variational function on a physical radius grid plus the trial params.
fn variational_values(pot: &PotentialSpec, state: QuantumState, nu_limit: f64, grid: &[f64]) -> Result<(Vec<f64>, f64)> {
    let (params, scale, e) = match *pot {
        PotentialSpec::Logarithmic => {
            let eig = log_eigenvalue(state, nu_limit, None)?;
            (eig.reduced.params, 1.0 / log_length_scale(nu_limit), eig.e)
        }
        PotentialSpec::PowerLaw { a, nu, .. } => {
            let eig = power_law_eigenvalue(pot, state, DMode::Fitted, Convention::Plain)?;
            (eig.reduced.params, a.powf(1.0 / (nu + 2.0)), eig.e)
        }
    };
    let values = grid
        .iter()
        .map(|r| params.evaluate(r * scale))
        .collect::<Result<Vec<f64>>>()?;
    Ok((values, e))
}

/// Outer radius where the variational function has decayed to 1e-4 of its
/// peak, scanning outward in steps of 1% of the running radius.
fn default_rmax(pot: &PotentialSpec, state: QuantumState, nu_limit: f64) -> Result<f64> {
    let grid: Vec<f64> = (1..=4000).map(|i| 0.01 * i as f64 * 1.0025f64.powi(i)).collect();
    let (values, _) = variational_values(pot, state, nu_limit, &grid)?;
    let peak = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let last = values.iter().rposition(|v| v.abs() >= 1e-4 * peak).unwrap_or(grid.len() - 1);
    Ok(grid[(last + 1).min(grid.len() - 1)])
}

pub fn wavefunction_pair(
    pot: &PotentialSpec,
    state: QuantumState,
    nu_limit: f64,
    rmax: Option<f64>,
    points: usize,
) -> Result<WavePair> {
    if points < 3 {
        return Err(Error::InvalidGrid("need at least 3 points".into()));
    }
    let rmax = match rmax {
        Some(r) if r > 0.0 && r.is_finite() => r,
        Some(r) => return Err(Error::InvalidGrid(format!("rmax = {r} must be positive"))),
        None => default_rmax(pot, state, nu_limit)?,
    };
    let grid: Vec<f64> = (1..=points).map(|i| rmax * i as f64 / points as f64).collect();
    let (var, e_var) = variational_values(pot, state, nu_limit, &grid)?;

    let exact: Vec<f64> = match *pot {
        PotentialSpec::PowerLaw { a, nu, sign: Sign::Repulsive } if nu == 1.0 && state.l == 0 => {
            // g(r) = Ai(A^(1/3) r - a_{n+1})
            let zero = airy_zero(state.n + 1)?;
            let k = a.cbrt();
            grid.iter().map(|r| airy_ai(k * r - zero)).collect()
        }
        _ => {
            let sol = numerov_solve(pot, state, e_var, Units::Physical)?;
            let w = numerov_wavefunction(pot, state, &sol)?;
            grid.iter().map(|&r| interpolate(&w, r)).collect()
        }
    };
    Ok(WavePair {
        variational: normalize_aligned(&grid, var),
        reference: normalize_aligned(&grid, exact),
        grid,
    })
}

fn cmd_wavefunction(a: &WaveArgs) -> CliResult<String> {
    let (pot, state) = match a.figure {
        Some(f) => figure_args(f).ok_or_else(|| CliError::Usage(format!("no figure {f}")))?,
        None => {
            let r = resolve(&a.potential)?;
            (r.pot, r.state)
        }
    };
    // validates the trial parameters early (e.g. attractive sign with ν >= 0)
    if let PotentialSpec::PowerLaw { nu, sign, .. } = pot {
        AnsatzParams::new(1.0, 1.0, state, nu, sign)?;
    }
    let pair = wavefunction_pair(&pot, state, a.potential.nu_limit, a.rmax, a.points)?;
    Ok(pair.to_csv())
}

#[derive(Debug, Serialize)]
struct FitRecord {
    fitted: CorrectionFit,
    paper: CorrectionFit,
    max_residual: f64,
    iterations: usize,
    warnings: Vec<String>,
    curve: Vec<CurvePoint>,
}

#[derive(Debug, Serialize)]
struct CurvePoint {
    nu: f64,
    d_min: f64,
    d_fit: f64,
}

fn cmd_fit(a: &FitArgs, err: &mut dyn Write) -> CliResult<String> {
    if !(a.grid_min < a.grid_max) {
        return Err(CliError::Usage(format!(
            "--grid-min {} must be below --grid-max {}",
            a.grid_min, a.grid_max
        )));
    }
    let grid = if (a.grid_min, a.grid_max, a.grid_points) == (-1.5, 8.0, 40) {
        default_fit_grid()
    } else {
        linspace(a.grid_min, a.grid_max, a.grid_points)
    };
    let report = refit_correction_constants(&grid)?;
    for w in &report.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    let curve: Vec<CurvePoint> = report
        .curve
        .iter()
        .map(|&(nu, d_min)| CurvePoint {
            nu,
            d_min,
            d_fit: report.fit.d_at(nu).unwrap_or(f64::NAN),
        })
        .collect();
    match a.format {
        Format::Json => {
            let rec = FitRecord {
                fitted: report.fit,
                paper: CorrectionFit::PAPER,
                max_residual: report.max_residual,
                iterations: report.iterations,
                warnings: report.warnings.clone(),
                curve,
            };
            let mut s = serde_json::to_string(&rec).map_err(|e| CliError::Usage(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut s = String::from("nu,d_min,d_fit\n");
            for p in curve {
                let _ = writeln!(s, "{},{},{}", sig6(p.nu), sig6(p.d_min), sig6(p.d_fit));
            }
            Ok(s)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(1.833516), "1.83352");
        assert_eq!(sig6(-0.2970321), "-0.297032");
        assert_eq!(sig6(3.0), "3.00000");
        assert_eq!(sig6(12.345678), "12.3457");
        assert_eq!(sig6(9.9999996), "10.0000");
        assert_eq!(sig6(1.5e-7), "0.000000150000");
    }

    #[test]
    fn d_mode_parsing() {
        assert_eq!("fit".parse::<DModeArg>().unwrap().0, DMode::Fitted);
        assert_eq!("minimize".parse::<DModeArg>().unwrap().0, DMode::Minimized);
        assert_eq!("fixed=1.5".parse::<DModeArg>().unwrap().0, DMode::Fixed(1.5));
        assert!("fixed=-1".parse::<DModeArg>().is_err());
        assert!("fixed".parse::<DModeArg>().is_err());
    }

    #[test]
    fn interpolation_is_zero_outside() {
        let s = RadialSamples::raw(vec![1.0, 2.0, 3.0], vec![1.0, 3.0, 5.0]);
        assert_eq!(interpolate(&s, 2.5), 4.0);
        assert_eq!(interpolate(&s, 3.5), 0.0);
        assert_eq!(interpolate(&s, 1.0), 1.0);
    }
}
