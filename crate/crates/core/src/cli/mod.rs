//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or parameter error, 2 a verified bound was
//! violated, 3 a numerical result failed its accuracy check.

mod output;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::angular;
use crate::bounds::{self, GAP_SLACK};
use crate::error::Error;
use crate::helium::{self, TwoElectronTrial};
use crate::minimizer::{self, Method, SolveResult, DEFAULT_HELIUM_RATIO, HELIUM_REFERENCE};
use crate::moments::{Dimension, MomentState, RadialFunction, SampledGrid};
use crate::saturating::{self, Family};

pub use output::{fmt_sig, round_sig, Cell, OutputRecord, JSON_DIGITS, TABLE_DIGITS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_ACCURACY: i32 = 3;

/// Trial decay used for helium Monte Carlo when none is given.
const DEFAULT_TRIAL_BETA: f64 = 27.0 / 16.0;

#[derive(Debug, Parser)]
#[command(name = "ubound", version, about = "Ground-state energies from uncertainty-relation boundaries")]
struct Cli {
    /// Print one JSON document instead of a table.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Minimize the energy on the active constraint boundary.
    #[command(subcommand)]
    Solve(SolveCmd),
    /// Check uncertainty bounds on random states or angular eigenstates.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Integrate a saturating state and compare it with its closed form.
    #[command(subcommand)]
    Saturate(SaturateCmd),
    /// Moments and bounds of a wave function read from a two-column file.
    Moments(MomentsArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SolveMethod {
    Analytic,
    Numeric,
    Quadrature,
}

impl From<SolveMethod> for Method {
    fn from(m: SolveMethod) -> Self {
        match m {
            SolveMethod::Analytic => Method::Analytic,
            SolveMethod::Numeric => Method::Numeric,
            SolveMethod::Quadrature => Method::Quadrature,
        }
    }
}

#[derive(Debug, Subcommand)]
enum SolveCmd {
    Oscillator {
        #[arg(long, default_value_t = 1.0)]
        m: f64,
        #[arg(long, default_value_t = 1.0)]
        k: f64,
        #[arg(long, default_value_t = 1)]
        dim: u32,
        #[arg(long, value_enum, default_value_t = SolveMethod::Analytic)]
        method: SolveMethod,
    },
    Hydrogen {
        #[arg(long = "Z", default_value_t = 1.0)]
        z: f64,
        #[arg(long, default_value_t = 0)]
        l: u32,
        #[arg(long, value_enum, default_value_t = SolveMethod::Analytic)]
        method: SolveMethod,
    },
    Helium(HeliumArgs),
}

#[derive(Debug, Args)]
struct HeliumArgs {
    /// Ratio `<1/r12> / <1/r>`; defaults to 5/8.
    #[arg(long = "C", conflicts_with = "trial_beta")]
    c: Option<f64>,
    /// Derive the ratio from the exponential trial with this decay.
    #[arg(long)]
    trial_beta: Option<f64>,
    /// Estimate the ratio by Monte Carlo with this many samples.
    #[arg(long, requires = "seed", conflicts_with = "c")]
    mc_samples: Option<usize>,
    #[arg(long, requires = "mc_samples")]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = SolveMethod::Analytic)]
    method: SolveMethod,
}

#[derive(Debug, Subcommand)]
enum VerifyCmd {
    Bounds {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long)]
        seed: u64,
    },
    Angular {
        #[arg(long, default_value_t = 3)]
        lmax: u32,
    },
}

#[derive(Debug, Subcommand)]
enum SaturateCmd {
    Hydrogen {
        #[arg(long = "Z", default_value_t = 1.0)]
        z: f64,
        #[arg(long)]
        h: Option<f64>,
        #[arg(long)]
        rmax: Option<f64>,
    },
    Oscillator {
        #[arg(long, default_value_t = 1.0)]
        k: f64,
        #[arg(long, default_value_t = 1.0)]
        m: f64,
        #[arg(long)]
        h: Option<f64>,
        #[arg(long)]
        xmax: Option<f64>,
    },
}

#[derive(Debug, Args)]
struct MomentsArgs {
    /// Whitespace-separated `coordinate value` lines; `#` starts a comment.
    #[arg(long)]
    grid: PathBuf,
    /// 1 for a line (both signs of x), 3 for the radial half-line.
    #[arg(long, default_value_t = 3)]
    dim: u32,
}

/// A command's outcome: the record plus the exit code it implies.
struct Outcome {
    record: OutputRecord,
    code: i32,
    /// Two-column data written after the header in table mode.
    stream: Option<Vec<(f64, f64)>>,
}

impl From<OutputRecord> for Outcome {
    fn from(record: OutputRecord) -> Self {
        Outcome {
            record,
            code: EXIT_OK,
            stream: None,
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Accuracy(_) => EXIT_ACCURACY,
        Error::BoundViolated { .. } => EXIT_VIOLATION,
        _ => EXIT_USAGE,
    }
}

/// Runs the command line `args` (without the program name).
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(std::iter::once("ubound".to_string()).chain(args.iter().cloned())) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let echo = args
        .iter()
        .filter(|a| a.as_str() != "--json")
        .cloned()
        .collect::<Vec<_>>()
        .join(" ");
    let outcome = match dispatch(cli.command, echo) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    let written = if cli.json {
        outcome.record.write_json(out)
    } else {
        write_human(&outcome, out)
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: {e}");
        return EXIT_USAGE;
    }
    outcome.code
}

fn write_human(outcome: &Outcome, out: &mut dyn Write) -> std::io::Result<()> {
    match &outcome.stream {
        None => outcome.record.write_table(out),
        Some(data) => {
            let r = &outcome.record;
            writeln!(out, "# {}", r.command)?;
            for (k, v, m) in &r.results {
                writeln!(out, "# {k} = {} [{}]", cell_text(v, JSON_DIGITS), m.tag())?;
            }
            writeln!(out, "# {} {}", r.columns[0], r.columns[1])?;
            for (x, psi) in data {
                writeln!(out, "{} {}", fmt_sig(*x, JSON_DIGITS), fmt_sig(*psi, JSON_DIGITS))?;
            }
            Ok(())
        }
    }
}

fn cell_text(c: &Cell, digits: usize) -> String {
    match c {
        Cell::Num(v) => fmt_sig(*v, digits),
        Cell::Int(i) => i.to_string(),
        Cell::Text(s) => s.clone(),
        Cell::Flag(b) => b.to_string(),
        Cell::Empty => "-".into(),
    }
}

fn dispatch(command: Command, echo: String) -> crate::Result<Outcome> {
    match command {
        Command::Solve(cmd) => cmd_solve(cmd, echo).map(Into::into),
        Command::Verify(cmd) => cmd_verify(cmd, echo),
        Command::Saturate(cmd) => cmd_saturate(cmd, echo),
        Command::Moments(args) => cmd_moments(args, echo).map(Into::into),
    }
}

fn solve_results(record: &mut OutputRecord, s: &SolveResult, tag: Method) -> crate::Result<()> {
    record
        .result("e_min_hartree", s.e_min, tag)
        .result("e_min_eV", s.e_min_ev(), tag);
    if let Some(natural) = s.e_min_natural() {
        record.result("e_min_hbar_omega", natural, tag);
    }
    record
        .result("x_star", s.x_star, tag)
        .result("y_star", s.y_star, tag)
        .result("alpha", s.alpha.alpha, tag)
        .result("boundary_gap", s.boundary_gap()?, tag);
    Ok(())
}

fn cmd_solve(cmd: SolveCmd, echo: String) -> crate::Result<OutputRecord> {
    let mut record = OutputRecord::new(echo);
    match cmd {
        SolveCmd::Oscillator { m, k, dim, method } => {
            record.param("m", m).param("k", k).param("dim", i64::from(dim));
            let method = Method::from(method);
            record.param("method", method.tag());
            let s = minimizer::solve_oscillator(m, k, dim, method)?;
            record.param("system", s.system.name());
            solve_results(&mut record, &s, method)?;
        }
        SolveCmd::Hydrogen { z, l, method } => {
            record.param("Z", z).param("l", i64::from(l));
            let method = Method::from(method);
            record.param("method", method.tag());
            let s = minimizer::solve_hydrogenic(z, l, method)?;
            record.param("system", s.system.name());
            solve_results(&mut record, &s, method)?;
        }
        SolveCmd::Helium(args) => cmd_helium(&mut record, args)?,
    }
    Ok(record)
}

fn cmd_helium(record: &mut OutputRecord, args: HeliumArgs) -> crate::Result<()> {
    let method = Method::from(args.method);
    let (c, c_tag) = match (args.c, args.trial_beta, args.mc_samples, args.seed) {
        (_, beta, Some(samples), Some(seed)) => {
            let beta = beta.unwrap_or(DEFAULT_TRIAL_BETA);
            record.param("trial_beta", beta).param("mc_samples", samples as i64);
            record.seed = Some(seed);
            let mc = helium::moments_monte_carlo(&TwoElectronTrial::new(beta)?, samples, seed)?;
            record
                .result("mc_y", mc.moments.y, Method::MonteCarlo)
                .result("mc_y_error", mc.y_error, Method::MonteCarlo)
                .result("mc_z", mc.moments.z, Method::MonteCarlo)
                .result("mc_z_error", mc.z_error, Method::MonteCarlo)
                .result("C_error", mc.c_error, Method::MonteCarlo);
            (mc.moments.c, Method::MonteCarlo)
        }
        (None, Some(beta), None, None) => {
            let trial = TwoElectronTrial::new(beta)?;
            record.param("trial_beta", beta);
            record.result("trial_energy_hartree", helium::helium_energy(&trial), Method::Analytic);
            (helium::moments_closed_form(&trial).c, Method::Analytic)
        }
        (c, None, None, None) => (c.unwrap_or(DEFAULT_HELIUM_RATIO), method),
        _ => return Err(Error::Domain("--mc-samples and --seed must be given together".into())),
    };
    record.param("method", method.tag());
    let s = minimizer::solve_helium(c, method)?;
    record.param("system", s.system.name());
    // energies inherit the less certain of the two provenances
    let tag = if c_tag == Method::MonteCarlo { c_tag } else { method };
    record.result("C", c, c_tag);
    record
        .result("e_min_hartree", s.e_min, tag)
        .result("e_min_eV", s.e_min_ev(), tag)
        .result("y_star", s.y_star, tag)
        .result("alpha", s.alpha.alpha, tag)
        .result("reference_hartree", HELIUM_REFERENCE, Method::Analytic)
        .result("reference_delta", s.reference_delta().unwrap_or(f64::NAN), tag);
    Ok(())
}

fn cmd_verify(cmd: VerifyCmd, echo: String) -> crate::Result<Outcome> {
    let mut record = OutputRecord::new(echo);
    match cmd {
        VerifyCmd::Bounds { trials, seed } => {
            record.param("trials", trials as i64);
            record.seed = Some(seed);
            record.columns = vec!["trial", "dim", "constraint", "n", "lhs", "rhs", "gap"];
            record.rows_method = Some(Method::Quadrature);
            let mut min_gap = f64::INFINITY;
            for report in bounds::fuzz_bounds(trials, seed)? {
                for row in report.rows {
                    min_gap = min_gap.min(row.gap);
                    record.rows.push(vec![
                        Cell::Int(report.trial as i64),
                        Cell::Int(i64::from(report.dimension.rank())),
                        Cell::Text(row.id),
                        row.n.map(i64::from).into(),
                        row.lhs.into(),
                        row.rhs.into(),
                        row.gap.into(),
                    ]);
                }
            }
            Ok(verify_outcome(record, min_gap, Method::Quadrature))
        }
        VerifyCmd::Angular { lmax } => {
            record.param("lmax", i64::from(lmax));
            record.columns = vec!["l", "m", "lx2", "ly2", "product", "bound", "gap", "l2", "l(l+1)", "saturated"];
            record.rows_method = Some(Method::Numeric);
            let mut min_gap = f64::INFINITY;
            for f in angular::floor_table(lmax)? {
                min_gap = min_gap.min(f.gap);
                record.rows.push(vec![
                    Cell::Int(i64::from(f.l)),
                    Cell::Int(i64::from(f.m)),
                    f.lx2.into(),
                    f.ly2.into(),
                    f.product.into(),
                    f.bound.into(),
                    f.gap.into(),
                    f.l2.into(),
                    f.casimir.into(),
                    Cell::Flag(f.saturated),
                ]);
            }
            Ok(verify_outcome(record, min_gap, Method::Numeric))
        }
    }
}

fn verify_outcome(mut record: OutputRecord, min_gap: f64, tag: Method) -> Outcome {
    let count = record.rows.len() as i64;
    record.result("rows", count, tag).result("min_gap", min_gap, tag);
    let code = if min_gap < -GAP_SLACK { EXIT_VIOLATION } else { EXIT_OK };
    record.notes.push(format!(
        "{count} rows, min gap {}{}",
        fmt_sig(min_gap, TABLE_DIGITS),
        if code == EXIT_OK { "" } else { ": VIOLATED" }
    ));
    Outcome {
        record,
        code,
        stream: None,
    }
}

fn cmd_saturate(cmd: SaturateCmd, echo: String) -> crate::Result<Outcome> {
    let mut record = OutputRecord::new(echo);
    let (family, h, extent, coord) = match cmd {
        SaturateCmd::Hydrogen { z, h, rmax } => {
            record.param("Z", z);
            (Family::hydrogenic(z)?, h, rmax, "r")
        }
        SaturateCmd::Oscillator { k, m, h, xmax } => {
            record.param("k", k).param("m", m);
            (Family::oscillator(k, m)?, h, xmax, "x")
        }
    };
    let ode = saturating::build_ode(family)?;
    let ode = ode.with_grid(h.unwrap_or(ode.grid.step), extent.unwrap_or(ode.grid.extent))?;
    record
        .param("family", family.name())
        .param("h", ode.grid.step)
        .param("extent", ode.grid.extent);
    let psi = saturating::integrate_ode(&ode)?;
    let deviation = saturating::max_relative_deviation(&psi, &saturating::closed_form(&family)?)?;
    record
        .result("alpha", ode.alpha.alpha, Method::Analytic)
        .result("max_relative_deviation", deviation, Method::Numeric)
        .result("residual", saturating::residual_check(&psi, &ode)?, Method::Quadrature)
        .result("energy_hartree", saturating::energy_expectation(&family, &psi)?, Method::Quadrature);
    let grid = psi.grid().expect("integrated states are sampled");
    let data: Vec<(f64, f64)> = grid.points().iter().map(|&x| (x, psi.value(x))).collect();
    record.columns = vec![coord, "psi"];
    record.rows_method = Some(Method::Numeric);
    record.rows = data.iter().map(|&(x, v)| vec![x.into(), v.into()]).collect();
    Ok(Outcome {
        record,
        code: EXIT_OK,
        stream: Some(data),
    })
}

/// Parses two-column `coordinate value` text.
pub fn parse_grid(text: &str) -> crate::Result<SampledGrid> {
    let mut points = Vec::new();
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parsed: Option<Vec<f64>> = fields.iter().map(|f| f.parse().ok()).collect();
        match parsed.as_deref() {
            Some(&[x, v]) => {
                points.push(x);
                values.push(v);
            }
            _ => {
                return Err(Error::Domain(format!(
                    "grid line {}: expected two numbers, got `{line}`",
                    i + 1
                )))
            }
        }
    }
    SampledGrid::new(points, values)
}

fn cmd_moments(args: MomentsArgs, echo: String) -> crate::Result<OutputRecord> {
    let mut record = OutputRecord::new(echo);
    let dimension = Dimension::from_rank(args.dim)?;
    let text = std::fs::read_to_string(&args.grid)
        .map_err(|e| Error::Domain(format!("cannot read {}: {e}", args.grid.display())))?;
    let grid = parse_grid(&text)?;
    record
        .param("grid", args.grid.display().to_string())
        .param("dim", i64::from(args.dim))
        .param("points", grid.points().len() as i64);
    let psi = RadialFunction::sampled(grid, dimension)?.normalize()?;
    for (moment, value) in MomentState::measure(&psi)?.iter() {
        record.result(moment.label(), value, Method::Quadrature);
    }
    record.columns = vec!["constraint", "n", "lhs", "rhs", "gap"];
    record.rows_method = Some(Method::Quadrature);
    let mut min_gap = f64::INFINITY;
    for row in bounds::check_all_bounds(&psi)? {
        min_gap = min_gap.min(row.gap);
        record.rows.push(vec![
            Cell::Text(row.id),
            row.n.map(i64::from).into(),
            row.lhs.into(),
            row.rhs.into(),
            row.gap.into(),
        ]);
    }
    record.result("min_gap", min_gap, Method::Quadrature);
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(args.iter().copied(), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn hydrogen_json() {
        let (code, out, _) = call(&["solve", "hydrogen", "--Z", "2", "--l", "0", "--json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["results"]["e_min_hartree"], -2.0);
        assert_eq!(v["provenance"]["e_min_hartree"], "analytic");
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&["verify", "bounds", "--trials", "0", "--seed", "1"]).0, EXIT_USAGE);
        assert_eq!(call(&["verify", "bounds", "--trials", "3"]).0, EXIT_USAGE);
        assert_eq!(call(&["solve", "helium", "--mc-samples", "10000"]).0, EXIT_USAGE);
        assert_eq!(call(&["solve", "hydrogen", "--Z", "-1"]).0, EXIT_USAGE);
        assert_eq!(call(&["solve", "helium", "--C", "0.5", "--trial-beta", "1"]).0, EXIT_USAGE);
    }

    #[test]
    fn coarse_saturate_grid() {
        assert_eq!(call(&["saturate", "hydrogen", "--Z", "1", "--h", "0.5"]).0, EXIT_ACCURACY);
    }

    #[test]
    fn grid_parsing() {
        let g = parse_grid("# r psi\n0 1\n1 0.5 # half\n\n2 0.25\n3 0.125\n").unwrap();
        assert_eq!(g.points(), &[0.0, 1.0, 2.0, 3.0]);
        assert!(parse_grid("0 1 2\n").is_err());
        assert!(parse_grid("0 x\n").is_err());
    }
}
