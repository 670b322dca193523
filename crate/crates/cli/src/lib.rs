//! Command-line front end: instance files in, deterministic reports out.
//!
//! Exit codes: 0 PASS, 1 FAIL, 2 invalid input, 3 numerical failure.

pub mod commands;
pub mod report;
pub mod schema;

use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};
use gb_core::cstar::DEFAULT_TOLERANCE;
use gb_core::locunit::DualSign;

use commands::{VerifyOp, XprodOp};
pub use report::{CliError, ErrorClass, Report, Verdict};
use schema::Instance;

#[derive(Parser, Debug)]
#[command(name = "gb", about = "Group-bundle cohomology and crossed-product verifier")]
pub struct Cli {
    /// emit the report as JSON
    #[arg(long, global = true)]
    json: bool,
    /// numerical tolerance
    #[arg(long, global = true, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
    /// print the elapsed time to stderr
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Čech cohomology of a bundle presentation
    Cohomology {
        file: String,
        #[arg(long, default_value_t = 1)]
        degree: usize,
    },
    /// decide whether two bundles are isomorphic
    Iso { a: String, b: String },
    /// crossed product of the action at one point
    Xprod {
        file: String,
        #[arg(long)]
        point: usize,
        op: XprodArg,
    },
    /// run a verification pipeline
    Verify {
        file: String,
        op: VerifyArg,
        #[arg(long, value_enum, default_value_t = SignArg::Conj)]
        dual_sign: SignArg,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum XprodArg {
    Build,
    Spectrum,
    Decompose,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum VerifyArg {
    UnitaryIso,
    Equivalence,
    Locunit,
    Takai,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SignArg {
    Conj,
    Plain,
}

fn load(path: &str) -> Result<Instance, CliError> {
    let text = std::fs::read_to_string(Path::new(path)).map_err(|e| CliError::invalid(format!("cannot read {path}: {e}")))?;
    schema::parse(&text).map_err(|e| CliError::invalid(format!("{path}: {}", e.message)))
}

fn dispatch(cli: &Cli, echo: &str) -> Result<Report, CliError> {
    let tol = cli.tolerance;
    if !(tol.is_finite() && tol > 0.0) {
        return Err(CliError::invalid(format!("tolerance must be positive, got {tol}")));
    }
    match &cli.command {
        Command::Cohomology { file, degree } => commands::cmd_cohomology(echo, &load(file)?, *degree),
        Command::Iso { a, b } => commands::cmd_iso(echo, &load(a)?, &load(b)?),
        Command::Xprod { file, point, op } => {
            let op = match op {
                XprodArg::Build => XprodOp::Build,
                XprodArg::Spectrum => XprodOp::Spectrum,
                XprodArg::Decompose => XprodOp::Decompose,
            };
            commands::cmd_xprod(echo, &load(file)?, *point, op, tol)
        }
        Command::Verify { file, op, dual_sign } => {
            let op = match op {
                VerifyArg::UnitaryIso => VerifyOp::UnitaryIso,
                VerifyArg::Equivalence => VerifyOp::Equivalence,
                VerifyArg::Locunit => VerifyOp::Locunit,
                VerifyArg::Takai => VerifyOp::Takai,
            };
            let sign = match dual_sign {
                SignArg::Conj => DualSign::Conj,
                SignArg::Plain => DualSign::Plain,
            };
            commands::cmd_verify(echo, &load(file)?, op, sign, tol)
        }
    }
}

/// Output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { stdout: text, stderr: String::new(), code }
            } else {
                Outcome { stdout: String::new(), stderr: text, code }
            };
        }
    };
    let echo = std::iter::once("gb").chain(args.iter().skip(1).map(String::as_str)).collect::<Vec<_>>().join(" ");
    let start = std::time::Instant::now();
    let report = dispatch(&cli, &echo).unwrap_or_else(|e| Report::error(echo.clone(), e));
    let stdout = if cli.json { report.render_json() } else { report.render_text() };
    let stderr = if cli.timing { format!("elapsed {:.3} s\n", start.elapsed().as_secs_f64()) } else { String::new() };
    Outcome { stdout, stderr, code: report.exit_code() }
}
