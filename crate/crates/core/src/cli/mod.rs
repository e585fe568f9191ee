//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a requested check failed, 2 usage or parse error.

mod commands;
mod crosscheck;
pub mod table;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::function::SampledFunction;
use crate::numerics::{Rational, ScalarKind};

pub use table::{Cell, Column, ColumnKind, ResultTable};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "qstancu",
    version,
    about = "Evaluate and cross-check q-Stancu operators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CommandKind {
    Eval,
    Moments,
    Crosscheck,
    Converge,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate S_n(f; x) or, with --limit, S_inf(f; x) on a grid.
    Eval(RunArgs),
    /// Moment tables from direct summation, closed forms and recurrences.
    Moments(RunArgs),
    /// Representation and identity sweeps with pass/fail counts.
    Crosscheck(RunArgs),
    /// Sup-error of S_n against S_inf over a grid, n = 1..n_max.
    Converge(RunArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Exact unless some input needs floating point.
    Auto,
    /// Arbitrary-precision rationals.
    Exact,
    /// IEEE double precision.
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Basis,
    Identities,
    Basrec,
    Moments,
    Bernstein,
    All,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// q in (0, 1), as "p/q" or a decimal.
    #[arg(long, default_value = "1/2", allow_hyphen_values = true)]
    pub q: String,
    /// alpha >= 0.
    #[arg(long, default_value = "1/4", allow_hyphen_values = true)]
    pub alpha: String,
    /// Degree of the finite operator.
    #[arg(long, default_value_t = 5)]
    pub n: usize,
    /// Largest degree for `converge`.
    #[arg(long, default_value_t = 40)]
    pub n_max: usize,
    /// Function: eN, poly:c0,c1,..., exp, sin, absshift:c.
    #[arg(long = "f", default_value = "e2")]
    pub function: String,
    /// Point count (uniform on [0, 1]) or a comma-separated list.
    #[arg(long)]
    pub grid: Option<String>,
    /// Evaluation point(s); overrides --grid.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    /// Moment orders, "a..b" (inclusive) or a single integer.
    #[arg(long, default_value = "0..4")]
    pub m: String,
    /// Arithmetic backend.
    #[arg(long, value_enum, default_value_t = Mode::Auto)]
    pub mode: Mode,
    /// Tail tolerance for infinite products and series
    /// [default: 1e-14 for converge, 1e-10 otherwise].
    #[arg(long)]
    pub tail_tol: Option<f64>,
    /// Table format; JSON also carries the config echo and certificates.
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub output: OutputFormat,
    /// Write the table here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Use the limit operator S_inf.
    #[arg(long)]
    pub limit: bool,
    /// Check group for `crosscheck`.
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// Seed for the randomised identity checks.
    #[arg(long, default_value_t = 20_240_917)]
    pub seed: u64,
}

/// Parsed and validated configuration shared by every command.
#[derive(Debug, Clone)]
pub struct RunConfig {
    command: CommandKind,
    args: RunArgs,
    kind: ScalarKind,
    grid: Vec<String>,
    orders: Vec<usize>,
    tail_tol: f64,
}

impl RunConfig {
    fn echo(&self) -> Vec<(String, String)> {
        let a = &self.args;
        let mut out = vec![
            (
                "command".to_string(),
                format!("{:?}", self.command).to_lowercase(),
            ),
            ("mode".to_string(), self.kind.to_string()),
            ("q".to_string(), a.q.clone()),
            ("alpha".to_string(), a.alpha.clone()),
            ("f".to_string(), a.function.clone()),
            ("grid".to_string(), self.grid.join(",")),
            ("tail_tol".to_string(), format!("{:e}", self.tail_tol)),
            ("limit".to_string(), a.limit.to_string()),
        ];
        match self.command {
            CommandKind::Eval => out.push(("n".into(), a.n.to_string())),
            CommandKind::Moments => {
                out.push(("n".into(), a.n.to_string()));
                out.push(("m".into(), a.m.clone()));
            }
            CommandKind::Crosscheck => {
                out.push(("suite".into(), format!("{:?}", a.suite).to_lowercase()));
                out.push(("seed".into(), a.seed.to_string()));
            }
            CommandKind::Converge => out.push(("n_max".into(), a.n_max.to_string())),
        }
        out
    }
}

fn looks_decimal(s: &str) -> bool {
    s.contains(['.', 'e', 'E'])
}

fn parse_orders(s: &str) -> Result<Vec<usize>> {
    let bad = || Error::Parse(format!("--m expects \"a..b\" or an integer, got {s:?}"));
    let s = s.trim();
    if let Some((a, b)) = s.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        Ok((a..=b).collect())
    } else {
        Ok(vec![s.parse().map_err(|_| bad())?])
    }
}

fn parse_grid(grid: Option<&str>, x: Option<&str>, default_count: usize) -> Result<Vec<String>> {
    let list = |s: &str| -> Vec<String> { s.split(',').map(|p| p.trim().to_string()).collect() };
    if let Some(x) = x {
        return Ok(list(x));
    }
    match grid {
        Some(g) if g.contains([',', '/', '.']) => Ok(list(g)),
        _ => {
            let count = match grid {
                Some(g) => g.trim().parse::<usize>().map_err(|_| {
                    Error::Parse(format!("--grid expects a count or a list, got {g:?}"))
                })?,
                None => default_count,
            };
            if count < 2 {
                return Err(Error::Parse("--grid count must be at least 2".into()));
            }
            Ok((0..count).map(|j| format!("{j}/{}", count - 1)).collect())
        }
    }
}

impl RunConfig {
    fn resolve(command: CommandKind, args: RunArgs) -> Result<Self> {
        let f: SampledFunction<f64> = args.function.parse()?;
        let series =
            args.limit && command != CommandKind::Crosscheck || command == CommandKind::Converge;
        let default_count = if command == CommandKind::Converge {
            33
        } else {
            9
        };
        let grid = parse_grid(args.grid.as_deref(), args.x.as_deref(), default_count)?;
        let orders = parse_orders(&args.m)?;

        let kind = match args.mode {
            Mode::Float => ScalarKind::Float,
            Mode::Exact => {
                if f.requires_float() {
                    return Err(Error::ModeMismatch(format!(
                        "function {} needs floating point; use --mode float",
                        args.function
                    )));
                }
                if series && command != CommandKind::Moments {
                    return Err(Error::ModeMismatch(
                        "the limit operator series is evaluated in floating point; use --mode float"
                            .into(),
                    ));
                }
                ScalarKind::ExactRational
            }
            Mode::Auto => {
                let decimal_input = [&args.q, &args.alpha]
                    .into_iter()
                    .chain(grid.iter())
                    .any(|s| looks_decimal(s))
                    || args
                        .function
                        .split_once(':')
                        .is_some_and(|(_, rest)| looks_decimal(rest));
                if f.requires_float() || series || decimal_input {
                    ScalarKind::Float
                } else {
                    ScalarKind::ExactRational
                }
            }
        };
        if kind.is_exact() {
            // Validates the text once; commands parse again into their scalar type.
            for s in [&args.q, &args.alpha].into_iter().chain(grid.iter()) {
                s.parse::<Rational>()?;
            }
        }
        let tail_tol = args
            .tail_tol
            .unwrap_or(if command == CommandKind::Converge {
                1e-14
            } else {
                1e-10
            });
        Ok(RunConfig {
            command,
            args,
            kind,
            grid,
            orders,
            tail_tol,
        })
    }
}

/// Result of one command: the table and whether every requested check passed.
pub struct Outcome {
    pub table: ResultTable,
    pub passed: bool,
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("QSTANCU_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("QSTANCU_THREADS must be an integer, got {v:?}")))?;
    // A second call in the same process finds the pool already built.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

fn execute(config: &RunConfig) -> Result<Outcome> {
    let mut outcome = match config.command {
        CommandKind::Eval => commands::eval(config)?,
        CommandKind::Moments => commands::moments(config)?,
        CommandKind::Crosscheck => crosscheck::run(config)?,
        CommandKind::Converge => commands::converge(config)?,
    };
    outcome.table.config = config.echo();
    Ok(outcome)
}

fn emit(config: &RunConfig, table: &ResultTable) -> Result<()> {
    let mut sink: Box<dyn Write> = match &config.args.out {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    };
    match config.args.output {
        OutputFormat::Csv => table.write_csv(&mut sink)?,
        OutputFormat::Json => writeln!(sink, "{}", table.to_json_string())?,
    }
    sink.flush()?;
    Ok(())
}

/// Runs the CLI on explicit arguments and returns the exit code.
pub fn run_from<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let (command, args) = match cli.command {
        Command::Eval(a) => (CommandKind::Eval, a),
        Command::Moments(a) => (CommandKind::Moments, a),
        Command::Crosscheck(a) => (CommandKind::Crosscheck, a),
        Command::Converge(a) => (CommandKind::Converge, a),
    };
    let result = configure_threads()
        .and_then(|_| RunConfig::resolve(command, args))
        .and_then(|cfg| execute(&cfg).map(|o| (cfg, o)))
        .and_then(|(cfg, o)| emit(&cfg, &o.table).map(|_| o.passed));
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_CHECK_FAILED,
        Err(e) => {
            eprintln!("qstancu: {e}");
            EXIT_USAGE
        }
    }
}

pub fn run() -> i32 {
    run_from(std::env::args_os())
}
