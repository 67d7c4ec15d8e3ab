//! Command-line front end: instance files, generation, solving and batch
//! evaluation.

pub mod eval;
pub mod gen;
pub mod io;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use incknap::oracle::OracleBudget;
use incknap::rational::parse_rational;
use incknap::{Error, Rational};

use crate::eval::{run_eval, run_solver, EvalConfig, Mode};
use crate::gen::{generate, Profile};
use crate::io::{instance_to_json, read_instance, read_solution, solution_to_json, write_output, IoError, SolutionFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_GUARANTEE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

fn parse_eps(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "inc-knap", version, about = "Incremental knapsack solvers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve an instance file and write the solution as JSON.
    Solve {
        input: PathBuf,
        #[arg(long, default_value = "general")]
        mode: Mode,
        #[arg(long, default_value = "0.5", value_parser = parse_eps)]
        eps: Rational,
        /// Assignment budget for the exhaustive solver.
        #[arg(long, default_value_t = OracleBudget::default().max_assignments)]
        budget: u128,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a seeded random instance.
    Gen {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
        t: u64,
        #[arg(long, default_value = "uniform")]
        profile: Profile,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run solvers on generated instances and compare with the exhaustive optimum.
    Eval {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Number of instances (seeds `seed..seed+count`).
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
        t: u64,
        #[arg(long, default_value = "uniform")]
        profile: Profile,
        #[arg(long, value_delimiter = ',', default_value = "0.5", value_parser = parse_eps)]
        eps: Vec<Rational>,
        #[arg(long, value_delimiter = ',', default_value = "general")]
        mode: Vec<Mode>,
        /// Skip the exhaustive comparison.
        #[arg(long)]
        no_oracle: bool,
        #[arg(long, default_value_t = OracleBudget::default().max_assignments)]
        budget: u128,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check an instance file, and optionally a solution against it.
    Validate {
        input: PathBuf,
        #[arg(long)]
        solution: Option<PathBuf>,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Model(#[from] Error),
    #[error("solution claims profit {claimed}, actual objective is {actual}")]
    ProfitMismatch { claimed: String, actual: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Model(Error::BudgetExceeded { .. }) => EXIT_BUDGET,
            _ => EXIT_INVALID,
        }
    }
}

/// Executes a parsed command; the `Ok` value is the process exit code.
pub fn execute(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Solve {
            input,
            mode,
            eps,
            budget,
            out,
        } => {
            let inst = read_instance(&input)?;
            inst.validate()?;
            let (solution, profit) = run_solver(&inst, mode, &eps, OracleBudget::new(budget))?;
            let file = SolutionFile::new(&inst, &solution, &profit);
            write_output(out.as_deref(), &solution_to_json(&file))?;
            Ok(EXIT_OK)
        }
        Command::Gen {
            seed,
            n,
            t,
            profile,
            out,
        } => {
            let inst = generate(seed, n as usize, t as usize, profile);
            write_output(out.as_deref(), &instance_to_json(&inst))?;
            Ok(EXIT_OK)
        }
        Command::Eval {
            seed,
            count,
            n,
            t,
            profile,
            eps,
            mode,
            no_oracle,
            budget,
            out,
        } => {
            let summary = run_eval(&EvalConfig {
                seed,
                count,
                n: n as usize,
                t: t as usize,
                profile,
                eps,
                modes: mode,
                oracle: !no_oracle,
                budget: OracleBudget::new(budget),
            });
            write_output(out.as_deref(), &summary.to_csv())?;
            if summary.violations > 0 {
                eprintln!("{} row(s) below the guaranteed ratio", summary.violations);
            }
            if summary.budget_errors + summary.other_errors > 0 {
                eprintln!("{} row(s) failed", summary.budget_errors + summary.other_errors);
            }
            Ok(summary.exit_code())
        }
        Command::Validate { input, solution } => {
            let inst = read_instance(&input)?;
            inst.validate()?;
            if let Some(path) = solution {
                let file = read_solution(&path)?;
                let sol = file.to_solution(inst.horizon())?;
                let actual = inst.objective(&sol)?;
                let claimed = parse_rational(&file.profit).map_err(|source| IoError::Number {
                    field: "profit".into(),
                    source,
                })?;
                if claimed != actual {
                    return Err(CliError::ProfitMismatch {
                        claimed: file.profit,
                        actual: incknap::rational::format_rational(&actual),
                    });
                }
            }
            println!("ok");
            Ok(EXIT_OK)
        }
    }
}

/// Parses `args` (program name first), runs, and reports errors on stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
