//! `shearlab`: derivatives, Hessian certificates, twist trajectories and
//! verification runs from the command line.
//!
//! Exit codes: 0 success, 1 a check failed, 2 bad input or geometry,
//! 3 internal error.

mod commands;
mod error;
mod output;
mod scene;

use std::io::Write;
use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use shearlab::verify::{Suite, VerifyOptions};

use crate::commands::{Outcome, Report, TGrid};
use crate::error::{CliError, CliResult};

const TOL_ENV: &str = "SHEARLAB_TOL_SCALE";

#[derive(Parser)]
#[command(name = "shearlab", version, about = "Shear deformations of closed geodesics in the hyperbolic plane")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form derivative of the length along the shear.
    Derive {
        scene: PathBuf,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=3))]
        order: u8,
        /// Compare against finite differences (and dual numbers for order 1).
        #[arg(long)]
        oracle: bool,
        /// Print a JSON report instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Hessian matrix, positivity certificate and second derivative.
    Hessian {
        scene: PathBuf,
        /// Also evaluate the lower bound for the second derivative.
        #[arg(long)]
        bound: bool,
    },
    /// Trajectory of a twist deformation over a grid of times.
    Twist {
        scene: PathBuf,
        #[arg(long, default_value = "-1:1:21", value_name = "A:B:N", allow_hyphen_values = true)]
        t_grid: TGrid,
        /// Write the trajectory here instead of into the report.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Partial products of the spiralling example.
    Spiral {
        scene: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Seeded verification suites.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        cases: usize,
        /// Honour SHEARLAB_TOL_SCALE.
        #[arg(long)]
        allow_tol_scale: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Kernel,
    Derivatives,
    Twist,
    Hessian,
    Spiral,
    All,
}

impl SuiteArg {
    fn suites(self) -> Vec<Suite> {
        match self {
            SuiteArg::Kernel => vec![Suite::Kernel],
            SuiteArg::Derivatives => vec![Suite::Derivatives],
            SuiteArg::Twist => vec![Suite::Twist],
            SuiteArg::Hessian => vec![Suite::Hessian],
            SuiteArg::Spiral => vec![Suite::Spiral],
            SuiteArg::All => Suite::ALL.to_vec(),
        }
    }
}

fn tol_scale() -> CliResult<f64> {
    match std::env::var(TOL_ENV) {
        Err(_) => Ok(1.0),
        Ok(v) => match v.trim().parse::<f64>() {
            Ok(s) if s.is_finite() && s >= 0.0 => Ok(s),
            _ => Err(CliError::Usage(format!("{TOL_ENV}={v:?} is not a nonnegative number"))),
        },
    }
}

fn run(cli: Cli) -> CliResult<Outcome> {
    match cli.command {
        Command::Derive {
            scene,
            order,
            oracle,
            json,
        } => {
            let scene = scene::parse_scene(&scene)?;
            commands::derive(&scene, order as usize, oracle, json, tol_scale()?)
        }
        Command::Hessian { scene, bound } => {
            let scene = scene::parse_scene(&scene)?;
            commands::hessian(&scene, bound, tol_scale()?)
        }
        Command::Twist { scene, t_grid, csv } => {
            let scene = scene::parse_scene(&scene)?;
            commands::twist(&scene, &t_grid, csv.as_deref(), tol_scale()?)
        }
        Command::Spiral { scene, csv } => {
            let scene = scene::parse_scene(&scene)?;
            commands::spiral(&scene, csv.as_deref())
        }
        Command::Verify {
            suite,
            seed,
            cases,
            allow_tol_scale,
        } => {
            let scale = if allow_tol_scale {
                tol_scale()?
            } else {
                if std::env::var_os(TOL_ENV).is_some() {
                    eprintln!("warning: {TOL_ENV} ignored without --allow-tol-scale");
                }
                1.0
            };
            let suites = if cases == 0 {
                eprintln!("warning: --cases 0, nothing to verify");
                Vec::new()
            } else {
                suite.suites()
            };
            let opts = VerifyOptions {
                seed,
                cases,
                tol_scale: scale,
            };
            Ok(commands::verify(&suites, &opts))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = panic::catch_unwind(AssertUnwindSafe(|| run(cli)))
        .unwrap_or_else(|_| Err(CliError::Internal("panicked".into())));
    let outcome = result.and_then(|o| {
        let text = match &o.report {
            Report::Json(v) => output::to_json(v)?,
            Report::Text(t) => t.clone(),
        };
        let mut out = std::io::stdout().lock();
        match writeln!(out, "{text}").and_then(|_| out.flush()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                Err(CliError::Internal(format!("writing report: {e}")))
            }
            _ => Ok(o.passed),
        }
    });
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
