//! `motivic`: batch front end for the motivic-core engine. Each invocation
//! reads one JSON document and prints a report.
//!
//! Exit codes: 0 success, 1 a checked identity fails, 2 unreadable or
//! invalid input, 3 enumeration budget exceeded.

mod commands;
mod input;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use motivic_core::toric::RefineStrategy;
use motivic_core::ExecMode;

use commands::{Failure, Output, SweepParams};
use input::{parse_list, InputDocument};

#[derive(Parser)]
#[command(name = "motivic", version, about = "Motivic zeta functions and nearby fibers")]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Run on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    MinSum,
    MinMax,
}

#[derive(Subcommand)]
enum Command {
    /// Zeta function of a resolution or monomial document.
    Zeta {
        file: PathBuf,
        #[arg(long, conflicts_with = "equivariant")]
        naive: bool,
        #[arg(long)]
        equivariant: bool,
    },
    /// Nearby fiber, in the open basis unless --complete is given.
    Nearby {
        file: PathBuf,
        #[arg(long)]
        complete: bool,
    },
    /// Check an identity: selfdual, naive-feq, sprime-feq or power:m.
    Check { file: PathBuf, identity: String },
    /// Toric reports: hpoly, gpoly:τ, ds, ppoly, resolve or dual.
    Toric {
        file: PathBuf,
        sub: String,
        #[arg(long, value_enum, default_value = "min-sum")]
        strategy: Strategy,
        /// Seed for the random refinement check of ppoly.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Cover lattices: lattice, restrict:axis, components, hilbert or complete[:α].
    Cover { file: PathBuf, sub: String },
    /// Compare zeta coefficients with arc counts over F_q.
    Arcs { file: PathBuf },
    /// Count x^2 = g(x) against 2 #{g != 0} over several fields.
    Twist {
        #[arg(long, default_value = "3,5,7,9,11")]
        q: String,
        /// Coefficients c0,c1,c2,c3 of g.
        #[arg(long, default_value = "0,-1,0,1", allow_hyphen_values = true)]
        cubic: String,
    },
    /// Run every identity on random resolution data and random cones.
    Sweep {
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 3)]
        max_d: u32,
        #[arg(long, default_value_t = 4)]
        max_k: usize,
        #[arg(long, default_value_t = 6)]
        max_mn: u64,
        #[arg(long, default_value_t = 20)]
        cones: usize,
    },
}

fn load(file: &Path) -> Result<InputDocument, Failure> {
    Ok(InputDocument::load(file)?)
}

fn run(command: Command, exec: ExecMode) -> Result<Output, Failure> {
    match command {
        Command::Zeta { file, naive: _, equivariant } => commands::zeta(&load(&file)?, equivariant),
        Command::Nearby { file, complete } => commands::nearby(&load(&file)?, complete),
        Command::Check { file, identity } => commands::check(&load(&file)?, &identity),
        Command::Toric { file, sub, strategy, seed } => {
            let strategy = match strategy {
                Strategy::MinSum => RefineStrategy::MinSum,
                Strategy::MinMax => RefineStrategy::MinMax,
            };
            commands::toric(&load(&file)?, &sub, strategy, seed)
        }
        Command::Cover { file, sub } => commands::cover(&load(&file)?, &sub),
        Command::Arcs { file } => commands::arcs(&load(&file)?, exec),
        Command::Twist { q, cubic } => {
            let qs: Vec<u32> = parse_list(&q)?;
            let c: Vec<i64> = parse_list(&cubic)?;
            let c: [i64; 4] =
                c.try_into().map_err(|_| Failure::Input("--cubic needs four coefficients".into()))?;
            Ok(commands::twist(&qs, c))
        }
        Command::Sweep { seed, count, max_d, max_k, max_mn, cones } => {
            let p = SweepParams { seed, count, max_d, max_k, max_mn, cones };
            Ok(commands::sweep(&p, exec))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let exec = if cli.sequential { ExecMode::Sequential } else { ExecMode::Parallel };
    match run(cli.command, exec) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("reports serialize"));
            } else {
                println!("{}", out.text);
            }
            ExitCode::from(if out.pass { 0 } else { 1 })
        }
        Err(f) => {
            if cli.json {
                println!("{}", serde_json::json!({ "error": f.message(), "exit": f.exit_code() }));
            } else if let Failure::Budget(m) = &f {
                // the partial report goes to stdout, the reason to stderr
                println!("{m}");
            }
            eprintln!("motivic: {}", f.message().lines().last().unwrap_or_default());
            ExitCode::from(f.exit_code())
        }
    }
}
