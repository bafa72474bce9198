use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use meancmp::cli::{run_compare, run_selftest, Overrides};

/// Local and global comparison of generalized Bajraktarević means.
#[derive(Parser)]
#[command(version, about)]
struct Args {
    #[command(subcommand)]
    command: Command,
    /// Seed for randomized search.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Gap-search grid resolution per axis.
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Equality tolerance and inequality slack.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Write the n = 2 gap landscape to this CSV file.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    /// Do not print the summary.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Compare mean1 against mean2 as described by a TOML config.
    Compare { config: PathBuf },
    /// Run the built-in invariant suites.
    Selftest,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match args.command {
        Command::Compare { config } => {
            let overrides = Overrides {
                seed: args.seed,
                grid: args.grid,
                tol: args.tol,
                csv: args.csv,
            };
            match run_compare(&config, &overrides) {
                Ok((outcome, summary)) => {
                    if !args.quiet {
                        print!("{summary}");
                    }
                    ExitCode::from(outcome.exit_code() as u8)
                }
                Err(e) => {
                    eprintln!("meancmp: {e}");
                    ExitCode::from(e.exit_code() as u8)
                }
            }
        }
        Command::Selftest => {
            let suites = run_selftest();
            let mut ok = true;
            for s in &suites {
                ok &= s.passed();
                if !args.quiet || !s.passed() {
                    println!(
                        "{}: {} ({} checks)",
                        s.name,
                        if s.passed() { "PASS" } else { "FAIL" },
                        s.checked
                    );
                }
                for f in &s.failures {
                    println!("  {f}");
                }
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
