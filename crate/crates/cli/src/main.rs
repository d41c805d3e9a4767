#![allow(clippy::result_large_err, clippy::neg_cmp_op_on_partial_ord)]

//! Scenario-driven verification runner.
//!
//! Exit codes: 0 all suites pass, 1 a suite failed, 2 configuration or
//! output error, 3 math error during evaluation.

mod error;
mod report;
mod scenario;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use error::CliError;
use report::Format;
use scenario::Overrides;

#[derive(Debug, Parser)]
#[command(name = "confgeom", version, about = "Run verification suites from a scenario file")]
struct Args {
    /// Scenario file (JSON).
    #[arg(long)]
    scenario: PathBuf,
    /// Directory for report files.
    #[arg(long, default_value = "reports")]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "obj")]
    format: Format,
    /// Run only suites of this kind; repeatable.
    #[arg(long = "suite")]
    suites: Vec<String>,
    /// Grid size override for both surface and curve grids.
    #[arg(long)]
    grid: Option<usize>,
    /// Tolerance override for every suite.
    #[arg(long)]
    tol: Option<f64>,
    /// Seed for randomized grid points.
    #[arg(long)]
    seed: Option<u64>,
}

fn run(args: &Args) -> Result<bool, CliError> {
    let overrides = Overrides {
        suites: args.suites.clone(),
        grid: args.grid,
        tol: args.tol,
        seed: args.seed,
    };
    let scenario = scenario::load(&args.scenario, &overrides)?;
    let mut sections = Vec::with_capacity(scenario.jobs.len());
    for job in &scenario.jobs {
        sections.push(suites::run_job(&scenario, job)?);
    }
    let mut all = true;
    for s in &sections {
        let path = report::write(&args.out, s, args.format)?;
        println!(
            "{:<4} {:<28} max {:.3e}  tol {:.1e}  {}",
            if s.pass { "PASS" } else { "FAIL" },
            s.suite,
            s.max_residual,
            s.tolerance,
            path.display()
        );
        all &= s.pass;
    }
    Ok(all)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
