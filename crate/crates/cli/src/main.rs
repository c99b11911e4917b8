//! Command-line front end: count the orbits exactly, find them numerically,
//! verify the eigenvector and differential-equation structure on them, or
//! build the critical-line families of the non-isolated regime.
//!
//! Exit codes: 0 on success, 2 on usage or configuration errors,
//! 3 on a count mismatch (genericity suspect), 4 on verification failures.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use gaudin_cli::config::{resolve, Overrides, RunConfig};
use gaudin_cli::pipeline::{self, Outcome};
use gaudin_cli::report::RunReport;

#[derive(Parser)]
#[command(
    name = "gaudin",
    version,
    about = "Critical points, commuting Hamiltonians, and equations with polynomial solutions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Path to the JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Write the full machine-readable report here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Arithmetic mode: "exact" or "float".
    #[arg(long)]
    mode: Option<String>,
    /// Master seed for every randomized choice.
    #[arg(long)]
    seed: Option<u64>,
    /// Start scale of the spread configuration (s, s^2, ...).
    #[arg(long)]
    s: Option<f64>,
    /// Relative residual defining a converged critical point.
    #[arg(long = "tol-newton")]
    tol_newton: Option<f64>,
    /// Orbit identification threshold in symmetric coordinates.
    #[arg(long = "tol-dedup")]
    tol_dedup: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Exact representation-theoretic counts and the regime classification.
    Count(CommonArgs),
    /// Find all isolated critical orbits by seeding and continuation.
    Solve(CommonArgs),
    /// Eigenvector and differential-equation checks on every orbit.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// Reuse the orbits of a prior `solve` report instead of resolving.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Critical-line families of the non-isolated regime.
    Lines(CommonArgs),
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    let (name, common, prior_path) = match &cli.command {
        Command::Count(c) => ("count", c, None),
        Command::Solve(c) => ("solve", c, None),
        Command::Verify { common, report } => ("verify", common, report.as_ref()),
        Command::Lines(c) => ("lines", c, None),
    };
    let text = std::fs::read_to_string(&common.config)
        .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", common.config.display()))?;
    let cfg: RunConfig = serde_json::from_str(&text)
        .map_err(|e| anyhow::anyhow!("bad configuration {}: {e}", common.config.display()))?;
    let overrides = Overrides {
        mode: common.mode.clone(),
        seed: common.seed,
        s: common.s,
        tol_newton: common.tol_newton,
        tol_dedup: common.tol_dedup,
    };
    let resolved = resolve(&cfg, &overrides)?;
    let prior = match prior_path {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))?;
            Some(RunReport::from_json(&text)?)
        }
        None => None,
    };
    let started = Instant::now();
    let outcome = match name {
        "count" => pipeline::cmd_count(&resolved)?,
        "solve" => pipeline::cmd_solve(&resolved)?,
        "verify" => pipeline::cmd_verify(&resolved, prior.as_ref())?,
        "lines" => pipeline::cmd_lines(&resolved)?,
        _ => unreachable!(),
    };
    let elapsed = started.elapsed();
    println!(
        "gaudin {name}: m={:?}, k={}, mode={}",
        resolved.m, resolved.k, resolved.mode
    );
    for line in &outcome.summary {
        println!("  {line}");
    }
    println!(
        "  completed in {:.3}s (exit code {})",
        elapsed.as_secs_f64(),
        outcome.exit_code
    );
    if let Some(out) = &common.out {
        std::fs::write(out, outcome.report.to_json())
            .map_err(|e| anyhow::anyhow!("cannot write {}: {e}", out.display()))?;
    }
    Ok(outcome)
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => std::process::exit(outcome.exit_code),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(2);
        }
    }
}
