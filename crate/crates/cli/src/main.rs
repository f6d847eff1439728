use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use fracframes_cli::experiments::describe;
use fracframes_cli::{Config, ExperimentKind, Report};

/// Frame-based spectral solvers for fractional PDEs.
#[derive(Debug, Parser)]
#[command(name = "frame", version)]
struct Cli {
    /// SVD cutoff, overriding `svd_eps` of the configuration.
    #[arg(long, global = true, value_name = "FLOAT")]
    svd_eps: Option<f64>,
    /// Worker threads (falls back to FRACFRAMES_THREADS, then all cores).
    #[arg(long, global = true, value_name = "INT")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve the problem described by a configuration file.
    Solve {
        #[arg(long, value_name = "PATH")]
        config: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run one of the built-in experiments.
    Experiment {
        /// gaussian, mult-exponents, gaussian2d, frac-heat or variable-s
        name: String,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Debug, clap::Args)]
struct RunArgs {
    /// Override a configuration key, e.g. `grid.pts_per_segment=1001`.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Validate the configuration and print the resolved setup without computing.
    #[arg(long)]
    dry_run: bool,
}

fn threads(cli: &Cli) -> Result<Option<usize>> {
    if let Some(n) = cli.threads {
        return Ok(Some(n));
    }
    match std::env::var("FRACFRAMES_THREADS") {
        Ok(v) if !v.trim().is_empty() => {
            Ok(Some(v.trim().parse().with_context(|| format!("FRACFRAMES_THREADS={v:?} is not a count"))?))
        }
        _ => Ok(None),
    }
}

fn print_report(report: &Report) {
    if !report.convergence.is_empty() {
        println!(
            "{}: best rhs error {:.3e}, best solution error {:.3e}",
            report.name,
            report.best_rhs_error(),
            report.best_sol_error()
        );
    }
    for row in &report.time {
        println!("{} dt={:e}: max relative error {:.3e}", row.method, row.dt, row.max_rel_error);
    }
    for row in &report.tails {
        println!("{} (s at end {:.4}): tail slope {:.4}", row.run, row.s_end, row.tail_slope);
    }
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(n) = threads(&cli)? {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring the thread pool")?;
    }
    let (config, run, is_solve) = match &cli.command {
        Command::Solve { config, run } => {
            let mut overrides = run.overrides.clone();
            overrides.extend(cli.svd_eps.map(|e| format!("svd_eps={e:e}")));
            (Config::from_file(config, &overrides)?, run, true)
        }
        Command::Experiment { name, run } => {
            let kind: ExperimentKind = name.parse()?;
            let mut overrides = run.overrides.clone();
            overrides.extend(cli.svd_eps.map(|e| format!("svd_eps={e:e}")));
            (Config::resolve(kind, None, &overrides)?, run, false)
        }
    };
    if run.dry_run {
        print!("{}", describe(&config)?);
        println!("resolved configuration:\n{}", toml::to_string(&config)?);
        return Ok(());
    }
    let report = if is_solve {
        fracframes_cli::solve(&config, Some(&run.out))?
    } else {
        fracframes_cli::run(&config, Some(&run.out))?
    };
    print_report(&report);
    Ok(())
}
