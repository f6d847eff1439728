//! Configuration-driven experiment runner for `fracframes`.
//!
//! [`config`] resolves a TOML configuration, [`experiments`] runs it and
//! [`output`] writes the CSV tables and `summary.json`.

pub mod config;
pub mod experiments;
pub mod output;

use std::path::Path;

use anyhow::Result;

pub use config::{Config, ExperimentKind};
pub use experiments::Report;

/// Runs `config`, writing its outputs under `out` (nothing is written when `None`).
pub fn run(config: &Config, out: Option<&Path>) -> Result<Report> {
    let mut outputs = output::Outputs::new(out)?;
    experiments::run(config, &mut outputs)
}

/// Like [`run`], and additionally tabulates the coefficients and point
/// values of the last stationary solve.
pub fn solve(config: &Config, out: Option<&Path>) -> Result<Report> {
    let mut outputs = output::Outputs::new(out)?;
    let report = experiments::run(config, &mut outputs)?;
    experiments::write_solution(config, &report, &mut outputs)?;
    Ok(report)
}
