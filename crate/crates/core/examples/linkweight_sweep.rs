//! A growing fraction of edges share one fixed weight. Sparse graphs barely
//! notice; near-complete graphs lose controllability once most weights are
//! equal.
//!
//! cargo run --release --example linkweight_sweep -- [config.json]
//!
//! Without an argument a small built-in ensemble runs in a few seconds;
//! pass one of the files in `configs/` for the desk-scale version.

use ectrl::experiments::{self, ExperimentConfig, ExperimentKind, RunOptions};
use ectrl::netgen::GraphSpec;
#[allow(unused_imports)]
use ectrl::Rational;

fn config() -> ectrl::Result<ExperimentConfig> {
    if let Some(path) = std::env::args().nth(1) {
        let text = std::fs::read_to_string(&path).map_err(|e| ectrl::Error::InvalidConfig(format!("{path}: {e}")))?;
        return ExperimentConfig::from_json(&text);
    }
    let mut cfg = ExperimentConfig::new(ExperimentKind::LinkweightSweep, GraphSpec::er(60, 4.0, 0));
    cfg.grid.mean_degrees = Some(vec![4.0, 57.0]);
    cfg.realizations = 6;
    cfg.methods = vec![ectrl::Method::Et, ectrl::Method::EctNumeric];
    Ok(cfg)
}

fn main() -> ectrl::Result<()> {
    let cfg = config()?;
    let rows = experiments::run(&cfg, &RunOptions { jobs: None, progress: true })?;
    experiments::write_csv(&rows, std::io::stdout().lock())
}
