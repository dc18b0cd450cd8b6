//! Driver fraction against the density of one unit type. The curve is
//! symmetric about one half: no self-dynamics and identical self-dynamics
//! everywhere give the same count.
//!
//! cargo run --release --example rho_sweep -- [config.json]
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
    let mut cfg = ExperimentConfig::new(ExperimentKind::RhoSweep, GraphSpec::er(200, 4.0, 0));
    cfg.types = Some(vec![vec![Rational::from_int(1)], vec![Rational::zero()]]);
    cfg.realizations = 10;
    Ok(cfg)
}

fn main() -> ectrl::Result<()> {
    let cfg = config()?;
    let rows = experiments::run(&cfg, &RunOptions { jobs: None, progress: true })?;
    experiments::write_csv(&rows, std::io::stdout().lock())
}
