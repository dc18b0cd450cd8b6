//! The `ectrl` command line. Exit codes: 0 success, 1 runtime or I/O
//! failure, 2 usage or config error. Machine-readable output goes to
//! standard output, everything else to standard error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::control::{
    instantiate_real, nd_ect_numeric, nd_ect_symmetric, nd_et, nd_oracle, nd_sct_pattern, DriverResult, EctOptions,
};
use crate::dynamics::{assemble, assign_types, make_unit_type, UnitType};
use crate::error::{Error, Result};
use crate::experiments::{self, ExperimentConfig, RunOptions, CONFIG_SCHEMA};
use crate::netgen::{self, GraphModel, GraphSpec, Topology};
use crate::rational::Rational;
use crate::seeds;
use crate::validation;

#[derive(Debug, Parser)]
#[command(name = "ectrl", version, about = "Driver-node counts for networks of heterogeneous dynamic units")]
pub struct Cli {
    /// Worker threads for sweeps.
    #[arg(long, global = true, env = "ECTRL_JOBS")]
    pub jobs: Option<usize>,
    /// Progress and diagnostics on standard error.
    #[arg(short, long, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModelArg {
    Er,
    Sf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MethodArg {
    Et,
    Ect,
    EctSym,
    Sct,
    Oracle,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a random network and write it as an edge list.
    Gen {
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long)]
        n: usize,
        /// Mean total degree.
        #[arg(long, allow_negative_numbers = true)]
        k: f64,
        #[arg(long, default_value_t = 3.0)]
        gamma: f64,
        #[arg(long)]
        directed: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Edge-list output; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Driver count of one network as JSON.
    Analyze {
        /// Edge-list file.
        #[arg(long)]
        edges: PathBuf,
        /// Unit types as `eigs:density` items, eigenvalues separated by `;`,
        /// e.g. `2:0.5,0:0.5` or `1;2:1/2,3;4:1/2`.
        #[arg(long, default_value = "0:1")]
        types: String,
        #[arg(long, default_value_t = 1)]
        order: usize,
        #[arg(long, value_enum, default_value = "et")]
        method: MethodArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run an experiment sweep from a JSON config and write CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Cross-check the driver-count routes against the exact oracle.
    Oracle {
        #[arg(long, default_value_t = 200)]
        instances: usize,
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the experiment config JSON schema.
    Schema,
}

/// Parses `eigs:density` items into unit types and densities.
pub fn parse_types(spec: &str, order: usize) -> Result<(Vec<UnitType>, Vec<Rational>)> {
    let mut types = Vec::new();
    let mut densities = Vec::new();
    for (i, item) in spec.split(',').enumerate() {
        let (eigs, dens) = item
            .rsplit_once(':')
            .ok_or_else(|| Error::Parse(format!("type {item:?} is not `eigenvalues:density`")))?;
        let eigs = eigs.split(';').map(str::parse).collect::<Result<Vec<Rational>>>()?;
        types.push(make_unit_type(order, eigs)?.with_id(i));
        densities.push(dens.parse()?);
    }
    Ok((types, densities))
}

/// Writes to standard output; a closed pipe downstream is not an error.
fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Error::io("<stdout>", e)),
        _ => Ok(()),
    }
}

fn print_json<T: serde::Serialize>(v: &T) -> Result<()> {
    let text = serde_json::to_string(v).map_err(|e| Error::Parse(e.to_string()))?;
    emit(&format!("{text}\n"))
}

fn cmd_gen(model: ModelArg, n: usize, k: f64, gamma: f64, directed: bool, seed: u64, out: Option<PathBuf>) -> Result<()> {
    let spec = GraphSpec {
        model: match model {
            ModelArg::Er => GraphModel::Er,
            ModelArg::Sf => GraphModel::Sf,
        },
        n_nodes: n,
        mean_degree: k,
        gamma,
        directed,
        seed,
    };
    let t = netgen::generate(&spec)?;
    let stats = t.degree_stats();
    match out {
        Some(path) => {
            t.write(&path)?;
            print_json(&stats)
        }
        None => {
            emit(&t.to_edge_list())?;
            eprintln!("{}", serde_json::to_string(&stats).unwrap_or_default());
            Ok(())
        }
    }
}

fn cmd_analyze(edges: PathBuf, types: &str, order: usize, method: MethodArg, seed: u64) -> Result<DriverResult> {
    let t = Topology::read(&edges)?;
    let (types, densities) = parse_types(types, order)?;
    let a = assign_types(types, densities, t.n_nodes, seeds::derive(seed, seeds::stream::ASSIGNMENT))?;
    let m = assemble(&t, &a)?;
    let opts = EctOptions::default();
    let res = match method {
        MethodArg::Et => nd_et(&m, seeds::derive(seed, seeds::stream::RANK)),
        MethodArg::Ect => nd_ect_numeric(&instantiate_real(&m, seeds::derive(seed, seeds::stream::NUMERIC)), &opts),
        MethodArg::EctSym => {
            nd_ect_symmetric(&instantiate_real(&m, seeds::derive(seed, seeds::stream::NUMERIC)), &opts)
        }
        MethodArg::Sct => Ok(nd_sct_pattern(&m)),
        MethodArg::Oracle => nd_oracle(&m, seed),
    };
    res.map(|r| r.with_nodes(m.n_nodes))
}

fn cmd_sweep(config: PathBuf, out: PathBuf, jobs: Option<usize>, verbose: bool) -> Result<()> {
    let text = std::fs::read_to_string(&config).map_err(|e| Error::io(&config, e))?;
    let cfg = ExperimentConfig::from_json(&text).map_err(|e| match e {
        Error::InvalidConfig(msg) => Error::InvalidConfig(format!(
            "{}: {msg} (run `ectrl schema` for the config schema)",
            config.display()
        )),
        other => other,
    })?;
    eprintln!(
        "{}: {} realizations per point, methods {:?}",
        cfg.experiment.as_str(),
        cfg.realizations,
        cfg.active_methods()
    );
    let rows = experiments::run(&cfg, &RunOptions { jobs, progress: true })?;
    experiments::emit_csv(&rows, &out)?;
    if verbose {
        eprintln!("wrote {} rows to {}", rows.len(), out.display());
    }
    Ok(())
}

fn cmd_oracle(instances: usize, max_n: usize, seed: u64) -> Result<bool> {
    let agreement = validation::oracle_agreement(instances, max_n, seed)?;
    let shifts = validation::shift_checks(instances, max_n, seed)?;
    for d in &agreement.disagreements {
        eprintln!(
            "disagreement: instance {} seed {:#x} dim {} order {}: oracle {} et {} ect {}",
            d.instance, d.seed, d.dim, d.order, d.oracle, d.et, d.ect_numeric
        );
    }
    for f in &shifts.failures {
        eprintln!("shift check failed: instance {} seed {:#x} n {} w {}", f.instance, f.seed, f.n, f.w);
    }
    let pass = agreement.passed() && shifts.failures.is_empty();
    print_json(&serde_json::json!({
        "pass": pass,
        "agreement": {
            "instances": agreement.instances,
            "agreed": agreement.agreed,
            "fraction": agreement.fraction(),
            "first_order": agreement.by_order[0],
            "second_order": agreement.by_order[1],
        },
        "shift_check": {
            "instances": shifts.instances,
            "failures": shifts.failures.len(),
        },
    }))?;
    Ok(pass)
}

/// Runs the parsed command; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Gen { model, n, k, gamma, directed, seed, out } => {
            cmd_gen(model, n, k, gamma, directed, seed, out).map(|_| 0)
        }
        Command::Analyze { edges, types, order, method, seed } => {
            cmd_analyze(edges, &types, order, method, seed).and_then(|r| print_json(&r)).map(|_| 0)
        }
        Command::Sweep { config, out } => cmd_sweep(config, out, cli.jobs, cli.verbose).map(|_| 0),
        Command::Oracle { instances, max_n, seed } => cmd_oracle(instances, max_n, seed).map(|ok| if ok { 0 } else { 1 }),
        Command::Schema => {
            emit(&format!("{}\n", CONFIG_SCHEMA.trim_end())).map(|_| 0)
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_usage() {
                2
            } else {
                1
            }
        }
    }
}

pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            code
        }
    }
}
