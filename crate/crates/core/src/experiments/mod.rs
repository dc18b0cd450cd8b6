//! Ensemble sweeps: for each grid point, average the driver fraction over
//! independent realizations of topology, type placement and weights.
//!
//! Grid points × realizations form one flat task list evaluated on a rayon
//! pool; results are collected in task order, so output never depends on
//! the number of workers. Realization `r` at grid point `g` draws from
//! `seeds::realization_seed(master_seed, g, r)`. With `pair_topologies`
//! the network itself comes from `derive(derive(master_seed, TOPOLOGY), r)`
//! and is shared across grid points.

mod config;
mod table;

use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::Serialize;

use crate::control::{
    instantiate_real, nd_ect_numeric, nd_ect_symmetric, nd_et_with, nd_sct_pattern, EctOptions, EtOptions, Method,
};
use crate::dynamics::{
    assemble_with_link_weights, assign_types, delta_exact, densities_on_simplex, make_unit_type, UnitType,
};
use crate::error::{Error, Result};
use crate::netgen::{self, GraphSpec};
use crate::rational::Rational;
use crate::seeds::{self, stream};

pub use config::{AllNodes, ExperimentConfig, ExperimentKind, Grid, TypeCount, CONFIG_SCHEMA};
pub use table::{emit_csv, read_csv, write_csv, CsvRecord, CSV_HEADER};

/// Aggregate over realizations at one grid point for one method.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub experiment: ExperimentKind,
    pub coords: [Option<f64>; 3],
    pub method: Method,
    /// Mean of `N_D / (dN)`.
    pub mean_nd: f64,
    /// Mean of `N_D / N`.
    pub mean_nd_per_node: f64,
    pub std: f64,
    pub stderr: f64,
    pub realizations: usize,
    pub seconds: f64,
    /// `N_D` of every realization, in realization order.
    pub n_d_samples: Vec<usize>,
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Worker threads; `None` uses rayon's default.
    pub jobs: Option<usize>,
    /// Progress lines on standard error.
    pub progress: bool,
}

/// One grid point, fully resolved.
#[derive(Debug, Clone)]
struct GridPoint {
    coords: [Option<f64>; 3],
    types: Vec<UnitType>,
    densities: Vec<Rational>,
    graph: GraphSpec,
    /// Fraction of edges carrying the fixed weight, and that weight.
    shared_links: Option<(Rational, Rational)>,
}

fn unit_types(order: usize, table: &[Vec<Rational>]) -> Result<Vec<UnitType>> {
    table
        .iter()
        .enumerate()
        .map(|(i, eigs)| Ok(make_unit_type(order, eigs.clone())?.with_id(i)))
        .collect()
}

fn point(coords: [Option<f64>; 3], types: Vec<UnitType>, densities: Vec<Rational>, cfg: &ExperimentConfig) -> GridPoint {
    GridPoint {
        coords,
        types,
        densities,
        graph: cfg.graph.clone(),
        shared_links: None,
    }
}

fn two_type_points(cfg: &ExperimentConfig, with_order: bool) -> Result<Vec<GridPoint>> {
    let types = unit_types(cfg.order, &cfg.type_table())?;
    Ok(cfg
        .rho_grid()
        .into_iter()
        .map(|rho| {
            let rest = Rational::one() - rho.clone();
            let coord2 = with_order.then_some(cfg.order as f64);
            point([Some(rho.to_f64()), coord2, None], types.clone(), vec![rho, rest], cfg)
        })
        .collect())
}

fn simplex_points(cfg: &ExperimentConfig) -> Result<Vec<GridPoint>> {
    let types = unit_types(1, &cfg.type_table())?;
    Ok(densities_on_simplex(&cfg.simplex_step())?
        .into_iter()
        .map(|p| {
            let coords = [Some(p[0].to_f64()), Some(p[1].to_f64()), Some(p[2].to_f64())];
            point(coords, types.clone(), p.to_vec(), cfg)
        })
        .collect())
}

/// Densities with heterogeneity `delta`: type 0 gains `delta / 2`, the
/// others share the loss equally.
pub fn densities_for_delta(n_types: usize, delta: &Rational) -> Result<Vec<Rational>> {
    let ns = n_types as i64;
    if ns < 2 {
        return Err(Error::InvalidConfig("delta construction needs at least two types".into()));
    }
    let max = Rational::new(2 * (ns - 1), ns);
    if delta < &Rational::zero() || delta > &max {
        return Err(Error::InvalidConfig(format!("delta {delta} unreachable with {ns} types (max {max})")));
    }
    let base = Rational::new(1, ns);
    let half = delta * &Rational::new(1, 2);
    let mut out = vec![&base + &half];
    let each = &half * &Rational::new(1, ns - 1);
    out.extend((1..ns).map(|_| &base - &each));
    Ok(out)
}

fn delta_points(cfg: &ExperimentConfig) -> Result<Vec<GridPoint>> {
    let table = cfg.type_table();
    let types = unit_types(cfg.order, &table)?;
    cfg.delta_grid()
        .into_iter()
        .map(|d| {
            let dens = densities_for_delta(table.len(), &d)?;
            let echoed = delta_exact(&dens).to_f64();
            let rho1 = dens[0].to_f64();
            Ok(point([Some(echoed), Some(rho1), None], types.clone(), dens, cfg))
        })
        .collect()
}

fn ns_points(cfg: &ExperimentConfig) -> Result<Vec<GridPoint>> {
    cfg.ns_grid()
        .into_iter()
        .map(|ns| {
            let table: Vec<Vec<Rational>> = (1..=ns as i64)
                .map(|v| (0..cfg.order as i64).map(|k| Rational::from_int(v + k * ns as i64)).collect())
                .collect();
            let types = unit_types(cfg.order, &table)?;
            let dens = vec![Rational::new(1, ns as i64); ns];
            Ok(point([Some(ns as f64), Some(1.0 / ns as f64), None], types, dens, cfg))
        })
        .collect()
}

fn linkweight_points(cfg: &ExperimentConfig) -> Result<Vec<GridPoint>> {
    let types = unit_types(1, &cfg.type_table())?;
    let weight = cfg.shared_weight();
    let mut out = Vec::new();
    for k in cfg.mean_degrees() {
        for q in cfg.q_grid() {
            let mut p = point([Some(q.to_f64()), Some(k), None], types.clone(), vec![Rational::one()], cfg);
            p.graph.mean_degree = k;
            p.shared_links = Some((q, weight.clone()));
            out.push(p);
        }
    }
    Ok(out)
}

fn grid_points(cfg: &ExperimentConfig) -> Result<Vec<GridPoint>> {
    match cfg.experiment {
        ExperimentKind::RhoSweep => two_type_points(cfg, false),
        ExperimentKind::OrderSweep => two_type_points(cfg, true),
        ExperimentKind::Simplex3 => simplex_points(cfg),
        ExperimentKind::DeltaSweep => delta_points(cfg),
        ExperimentKind::NsSweep => ns_points(cfg),
        ExperimentKind::LinkweightSweep => linkweight_points(cfg),
    }
}

/// `N_D` for every method at one (grid point, realization).
fn realize(cfg: &ExperimentConfig, methods: &[Method], p: &GridPoint, g: usize, r: usize) -> Result<Vec<(usize, f64)>> {
    let rseed = seeds::realization_seed(cfg.master_seed, g as u64, r as u64);
    let topo_seed = if cfg.pair_topologies {
        seeds::derive(seeds::derive(cfg.master_seed, stream::TOPOLOGY), r as u64)
    } else {
        seeds::derive(rseed, stream::TOPOLOGY)
    };
    let t = netgen::generate(&p.graph.clone().with_seed(topo_seed))?;
    let a = assign_types(
        p.types.clone(),
        p.densities.clone(),
        t.n_nodes,
        seeds::derive(rseed, stream::ASSIGNMENT),
    )?;
    let (shared, weight) = match &p.shared_links {
        Some((q, w)) => {
            let e = t.edges.len() as i64;
            let k = (&(q * &Rational::from_int(e)) + &Rational::new(1, 2)).floor_int();
            let k: usize = k.try_into().unwrap_or(0);
            let mut mask: Vec<bool> = (0..t.edges.len()).map(|i| i < k).collect();
            mask.shuffle(&mut seeds::rng(seeds::derive(rseed, stream::LINKS)));
            (mask, w.clone())
        }
        None => (Vec::new(), Rational::zero()),
    };
    let m = assemble_with_link_weights(&t, &a, &shared, &weight)?;
    let et_opts = EtOptions {
        trials: cfg.rank_trials,
        ..EtOptions::default()
    };
    let ect_opts = EctOptions::default();
    let mut numeric = None;
    methods
        .iter()
        .map(|method| {
            let start = Instant::now();
            let nd = match method {
                Method::Et => nd_et_with(&m, et_opts, seeds::derive(rseed, stream::RANK))?.n_d,
                Method::EctNumeric | Method::EctSymmetric => {
                    let phi = numeric.get_or_insert_with(|| instantiate_real(&m, seeds::derive(rseed, stream::NUMERIC)));
                    if *method == Method::EctNumeric {
                        nd_ect_numeric(phi, &ect_opts)?.n_d
                    } else {
                        nd_ect_symmetric(phi, &ect_opts)?.n_d
                    }
                }
                Method::SctMatching => nd_sct_pattern(&m).n_d,
                Method::Oracle => unreachable!("rejected by config validation"),
            };
            Ok((nd, start.elapsed().as_secs_f64()))
        })
        .collect()
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Runs the sweep described by `cfg`. Rows come out in grid order, then in
/// the order of `cfg.methods`.
pub fn run(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let methods = cfg.active_methods();
    if methods.len() < cfg.methods.len() {
        eprintln!(
            "warning: dense eigensolver methods skipped, dimension {} exceeds the cap",
            cfg.graph.n_nodes * cfg.order
        );
    }
    if methods.is_empty() {
        return Err(Error::InvalidConfig("no method can run at this size".into()));
    }
    let points = grid_points(cfg)?;
    let reps = cfg.realizations;
    let total = points.len() * reps;
    let done = AtomicUsize::new(0);
    let task = |i: usize| {
        let (g, r) = (i / reps, i % reps);
        let out = realize(cfg, &methods, &points[g], g, r);
        if opts.progress {
            let n = done.fetch_add(1, Ordering::Relaxed) + 1;
            if n % reps == 0 || n == total {
                eprintln!("[{}] {n}/{total} realizations", cfg.experiment.as_str());
            }
        }
        out
    };
    let results: Vec<Result<Vec<(usize, f64)>>> = match opts.jobs {
        Some(jobs) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.max(1))
                .build()
                .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
            pool.install(|| (0..total).into_par_iter().map(task).collect())
        }
        None => (0..total).into_par_iter().map(task).collect(),
    };
    let results: Vec<Vec<(usize, f64)>> = results.into_iter().collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(points.len() * methods.len());
    for (g, p) in points.iter().enumerate() {
        let chunk = &results[g * reps..(g + 1) * reps];
        let n = p.graph.n_nodes;
        let dim = (n * cfg.order).max(1);
        for (k, &method) in methods.iter().enumerate() {
            let samples: Vec<usize> = chunk.iter().map(|v| v[k].0).collect();
            let fracs: Vec<f64> = samples.iter().map(|&nd| nd as f64 / dim as f64).collect();
            let (mean, std) = mean_std(&fracs);
            let per_node = samples.iter().map(|&nd| nd as f64 / n.max(1) as f64).sum::<f64>() / reps as f64;
            let seconds = if cfg.record_timing { chunk.iter().map(|v| v[k].1).sum() } else { 0.0 };
            rows.push(SweepRow {
                experiment: cfg.experiment,
                coords: p.coords,
                method,
                mean_nd: mean,
                mean_nd_per_node: per_node,
                std,
                stderr: std / (reps as f64).sqrt(),
                realizations: reps,
                seconds,
                n_d_samples: samples,
            });
        }
    }
    Ok(rows)
}

macro_rules! named_runner {
    ($name:ident, $kind:path) => {
        pub fn $name(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<Vec<SweepRow>> {
            if cfg.experiment != $kind {
                return Err(Error::InvalidConfig(format!(
                    "{} called with a {} config",
                    stringify!($name),
                    cfg.experiment.as_str()
                )));
            }
            run(cfg, opts)
        }
    };
}

named_runner!(run_rho_sweep, ExperimentKind::RhoSweep);
named_runner!(run_simplex3, ExperimentKind::Simplex3);
named_runner!(run_delta_sweep, ExperimentKind::DeltaSweep);
named_runner!(run_ns_sweep, ExperimentKind::NsSweep);
named_runner!(run_order_sweep, ExperimentKind::OrderSweep);
named_runner!(run_linkweight_sweep, ExperimentKind::LinkweightSweep);
