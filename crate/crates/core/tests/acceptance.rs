//! Acceptance suite: one PASS/FAIL line per criterion on standard output,
//! diagnostics on standard error, exit status 1 if any criterion fails.
//! Sweep CSVs are left under the cargo target tmp dir for plotting.

mod common;

use std::path::{Path, PathBuf};
use std::time::Instant;

use ectrl::control::{candidate_eigenvalues, instantiate_real, instantiate_rational, nd_ect_numeric, nd_et, EctOptions};
use ectrl::dynamics::{assemble, assign_types};
use ectrl::experiments::{self, write_csv, ExperimentConfig, ExperimentKind, RunOptions, SweepRow};
use ectrl::netgen::{generate, GraphSpec};
use ectrl::rank::{generic_rank, rank_exact, rank_fp, DEFAULT_REL_TOL};
use ectrl::validation::{oracle_agreement, shift_checks};
use ectrl::{seeds, Rational};
use nalgebra::DMatrix;
use rand::Rng;

use common::{random_system, unit};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn config_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn csv_dir() -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance");
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

/// Runs a shipped config and keeps its CSV.
fn sweep(name: &str) -> Vec<SweepRow> {
    let text = std::fs::read_to_string(config_dir().join(format!("{name}.json"))).unwrap();
    let cfg = ExperimentConfig::from_json(&text).unwrap();
    let rows = experiments::run(&cfg, &RunOptions::default()).unwrap();
    experiments::emit_csv(&rows, &csv_dir().join(format!("{name}.csv"))).unwrap();
    rows
}

/// Mean and standard error of `N_D / dim` from the raw samples. The mean
/// comes from the integer total, so equal totals compare exactly equal.
#[derive(Debug, Clone, Copy)]
struct Stat {
    total: usize,
    mean: f64,
    se: f64,
}

fn stat(row: &SweepRow, dim: usize) -> Stat {
    let r = row.n_d_samples.len();
    let total: usize = row.n_d_samples.iter().sum();
    let mean = total as f64 / (r * dim) as f64;
    let var = row
        .n_d_samples
        .iter()
        .map(|&x| (x as f64 / dim as f64 - mean).powi(2))
        .sum::<f64>()
        / (r as f64 - 1.0);
    Stat {
        total,
        mean,
        se: (var / r as f64).sqrt(),
    }
}

/// `|a - b| <= 2 (se_a + se_b)`; returns the gap as a fraction of the band.
fn within_band(a: Stat, b: Stat) -> (bool, f64) {
    let gap = (a.mean - b.mean).abs();
    let band = 2.0 * (a.se + b.se);
    (gap <= band, if band > 0.0 { gap / band } else if gap == 0.0 { 0.0 } else { f64::INFINITY })
}

fn rho_pairs_symmetric(rows: &[SweepRow], dim: usize, label: &str) -> (bool, String) {
    let n = rows.len();
    let mut worst = 0.0f64;
    let mut ok = true;
    for i in 0..n / 2 + 1 {
        let (a, b) = (&rows[i], &rows[n - 1 - i]);
        let (pass, ratio) = within_band(stat(a, dim), stat(b, dim));
        if !pass {
            eprintln!("  {label}: rho {:?} vs {:?} outside the band ({ratio:.2})", a.coords[0], b.coords[0]);
        }
        ok &= pass;
        worst = worst.max(ratio);
    }
    (ok, format!("{label} worst gap/band {worst:.2}"))
}

fn c1_shift_identity() -> Outcome {
    let report = shift_checks(200, 8, 0xC1).unwrap();
    for f in &report.failures {
        eprintln!("  shift failure: instance {} seed {:#x} N {} w {}", f.instance, f.seed, f.n, f.w);
    }
    outcome(
        report.failures.is_empty(),
        format!("{}/{} instances hold", report.instances - report.failures.len(), report.instances),
    )
}

fn c2_oracle_equivalence() -> Outcome {
    let report = oracle_agreement(200, 8, 0xC2).unwrap();
    for d in &report.disagreements {
        eprintln!(
            "  disagreement: instance {} seed {:#x} dim {} order {}: oracle {} et {} ect {}",
            d.instance, d.seed, d.dim, d.order, d.oracle, d.et, d.ect_numeric
        );
    }
    outcome(
        report.fraction() >= 0.99 && report.by_order.iter().all(|&c| c > 0),
        format!(
            "{}/{} agree ({} first order, {} second order)",
            report.agreed, report.instances, report.by_order[0], report.by_order[1]
        ),
    )
}

fn c3_rho_symmetry() -> Outcome {
    let mut ok = true;
    let mut details = Vec::new();
    for (name, label) in [("rho_sweep_er", "ER k=4"), ("rho_sweep_er_k6", "ER k=6"), ("rho_sweep_sf", "SF g=3")] {
        let rows = sweep(name);
        let (pass, d) = rho_pairs_symmetric(&rows, 500, label);
        ok &= pass && rows.len() == 11;
        details.push(d);
    }
    outcome(ok, details.join(", "))
}

fn c4_simplex() -> Outcome {
    let rows = sweep("simplex3");
    let dim = 300;
    let key = |r: &SweepRow| -> [i64; 3] { [0, 1, 2].map(|i| (r.coords[i].unwrap() * 6.0).round() as i64) };
    let mut ok = true;
    let mut worst = 0.0f64;
    for a in &rows {
        let ka = key(a);
        for b in &rows {
            let mut kb = key(b);
            let mut ka_sorted = ka;
            ka_sorted.sort_unstable();
            kb.sort_unstable();
            if kb == ka_sorted {
                let (pass, ratio) = within_band(stat(a, dim), stat(b, dim));
                if !pass {
                    eprintln!("  simplex: {ka:?}/6 vs {:?}/6 outside the band ({ratio:.2})", key(b));
                }
                ok &= pass;
                worst = worst.max(ratio);
            }
        }
    }
    let center = rows.iter().find(|r| key(r) == [2, 2, 2]).unwrap();
    let c = stat(center, dim);
    let min = rows.iter().map(|r| stat(r, dim).total).min().unwrap();
    let center_min = c.total == min;
    if !center_min {
        eprintln!("  simplex: center total {} above the grid minimum {min}", c.total);
    }
    outcome(
        ok && center_min && rows.len() == 28,
        format!("{} points, worst permutation gap/band {worst:.2}, center n_D {:.5} is the minimum: {center_min}", rows.len(), c.mean),
    )
}

fn c5_delta() -> Outcome {
    let rows = sweep("delta_sweep");
    let dim = 300;
    let s: Vec<Stat> = rows.iter().map(|r| stat(r, dim)).collect();
    let zero_min = s.iter().all(|x| x.total >= s[0].total);
    let mut ok = zero_min && rows.len() == 6 && rows[0].coords[0] == Some(0.0);
    for i in 0..s.len() - 1 {
        let drop = s[i].mean - s[i + 1].mean;
        if drop > 2.0 * (s[i].se + s[i + 1].se) {
            eprintln!("  delta: drop {drop:.5} between points {i} and {}", i + 1);
            ok = false;
        }
    }
    let curve: Vec<String> = s.iter().map(|x| format!("{:.4}", x.mean)).collect();
    outcome(ok, format!("n_D over delta [{}], minimum at 0: {zero_min}", curve.join(", ")))
}

fn c6_ns() -> Outcome {
    let rows = sweep("ns_sweep");
    let dim = 300;
    let s: Vec<Stat> = rows.iter().map(|r| stat(r, dim)).collect();
    let decreasing = s.windows(2).all(|w| w[1].total < w[0].total);
    let last = rows.last().unwrap();
    let all_one = last.coords[0] == Some(300.0) && last.n_d_samples.iter().all(|&x| x == 1);
    let curve: Vec<String> = s.iter().map(|x| format!("{:.4}", x.mean)).collect();
    outcome(
        decreasing && all_one && rows.len() == 6,
        format!("n_D over N_s [{}], strictly decreasing: {decreasing}, N_s=N all N_D=1: {all_one}", curve.join(", ")),
    )
}

fn c7_higher_order() -> Outcome {
    let rows = sweep("order_sweep");
    let (sym, detail) = rho_pairs_symmetric(&rows, 400, "d=2 ER k=4");
    let mut agree = 0;
    let total = 50;
    for i in 0..total {
        let s = seeds::derive(0xC7, i);
        let mut rng = seeds::rng(s);
        let n = rng.gen_range(10..=50);
        let k = rng.gen_range(1.0..6.0);
        let t = generate(&GraphSpec::er(n, k, rng.gen()).directed(rng.gen_bool(0.5))).unwrap();
        let mut pair = [rng.gen_range(-3..=3), rng.gen_range(-3..=3)];
        let mut other = [rng.gen_range(-3..=3), rng.gen_range(-3..=3)];
        pair.sort_unstable();
        other.sort_unstable();
        if pair == other {
            other[1] += 7;
        }
        let rho = Rational::new(rng.gen_range(0..=10), 10);
        let a = assign_types(
            vec![unit(2, &pair), unit(2, &other)],
            vec![rho.clone(), Rational::one() - rho],
            n,
            rng.gen(),
        )
        .unwrap();
        let m = assemble(&t, &a).unwrap();
        let et = nd_et(&m, s).unwrap().n_d;
        let ect = nd_ect_numeric(&instantiate_real(&m, seeds::derive(s, 1)), &EctOptions::default())
            .unwrap()
            .n_d;
        if et == ect {
            agree += 1;
        } else {
            eprintln!("  order 2 instance {i} seed {s:#x}: et {et} ect {ect}");
        }
    }
    outcome(
        sym && agree == total && rows.len() == 11,
        format!("{detail}; ET = ECT_NUMERIC on {agree}/{total} instances"),
    )
}

fn c8_rank_engines() -> Outcome {
    let mut generic_ok = 0;
    for i in 0..100u64 {
        let s = seeds::derive(0xC8, i);
        let m = random_system(s, 20);
        let mut rng = seeds::rng(s);
        let cands = candidate_eigenvalues(&m);
        let lambda = cands[rng.gen_range(0..cands.len())].clone();
        let generic = generic_rank(&m, &lambda, 3, s).unwrap().rank;
        let mut a = instantiate_rational(&m, || Rational::from_int(rng.gen_range(1..=1_000_000)));
        for (r, row) in a.iter_mut().enumerate() {
            row[r] = &row[r] - &lambda;
        }
        let exact = rank_exact(&a).unwrap();
        if generic == exact {
            generic_ok += 1;
        } else {
            eprintln!("  generic rank {generic} vs exact {exact}: seed {s:#x}");
        }
    }
    let mut fp_ok = 0;
    for i in 0..100u64 {
        let mut rng = seeds::rng(seeds::derive(0xC8F, i));
        let n = rng.gen_range(1..=30);
        let r = rng.gen_range(0..=n);
        let u: Vec<Vec<i64>> = (0..n).map(|_| (0..r).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        let v: Vec<Vec<i64>> = (0..r).map(|_| (0..n).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        let prod: Vec<Vec<i64>> = (0..n)
            .map(|a| (0..n).map(|b| (0..r).map(|k| u[a][k] * v[k][b]).sum()).collect())
            .collect();
        let exact = rank_exact(
            &prod.iter().map(|row| row.iter().map(|&x| Rational::from_int(x)).collect()).collect::<Vec<_>>(),
        )
        .unwrap();
        let dense = DMatrix::from_fn(n, n, |a, b| prod[a][b] as f64);
        let fp = rank_fp(&dense, DEFAULT_REL_TOL).unwrap();
        if fp == exact {
            fp_ok += 1;
        } else {
            eprintln!("  numeric rank {fp} vs exact {exact} (n {n}, factor rank {r})");
        }
    }
    outcome(
        generic_ok == 100 && fp_ok == 100,
        format!("generic = exact on {generic_ok}/100, numeric = exact on {fp_ok}/100"),
    )
}

fn c9_performance_and_determinism() -> Outcome {
    let n = 2000;
    let t = generate(&GraphSpec::er(n, 4.0, 0xC9)).unwrap();
    let a = assign_types(
        vec![unit(1, &[0]), unit(1, &[1])],
        vec![Rational::new(1, 2), Rational::new(1, 2)],
        n,
        1,
    )
    .unwrap();
    let m = assemble(&t, &a).unwrap();
    let start = Instant::now();
    let r = generic_rank(&m, &Rational::zero(), 3, 2).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let fast = secs <= 60.0 && r.rank < n;

    let mut identical = true;
    for (kind, graph) in [
        (ExperimentKind::RhoSweep, GraphSpec::er(150, 3.0, 0)),
        (ExperimentKind::Simplex3, GraphSpec::sf(100, 4.0, 3.0, 0)),
    ] {
        let mut cfg = ExperimentConfig::new(kind, graph);
        cfg.realizations = 5;
        cfg.master_seed = 99;
        cfg.methods = vec![ectrl::control::Method::Et, ectrl::control::Method::SctMatching];
        let bytes = |jobs| {
            let rows = experiments::run(&cfg, &RunOptions { jobs: Some(jobs), progress: false }).unwrap();
            let mut buf = Vec::new();
            write_csv(&rows, &mut buf).unwrap();
            buf
        };
        let first = bytes(1);
        for jobs in [2, 4, 1] {
            identical &= bytes(jobs) == first;
        }
    }
    outcome(
        fast && identical,
        format!("dN=2000 generic rank {} in {secs:.2} s (3 trials); CSV identical across --jobs 1/2/4: {identical}", r.rank),
    )
}

fn main() {
    let criteria: [(u8, &str, fn() -> Outcome); 9] = [
        (1, "shift identity", c1_shift_identity),
        (2, "oracle equivalence", c2_oracle_equivalence),
        (3, "density symmetry", c3_rho_symmetry),
        (4, "simplex symmetry and center minimum", c4_simplex),
        (5, "heterogeneity monotonicity", c5_delta),
        (6, "type-count sweep", c6_ns),
        (7, "second-order symmetry and agreement", c7_higher_order),
        (8, "rank-engine soundness", c8_rank_engines),
        (9, "performance and determinism", c9_performance_and_determinism),
    ];
    let filter: Vec<u8> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (id, name, run) in criteria {
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let o = run();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {id} {verdict} {name}: {} [{:.1} s]", o.detail, start.elapsed().as_secs_f64());
        failed += usize::from(!o.pass);
    }
    println!("acceptance CSVs in {}", csv_dir().display());
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
