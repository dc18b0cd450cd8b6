//! Randomized cross-checks between the driver-count routes, shared by the
//! `oracle` subcommand and the test suites. Every instance is rebuilt from
//! its own seed, so a reported failure can be replayed in isolation.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::control::{
    instantiate_real, kalman_shift_check, nd_ect_numeric, nd_et, nd_oracle, random_b, EctOptions, ORACLE_CAP,
};
use crate::dynamics::{assemble, make_unit_type, Assignment, StateMatrix};
use crate::error::{Error, Result};
use crate::netgen::{self, GraphSpec};
use crate::rational::Rational;
use crate::seeds;

/// Largest `dN` in the oracle-agreement ensemble.
pub const AGREEMENT_MAX_DIM: usize = 10;

/// Agreement fraction the ensemble must reach. The shortfall allowed is for
/// random substitutions that land on a nongeneric point.
pub const AGREEMENT_PASS_FRACTION: f64 = 0.99;

const EIGENVALUE_POOL: [i64; 5] = [-1, 0, 1, 2, 3];

/// A random small system: `d` in {1, 2}, `dN <= min(2 max_n, 10)`, random
/// directedness and density, one to three unit types drawn from a small
/// integer eigenvalue pool (repeated eigenvalues within a unit allowed).
pub fn random_instance(seed: u64, max_n: usize) -> Result<StateMatrix> {
    let mut rng = seeds::rng(seed);
    let order = rng.gen_range(1..=2usize);
    let n_max = (AGREEMENT_MAX_DIM / order).min(max_n).max(1);
    let n = rng.gen_range(1..=n_max);
    let directed = rng.gen_bool(0.5);
    let density: f64 = rng.gen_range(0.0..0.6);
    let k = if n > 1 {
        density * (n - 1) as f64 * if directed { 2.0 } else { 1.0 }
    } else {
        0.0
    };
    let t = netgen::generate(&GraphSpec::er(n, k, rng.gen()).directed(directed))?;

    let mut spectra: Vec<Vec<i64>> = Vec::new();
    let n_types = rng.gen_range(1..=3usize);
    while spectra.len() < n_types {
        let mut s: Vec<i64> = (0..order).map(|_| *EIGENVALUE_POOL.choose(&mut rng).unwrap()).collect();
        s.sort_unstable();
        if !spectra.contains(&s) {
            spectra.push(s);
        }
    }
    let types = spectra
        .iter()
        .enumerate()
        .map(|(i, s)| Ok(make_unit_type(order, s.iter().map(|&v| Rational::from_int(v)).collect())?.with_id(i)))
        .collect::<Result<Vec<_>>>()?;
    let node_type = (0..n).map(|_| rng.gen_range(0..n_types)).collect();
    assemble(&t, &Assignment::explicit(types, node_type)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct Disagreement {
    pub instance: usize,
    pub seed: u64,
    pub dim: usize,
    pub order: usize,
    pub oracle: usize,
    pub et: usize,
    pub ect_numeric: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct AgreementReport {
    pub instances: usize,
    pub agreed: usize,
    pub by_order: [usize; 2],
    pub disagreements: Vec<Disagreement>,
}

impl AgreementReport {
    pub fn fraction(&self) -> f64 {
        self.agreed as f64 / self.instances.max(1) as f64
    }

    pub fn passed(&self) -> bool {
        self.fraction() >= AGREEMENT_PASS_FRACTION
    }
}

fn check_suite_args(instances: usize, max_n: usize) -> Result<()> {
    if instances == 0 {
        return Err(Error::InvalidConfig("instances must be at least 1".into()));
    }
    if max_n == 0 || max_n > ORACLE_CAP {
        return Err(Error::OracleTooLarge {
            dim: max_n,
            cap: ORACLE_CAP,
        });
    }
    Ok(())
}

/// Instance `i` uses seed `derive(seed, i)`.
pub fn oracle_agreement(instances: usize, max_n: usize, seed: u64) -> Result<AgreementReport> {
    check_suite_args(instances, max_n)?;
    let mut report = AgreementReport {
        instances,
        agreed: 0,
        by_order: [0, 0],
        disagreements: Vec::new(),
    };
    for i in 0..instances {
        let s = seeds::derive(seed, i as u64);
        let m = random_instance(s, max_n)?;
        report.by_order[m.order - 1] += 1;
        let oracle = nd_oracle(&m, seeds::derive(s, 1))?.n_d;
        let et = nd_et(&m, seeds::derive(s, 2))?.n_d;
        let phi = instantiate_real(&m, seeds::derive(s, 3));
        let ect = nd_ect_numeric(&phi, &EctOptions::default())?.n_d;
        if oracle == et && et == ect {
            report.agreed += 1;
        } else {
            report.disagreements.push(Disagreement {
                instance: i,
                seed: s,
                dim: m.dim(),
                order: m.order,
                oracle,
                et,
                ect_numeric: ect,
            });
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct ShiftFailure {
    pub instance: usize,
    pub seed: u64,
    pub n: usize,
    pub w: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ShiftReport {
    pub instances: usize,
    pub failures: Vec<ShiftFailure>,
}

/// Coupling-only first-order systems with `N <= max_n`, random rational
/// shift `w` and a random integer `B` with 1..=N columns.
pub fn shift_checks(instances: usize, max_n: usize, seed: u64) -> Result<ShiftReport> {
    check_suite_args(instances, max_n)?;
    let mut failures = Vec::new();
    for i in 0..instances {
        let s = seeds::derive(seed, i as u64);
        let mut rng = seeds::rng(s);
        let n = rng.gen_range(1..=max_n);
        let directed = rng.gen_bool(0.5);
        let k = if n > 1 { rng.gen_range(0.0..0.7) * (n - 1) as f64 } else { 0.0 };
        let t = netgen::generate(&GraphSpec::er(n, k, rng.gen()).directed(directed))?;
        let zero = make_unit_type(1, vec![Rational::zero()])?;
        let m = assemble(&t, &Assignment::explicit(vec![zero], vec![0; n])?)?;
        let inputs = rng.gen_range(1..=n);
        let b = random_b(n, inputs, rng.gen());
        let w = Rational::new(rng.gen_range(-50..=50), rng.gen_range(1..=7));
        if !kalman_shift_check(&m, &b, &w, rng.gen())? {
            failures.push(ShiftFailure {
                instance: i,
                seed: s,
                n,
                w: w.to_string(),
            });
        }
    }
    Ok(ShiftReport { instances, failures })
}
