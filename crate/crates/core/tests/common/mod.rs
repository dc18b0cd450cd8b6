//! Instance builders shared by the integration tests.
#![allow(dead_code)]

use ectrl::dynamics::{assemble, assign_types, make_unit_type, Assignment, Entry, StateMatrix, UnitType};
use ectrl::netgen::{generate, GraphSpec, Topology};
use ectrl::{seeds, Rational};
use rand::Rng;

pub fn q(v: i64) -> Rational {
    Rational::from_int(v)
}

pub fn unit(order: usize, eigs: &[i64]) -> UnitType {
    make_unit_type(order, eigs.iter().map(|&e| q(e)).collect()).unwrap()
}

/// First-order system with one eigenvalue per type.
pub fn first_order(t: &Topology, eigs: &[i64], node_type: Vec<usize>) -> StateMatrix {
    let types = eigs.iter().map(|&e| unit(1, &[e])).collect();
    assemble(t, &Assignment::explicit(types, node_type).unwrap()).unwrap()
}

/// A random mixed matrix with `dim <= max_dim`: order 1 or 2, ER topology of
/// random direction and density, one to three distinct integer unit types.
pub fn random_system(seed: u64, max_dim: usize) -> StateMatrix {
    let mut rng = seeds::rng(seed);
    let order = rng.gen_range(1..=2usize);
    let n = rng.gen_range(1..=(max_dim / order).max(1));
    let directed = rng.gen_bool(0.5);
    let k = if n > 1 { rng.gen_range(0.0..(n - 1).min(6) as f64) } else { 0.0 };
    let t = generate(&GraphSpec::er(n, k, rng.gen()).directed(directed)).unwrap();
    let n_types = rng.gen_range(1..=3usize);
    let mut spectra: Vec<Vec<i64>> = Vec::new();
    while spectra.len() < n_types {
        let mut s: Vec<i64> = (0..order).map(|_| rng.gen_range(-2..=3)).collect();
        s.sort_unstable();
        if !spectra.contains(&s) {
            spectra.push(s);
        }
    }
    let types = spectra.iter().map(|s| unit(order, s)).collect();
    let node_type = (0..n).map(|_| rng.gen_range(0..n_types)).collect();
    assemble(&t, &Assignment::explicit(types, node_type).unwrap()).unwrap()
}

/// `m + c I`, with the unit types left as they were (so the matrix no
/// longer matches its own block structure and must not be pruned).
pub fn shifted(m: &StateMatrix, c: &Rational) -> StateMatrix {
    let mut out = m.clone();
    let mut seen = vec![false; m.dim()];
    for (r, col, e) in out.entries.iter_mut() {
        if r == col {
            seen[*r] = true;
            match e {
                Entry::Const(v) => *v = &*v + c,
                Entry::Free(_) => panic!("free diagonal entry"),
            }
        }
    }
    for (i, s) in seen.into_iter().enumerate() {
        if !s {
            out.entries.push((i, i, Entry::Const(c.clone())));
        }
    }
    out
}

/// Random ER network with types assigned by density.
pub fn er_system(n: usize, k: f64, types: Vec<UnitType>, densities: Vec<Rational>, seed: u64) -> StateMatrix {
    let t = generate(&GraphSpec::er(n, k, seeds::derive(seed, 1))).unwrap();
    let a = assign_types(types, densities, n, seeds::derive(seed, 2)).unwrap();
    assemble(&t, &a).unwrap()
}
