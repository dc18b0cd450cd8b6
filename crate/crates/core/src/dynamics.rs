//! Individual dynamics of the nodes and assembly of the unified state
//! matrix.
//!
//! A node with `d`-th order dynamics `x^(d) = a_0 x + a_1 x' + ... +
//! a_{d-1} x^(d-1)` occupies a `d x d` companion block on the diagonal of
//! the `dN x dN` state matrix. Couplings between nodes are free parameters
//! placed off the blocks.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netgen::Topology;
use crate::rational::Rational;
use crate::seeds;

/// One species of individual dynamics, defined by its block spectrum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitType {
    pub order: usize,
    pub eigenvalues: Vec<Rational>,
    /// Companion coefficients `a_0 .. a_{d-1}`.
    pub coefficients: Vec<Rational>,
    pub type_id: usize,
}

/// Derives the companion coefficients from the block eigenvalues.
///
/// `prod_j (x - l_j) = x^d + c_{d-1} x^{d-1} + ... + c_0` and `a_k = -c_k`.
pub fn make_unit_type(order: usize, eigenvalues: Vec<Rational>) -> Result<UnitType> {
    if order == 0 {
        return Err(Error::InvalidAssignment("unit order must be at least 1".into()));
    }
    if eigenvalues.len() != order {
        return Err(Error::InvalidAssignment(format!(
            "order {order} unit needs {order} eigenvalues, got {}",
            eigenvalues.len()
        )));
    }
    // poly[k] is the coefficient of x^k, monic.
    let mut poly = vec![Rational::one()];
    for lambda in &eigenvalues {
        let mut next = vec![Rational::zero(); poly.len() + 1];
        for (k, c) in poly.iter().enumerate() {
            next[k + 1] = &next[k + 1] + c;
            next[k] = &next[k] - &(c * lambda);
        }
        poly = next;
    }
    let coefficients = poly[..order].iter().map(|c| -c.clone()).collect();
    Ok(UnitType {
        order,
        eigenvalues,
        coefficients,
        type_id: 0,
    })
}

impl UnitType {
    pub fn with_id(mut self, type_id: usize) -> Self {
        self.type_id = type_id;
        self
    }

    /// Row-major companion block: ones on the superdiagonal, coefficients
    /// on the bottom row.
    pub fn companion_block(&self) -> Vec<Vec<Rational>> {
        let d = self.order;
        let mut block = vec![vec![Rational::zero(); d]; d];
        for r in 0..d - 1 {
            block[r][r + 1] = Rational::one();
        }
        block[d - 1].clone_from(&self.coefficients);
        block
    }

    /// Eigenvalues as a sorted multiset; two types are distinct iff these differ.
    pub fn spectrum_key(&self) -> Vec<Rational> {
        let mut key = self.eigenvalues.clone();
        key.sort();
        key
    }

    pub fn has_eigenvalue(&self, lambda: &Rational) -> bool {
        self.eigenvalues.contains(lambda)
    }
}

/// Maps every node to a unit type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub types: Vec<UnitType>,
    pub densities: Vec<Rational>,
    pub node_type: Vec<usize>,
    pub seed: u64,
}

impl Assignment {
    pub fn order(&self) -> usize {
        self.types.first().map_or(1, |t| t.order)
    }

    pub fn n_nodes(&self) -> usize {
        self.node_type.len()
    }

    pub fn counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.types.len()];
        for &t in &self.node_type {
            counts[t] += 1;
        }
        counts
    }

    /// Same assignment with the eigenvalue sets of types `i` and `j`
    /// swapped; the node-to-slot map is untouched.
    pub fn with_types_swapped(&self, i: usize, j: usize) -> Assignment {
        let mut out = self.clone();
        let (ti, tj) = (self.types[i].clone(), self.types[j].clone());
        out.types[i] = UnitType { type_id: ti.type_id, ..tj };
        out.types[j] = UnitType { type_id: tj.type_id, ..ti };
        out
    }

    /// Explicit per-node assignment (densities are the empirical fractions).
    pub fn explicit(types: Vec<UnitType>, node_type: Vec<usize>) -> Result<Assignment> {
        check_types(&types)?;
        if let Some(&bad) = node_type.iter().find(|&&t| t >= types.len()) {
            return Err(Error::InvalidAssignment(format!("type index {bad} out of range")));
        }
        let n = node_type.len().max(1) as i64;
        let mut counts = vec![0i64; types.len()];
        for &t in &node_type {
            counts[t] += 1;
        }
        let densities = counts.iter().map(|&c| Rational::new(c, n)).collect();
        Ok(Assignment {
            types,
            densities,
            node_type,
            seed: 0,
        })
    }
}

fn check_types(types: &[UnitType]) -> Result<()> {
    let Some(first) = types.first() else {
        return Err(Error::InvalidAssignment("at least one unit type is required".into()));
    };
    if let Some(t) = types.iter().find(|t| t.order != first.order) {
        return Err(Error::InvalidAssignment(format!(
            "mixed orders {} and {} in one system",
            first.order, t.order
        )));
    }
    let mut keys = BTreeSet::new();
    for t in types {
        if !keys.insert(t.spectrum_key()) {
            return Err(Error::InvalidAssignment(format!(
                "two unit types share the eigenvalue multiset {:?}",
                t.spectrum_key()
            )));
        }
    }
    Ok(())
}

/// Largest-remainder apportionment of `n` nodes; ties go to the lower index.
pub fn largest_remainder_counts(densities: &[Rational], n: usize) -> Vec<usize> {
    let total = Rational::from_int(n as i64);
    let quotas: Vec<Rational> = densities.iter().map(|d| d * &total).collect();
    let mut counts: Vec<usize> = quotas
        .iter()
        .map(|q| q.floor_int().try_into().unwrap_or(0))
        .collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..densities.len()).collect();
    order.sort_by(|&a, &b| quotas[b].fract().cmp(&quotas[a].fract()).then(a.cmp(&b)));
    for &i in order.iter().take(n.saturating_sub(assigned)) {
        counts[i] += 1;
    }
    counts
}

fn check_densities(densities: &[Rational]) -> Result<()> {
    if densities.iter().any(|d| d < &Rational::zero() || d > &Rational::one()) {
        return Err(Error::InvalidAssignment(format!("densities {densities:?} outside [0, 1]")));
    }
    let sum: Rational = densities.iter().cloned().sum();
    if sum != Rational::one() {
        return Err(Error::InvalidAssignment(format!("densities sum to {sum}, not 1")));
    }
    Ok(())
}

/// Distributes `types` over `n` nodes: counts by largest remainder, then a
/// seeded uniform shuffle.
pub fn assign_types(
    types: Vec<UnitType>,
    densities: Vec<Rational>,
    n: usize,
    seed: u64,
) -> Result<Assignment> {
    check_types(&types)?;
    if densities.len() != types.len() {
        return Err(Error::InvalidAssignment(format!(
            "{} densities for {} types",
            densities.len(),
            types.len()
        )));
    }
    check_densities(&densities)?;
    let counts = largest_remainder_counts(&densities, n);
    let mut node_type: Vec<usize> = counts
        .iter()
        .enumerate()
        .flat_map(|(t, &c)| std::iter::repeat(t).take(c))
        .collect();
    node_type.shuffle(&mut seeds::rng(seed));
    let types = types.into_iter().enumerate().map(|(i, t)| t.with_id(i)).collect();
    Ok(Assignment {
        types,
        densities,
        node_type,
        seed,
    })
}

/// Density heterogeneity `sum_i |rho_i - 1/N_s|`, exact.
pub fn delta_exact(densities: &[Rational]) -> Rational {
    let ns = Rational::new(1, densities.len().max(1) as i64);
    densities.iter().map(|d| (d - &ns).abs()).sum()
}

pub fn delta(a: &Assignment) -> f64 {
    delta_exact(&a.densities).to_f64()
}

/// All density triples on the simplex lattice with spacing `step`.
/// Ordered by first coordinate descending, then second descending.
pub fn densities_on_simplex(step: &Rational) -> Result<Vec<[Rational; 3]>> {
    if step <= &Rational::zero() {
        return Err(Error::InvalidConfig("grid step must be positive".into()));
    }
    let inv = Rational::one() / step.clone();
    if inv.denom() != &num::BigInt::from(1) {
        return Err(Error::InvalidConfig(format!("grid step {step} does not divide 1")));
    }
    let m: i64 = inv
        .numer()
        .try_into()
        .map_err(|_| Error::InvalidConfig("grid step too small".into()))?;
    let mut out = Vec::with_capacity(((m + 1) * (m + 2) / 2) as usize);
    for i in (0..=m).rev() {
        for j in (0..=m - i).rev() {
            out.push([Rational::new(i, m), Rational::new(j, m), Rational::new(m - i - j, m)]);
        }
    }
    Ok(out)
}

/// One entry of the mixed state matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Entry {
    Free(u32),
    Const(Rational),
}

/// The `dN x dN` mixed matrix. Entries are stored sparsely; positions not
/// listed are structural zeros. Every `(row, col)` appears at most once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateMatrix {
    pub n_nodes: usize,
    pub order: usize,
    pub entries: Vec<(usize, usize, Entry)>,
    /// Edge `(source, target)` behind each free parameter id.
    pub param_edges: Vec<(usize, usize)>,
    pub types: Vec<UnitType>,
    pub node_type: Vec<usize>,
    /// Constants beyond the unit-type eigenvalues at which the matrix can
    /// lose rank generically (shared link weights).
    pub extra_candidates: Vec<Rational>,
}

/// Where the coupling `source -> target` lands: the source's 0th-order state
/// drives the target's highest-order equation.
#[inline]
pub fn coupling_position(order: usize, source: usize, target: usize) -> (usize, usize) {
    (order * target + order - 1, order * source)
}

impl StateMatrix {
    pub fn dim(&self) -> usize {
        self.n_nodes * self.order
    }

    pub fn n_params(&self) -> usize {
        self.param_edges.len()
    }

    /// True when some off-block entry is a fixed constant.
    pub fn has_const_couplings(&self) -> bool {
        let d = self.order;
        self.entries
            .iter()
            .any(|(r, c, e)| matches!(e, Entry::Const(_)) && r / d != c / d)
    }

    /// Dense row-major fill, mapping each stored entry through `f`.
    pub fn fill_dense<T: Clone>(&self, zero: T, mut f: impl FnMut(&Entry) -> T) -> Vec<T> {
        let n = self.dim();
        let mut out = vec![zero; n * n];
        for (r, c, e) in &self.entries {
            out[r * n + c] = f(e);
        }
        out
    }

    /// Sparse-triplet dump, one `row col P<id>|C<num>/<den>` per line.
    pub fn to_triplets(&self) -> String {
        let mut out = String::new();
        for (r, c, e) in &self.entries {
            match e {
                Entry::Free(id) => writeln!(out, "{r} {c} P{id}").unwrap(),
                Entry::Const(v) => writeln!(out, "{r} {c} C{}/{}", v.numer(), v.denom()).unwrap(),
            }
        }
        out
    }

    /// Multiplicity with which each constant eigenvalue occurs among the
    /// node blocks: an upper bound on the generic rank deficiency of
    /// `Phi - lambda I` whenever all couplings are free.
    pub fn block_multiplicity(&self, lambda: &Rational) -> usize {
        let per_type: Vec<bool> = self.types.iter().map(|t| t.has_eigenvalue(lambda)).collect();
        self.node_type.iter().filter(|&&t| per_type[t]).count()
    }
}

fn push_blocks(a: &Assignment, entries: &mut Vec<(usize, usize, Entry)>) {
    let d = a.order();
    for (v, &t) in a.node_type.iter().enumerate() {
        let base = v * d;
        let block = a.types[t].companion_block();
        for (r, row) in block.into_iter().enumerate() {
            for (c, val) in row.into_iter().enumerate() {
                if !val.is_zero() {
                    entries.push((base + r, base + c, Entry::Const(val)));
                }
            }
        }
    }
}

/// Unified state matrix of topology `t` with node dynamics `a`.
pub fn assemble(t: &Topology, a: &Assignment) -> Result<StateMatrix> {
    assemble_with_link_weights(t, a, &[], &Rational::zero())
}

/// Like [`assemble`], but every edge `e` with `shared[e] == true` carries the
/// fixed weight `weight` instead of a free parameter.
pub fn assemble_with_link_weights(
    t: &Topology,
    a: &Assignment,
    shared: &[bool],
    weight: &Rational,
) -> Result<StateMatrix> {
    check_types(&a.types)?;
    if a.node_type.len() != t.n_nodes {
        return Err(Error::InvalidAssignment(format!(
            "assignment covers {} nodes, topology has {}",
            a.node_type.len(),
            t.n_nodes
        )));
    }
    let d = a.order();
    let mut entries = Vec::with_capacity(t.n_nodes * (2 * d - 1) + 2 * t.edges.len());
    push_blocks(a, &mut entries);
    let mut param_edges = Vec::with_capacity(t.edges.len());
    let mut extra_candidates = Vec::new();
    for (e, &(s, g)) in t.edges.iter().enumerate() {
        let entry = if shared.get(e).copied().unwrap_or(false) {
            Entry::Const(weight.clone())
        } else {
            let id = param_edges.len() as u32;
            param_edges.push((s, g));
            Entry::Free(id)
        };
        let (r, c) = coupling_position(d, s, g);
        entries.push((r, c, entry.clone()));
        if !t.directed {
            let (r, c) = coupling_position(d, g, s);
            entries.push((r, c, entry));
        }
    }
    if shared.iter().any(|&s| s) {
        extra_candidates.push(weight.clone());
    }
    Ok(StateMatrix {
        n_nodes: t.n_nodes,
        order: d,
        entries,
        param_edges,
        types: a.types.clone(),
        node_type: a.node_type.clone(),
        extra_candidates,
    })
}
