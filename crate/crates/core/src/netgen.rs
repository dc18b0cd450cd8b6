//! Random network topologies: Erdős–Rényi and static-model scale-free
//! graphs, plus the plain-text edge-list format.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seeds;

/// Wiring diagram of the network. Edges are `(source, target)`; for
/// undirected graphs each pair is stored once with `source < target`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Topology {
    pub n_nodes: usize,
    pub directed: bool,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum GraphModel {
    Er,
    Sf,
}

fn default_gamma() -> f64 {
    3.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    pub model: GraphModel,
    pub n_nodes: usize,
    /// Average total degree.
    pub mean_degree: f64,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default)]
    pub directed: bool,
    #[serde(default)]
    pub seed: u64,
}

impl GraphSpec {
    pub fn er(n_nodes: usize, mean_degree: f64, seed: u64) -> Self {
        GraphSpec {
            model: GraphModel::Er,
            n_nodes,
            mean_degree,
            gamma: default_gamma(),
            directed: false,
            seed,
        }
    }

    pub fn sf(n_nodes: usize, mean_degree: f64, gamma: f64, seed: u64) -> Self {
        GraphSpec {
            model: GraphModel::Sf,
            gamma,
            ..GraphSpec::er(n_nodes, mean_degree, seed)
        }
    }

    pub fn directed(mut self, directed: bool) -> Self {
        self.directed = directed;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_nodes == 0 {
            return Err(Error::InvalidSpec("n_nodes must be positive".into()));
        }
        if !self.mean_degree.is_finite() || self.mean_degree < 0.0 {
            return Err(Error::InvalidSpec(format!(
                "mean_degree must be a finite nonnegative number, got {}",
                self.mean_degree
            )));
        }
        if self.model == GraphModel::Sf && !(self.gamma > 2.0) {
            return Err(Error::InvalidSpec(format!(
                "scale-free gamma must exceed 2, got {}",
                self.gamma
            )));
        }
        Ok(())
    }
}

pub fn generate(spec: &GraphSpec) -> Result<Topology> {
    match spec.model {
        GraphModel::Er => generate_er(spec),
        GraphModel::Sf => generate_sf(spec),
    }
}

/// G(N, p) with `p = <k>/(N-1)` per unordered pair, or `<k>/(2(N-1))` per
/// ordered pair when directed, so the mean total degree is `<k>` either way.
pub fn generate_er(spec: &GraphSpec) -> Result<Topology> {
    spec.validate()?;
    let n = spec.n_nodes;
    let mut edges = Vec::new();
    if n < 2 || spec.mean_degree == 0.0 {
        return Ok(Topology {
            n_nodes: n,
            directed: spec.directed,
            edges,
        });
    }
    let denom = if spec.directed { 2.0 } else { 1.0 } * (n - 1) as f64;
    let p = spec.mean_degree / denom;
    if p > 1.0 {
        return Err(Error::InvalidSpec(format!(
            "mean degree {} needs edge probability {p} > 1",
            spec.mean_degree
        )));
    }
    let mut rng = seeds::rng(spec.seed);
    for i in 0..n {
        let js: Box<dyn Iterator<Item = usize>> = if spec.directed {
            Box::new((0..n).filter(move |&j| j != i))
        } else {
            Box::new(i + 1..n)
        };
        for j in js {
            if rng.gen::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    Ok(Topology {
        n_nodes: n,
        directed: spec.directed,
        edges,
    })
}

/// Samples drawn per target edge before the static model gives up.
pub const SF_ATTEMPTS_PER_EDGE: u64 = 20;

/// Static model: node `i` has fitness `(i+1)^(-1/(gamma-1))`; node pairs are
/// drawn with probability proportional to the product of fitnesses until
/// `floor(N <k> / 2)` distinct edges exist. Gives up with
/// [`Error::GenerationStalled`] after `SF_ATTEMPTS_PER_EDGE * target + 1000`
/// draws.
pub fn generate_sf(spec: &GraphSpec) -> Result<Topology> {
    spec.validate()?;
    let n = spec.n_nodes;
    let target = (n as f64 * spec.mean_degree / 2.0).floor() as usize;
    let max_pairs = if spec.directed {
        n * (n - 1)
    } else {
        n * (n - 1) / 2
    };
    if target > max_pairs {
        return Err(Error::InvalidSpec(format!(
            "{target} edges requested but only {max_pairs} node pairs exist"
        )));
    }
    let mut edges = Vec::with_capacity(target);
    if target == 0 {
        return Ok(Topology {
            n_nodes: n,
            directed: spec.directed,
            edges,
        });
    }
    let alpha = 1.0 / (spec.gamma - 1.0);
    let weights: Vec<f64> = (0..n).map(|i| ((i + 1) as f64).powf(-alpha)).collect();
    let dist = WeightedIndex::new(&weights).expect("fitness weights are positive");
    let mut rng = seeds::rng(spec.seed);
    let mut seen = HashSet::with_capacity(target * 2);
    let cap = SF_ATTEMPTS_PER_EDGE * target as u64 + 1000;
    let mut attempts = 0u64;
    while edges.len() < target {
        if attempts >= cap {
            return Err(Error::GenerationStalled {
                attempts,
                placed: edges.len(),
                target,
            });
        }
        attempts += 1;
        let a = dist.sample(&mut rng);
        let b = dist.sample(&mut rng);
        if a == b {
            continue;
        }
        let pair = if spec.directed { (a, b) } else { (a.min(b), a.max(b)) };
        if seen.insert(pair) {
            edges.push(pair);
        }
    }
    Ok(Topology {
        n_nodes: n,
        directed: spec.directed,
        edges,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeStats {
    pub mean: f64,
    pub min: usize,
    pub max: usize,
    pub isolated: usize,
}

impl Topology {
    pub fn empty(n_nodes: usize, directed: bool) -> Self {
        Topology {
            n_nodes,
            directed,
            edges: Vec::new(),
        }
    }

    /// Builds a topology after checking the structural invariants.
    pub fn from_edges(n_nodes: usize, directed: bool, edges: Vec<(usize, usize)>) -> Result<Self> {
        let t = Topology {
            n_nodes,
            directed,
            edges,
        };
        t.check()?;
        Ok(t)
    }

    pub fn check(&self) -> Result<()> {
        let mut seen = HashSet::with_capacity(self.edges.len());
        for &(s, d) in &self.edges {
            if s >= self.n_nodes || d >= self.n_nodes {
                return Err(Error::InvalidSpec(format!(
                    "edge ({s}, {d}) out of range for {} nodes",
                    self.n_nodes
                )));
            }
            if s == d {
                return Err(Error::InvalidSpec(format!("self pair ({s}, {s})")));
            }
            let key = if self.directed { (s, d) } else { (s.min(d), s.max(d)) };
            if !seen.insert(key) {
                return Err(Error::InvalidSpec(format!("duplicate edge ({s}, {d})")));
            }
        }
        Ok(())
    }

    /// Total degree (in + out) of every node.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n_nodes];
        for &(s, d) in &self.edges {
            deg[s] += 1;
            deg[d] += 1;
        }
        deg
    }

    pub fn degree_stats(&self) -> DegreeStats {
        let deg = self.degrees();
        let n = self.n_nodes.max(1);
        DegreeStats {
            mean: 2.0 * self.edges.len() as f64 / n as f64,
            min: deg.iter().copied().min().unwrap_or(0),
            max: deg.iter().copied().max().unwrap_or(0),
            isolated: deg.iter().filter(|&&k| k == 0).count(),
        }
    }

    /// Directed arcs `(source, target)`; undirected edges expand to both
    /// orientations.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        if self.directed {
            self.edges.clone()
        } else {
            self.edges.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect()
        }
    }

    /// Relabels nodes: node `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Topology {
        let edges = self
            .edges
            .iter()
            .map(|&(s, d)| {
                let (s, d) = (perm[s], perm[d]);
                if self.directed { (s, d) } else { (s.min(d), s.max(d)) }
            })
            .collect();
        Topology {
            n_nodes: self.n_nodes,
            directed: self.directed,
            edges,
        }
    }

    /// Edge-list text: `N <n> directed <0|1>` then one `src dst` per line.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(16 + self.edges.len() * 12);
        writeln!(out, "N {} directed {}", self.n_nodes, u8::from(self.directed)).unwrap();
        for &(s, d) in &self.edges {
            writeln!(out, "{s} {d}").unwrap();
        }
        out
    }

    pub fn parse_edge_list(text: &str) -> Result<Topology> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty edge list".into()))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        let (n, directed) = match parts.as_slice() {
            ["N", n, "directed", flag] => {
                let n: usize = n
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad node count in header {header:?}")))?;
                let directed = match *flag {
                    "0" => false,
                    "1" => true,
                    _ => return Err(Error::Parse(format!("bad directed flag in header {header:?}"))),
                };
                (n, directed)
            }
            _ => return Err(Error::Parse(format!("bad edge-list header {header:?}"))),
        };
        let mut edges = Vec::new();
        for (lineno, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let mut it = line.split_whitespace().map(str::parse::<usize>);
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(s)), Some(Ok(d)), None) => edges.push((s, d)),
                _ => {
                    return Err(Error::Parse(format!(
                        "line {}: expected `src dst`, got {line:?}",
                        lineno + 2
                    )))
                }
            }
        }
        Topology::from_edges(n, directed, edges)
    }

    pub fn read(path: &Path) -> Result<Topology> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Topology::parse_edge_list(&text)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_edge_list()).map_err(|e| Error::io(path, e))
    }
}

/// Directed path `0 -> 1 -> ... -> n-1`.
pub fn directed_chain(n: usize) -> Topology {
    Topology {
        n_nodes: n,
        directed: true,
        edges: (1..n).map(|i| (i - 1, i)).collect(),
    }
}

/// Directed star with node 0 pointing at every leaf.
pub fn directed_star(leaves: usize) -> Topology {
    Topology {
        n_nodes: leaves + 1,
        directed: true,
        edges: (1..=leaves).map(|i| (0, i)).collect(),
    }
}
