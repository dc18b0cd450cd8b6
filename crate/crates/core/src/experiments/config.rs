use serde::{Deserialize, Serialize};

use crate::control::{Method, ECT_DIM_CAP};
use crate::error::{Error, Result};
use crate::netgen::GraphSpec;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ExperimentKind {
    RhoSweep,
    Simplex3,
    DeltaSweep,
    NsSweep,
    OrderSweep,
    LinkweightSweep,
}

impl ExperimentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::RhoSweep => "RHO_SWEEP",
            ExperimentKind::Simplex3 => "SIMPLEX3",
            ExperimentKind::DeltaSweep => "DELTA_SWEEP",
            ExperimentKind::NsSweep => "NS_SWEEP",
            ExperimentKind::OrderSweep => "ORDER_SWEEP",
            ExperimentKind::LinkweightSweep => "LINKWEIGHT_SWEEP",
        }
    }
}

/// A type count in an N_s sweep: a number, or `"N"` for one type per node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TypeCount {
    Count(usize),
    AllNodes(AllNodes),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AllNodes {
    N,
}

impl TypeCount {
    pub fn resolve(&self, n_nodes: usize) -> usize {
        match self {
            TypeCount::Count(c) => *c,
            TypeCount::AllNodes(_) => n_nodes,
        }
    }
}

/// Sweep coordinates. Each experiment reads only its own fields; unset
/// fields fall back to the defaults listed in the README.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    /// RHO_SWEEP, ORDER_SWEEP: density of the first type.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<Vec<Rational>>,
    /// SIMPLEX3: lattice spacing, must divide 1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simplex_step: Option<Rational>,
    /// DELTA_SWEEP: target heterogeneities.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<Vec<Rational>>,
    /// NS_SWEEP: numbers of types.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_types: Option<Vec<TypeCount>>,
    /// LINKWEIGHT_SWEEP: fraction of edges sharing one fixed weight.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<Rational>>,
    /// LINKWEIGHT_SWEEP: mean degrees to repeat the q grid at.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_degrees: Option<Vec<f64>>,
    /// LINKWEIGHT_SWEEP: the shared weight.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shared_weight: Option<Rational>,
}

fn default_order() -> usize {
    1
}

fn default_realizations() -> usize {
    30
}

fn default_methods() -> Vec<Method> {
    vec![Method::Et]
}

fn default_true() -> bool {
    true
}

fn default_trials() -> u32 {
    3
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub graph: GraphSpec,
    #[serde(default = "default_order")]
    pub order: usize,
    /// Eigenvalue table, one list of `order` eigenvalues per unit type.
    /// Ignored by NS_SWEEP, which uses `1..N_s`.
    #[serde(default)]
    pub types: Option<Vec<Vec<Rational>>>,
    #[serde(default)]
    pub grid: Grid,
    #[serde(default = "default_realizations")]
    pub realizations: usize,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_methods")]
    pub methods: Vec<Method>,
    /// Reuse realization `r`'s topology at every grid point, so grid points
    /// are compared on the same networks.
    #[serde(default = "default_true")]
    pub pair_topologies: bool,
    /// Fill the `seconds` column with wall time (breaks byte-identical
    /// reruns); otherwise it is written as 0.
    #[serde(default)]
    pub record_timing: bool,
    #[serde(default = "default_trials")]
    pub rank_trials: u32,
}

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| Rational::from_int(x)).collect()
}

impl ExperimentConfig {
    /// Config with every optional field at its default.
    pub fn new(experiment: ExperimentKind, graph: GraphSpec) -> Self {
        ExperimentConfig {
            experiment,
            graph,
            order: 1,
            types: None,
            grid: Grid::default(),
            realizations: default_realizations(),
            master_seed: 0,
            methods: default_methods(),
            pair_topologies: true,
            record_timing: false,
            rank_trials: default_trials(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Methods that will actually run: ECT_NUMERIC and ECT_SYMMETRIC drop
    /// out above the dense eigensolver cap.
    pub fn active_methods(&self) -> Vec<Method> {
        let dim = self.graph.n_nodes * self.order;
        self.methods
            .iter()
            .copied()
            .filter(|m| !matches!(m, Method::EctNumeric | Method::EctSymmetric) || dim <= ECT_DIM_CAP)
            .collect()
    }

    pub fn type_table(&self) -> Vec<Vec<Rational>> {
        if let Some(t) = &self.types {
            return t.clone();
        }
        let d = self.order as i64;
        match self.experiment {
            ExperimentKind::RhoSweep => vec![ints(&[1]), ints(&[0])],
            ExperimentKind::Simplex3 => vec![ints(&[0]), ints(&[1]), ints(&[2])],
            ExperimentKind::DeltaSweep => vec![ints(&[1]), ints(&[2]), ints(&[3])],
            ExperimentKind::NsSweep => Vec::new(),
            ExperimentKind::OrderSweep => (0..2)
                .map(|t| (1..=d).map(|k| Rational::from_int(t * d + k)).collect())
                .collect(),
            ExperimentKind::LinkweightSweep => vec![ints(&[0])],
        }
    }

    pub fn rho_grid(&self) -> Vec<Rational> {
        self.grid
            .rho
            .clone()
            .unwrap_or_else(|| (0..=10).map(|i| Rational::new(i, 10)).collect())
    }

    pub fn simplex_step(&self) -> Rational {
        self.grid.simplex_step.clone().unwrap_or_else(|| Rational::new(1, 6))
    }

    pub fn delta_grid(&self) -> Vec<Rational> {
        self.grid.delta.clone().unwrap_or_else(|| {
            let ns = self.type_table().len().max(2) as i64;
            let max = Rational::new(2 * (ns - 1), ns);
            (0..6).map(|i| &max * &Rational::new(i, 5)).collect()
        })
    }

    pub fn ns_grid(&self) -> Vec<usize> {
        let n = self.graph.n_nodes;
        match &self.grid.n_types {
            Some(v) => v.iter().map(|c| c.resolve(n)).collect(),
            None => vec![1, 2, 3, 5, 10, n],
        }
    }

    pub fn q_grid(&self) -> Vec<Rational> {
        self.grid
            .q
            .clone()
            .unwrap_or_else(|| (0..=10).map(|i| Rational::new(i, 10)).collect())
    }

    pub fn mean_degrees(&self) -> Vec<f64> {
        self.grid.mean_degrees.clone().unwrap_or_else(|| vec![self.graph.mean_degree])
    }

    pub fn shared_weight(&self) -> Rational {
        self.grid.shared_weight.clone().unwrap_or_else(Rational::one)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        self.graph.validate().map_err(|e| Error::InvalidConfig(e.to_string()))?;
        if self.realizations == 0 {
            return bad("realizations must be at least 1".into());
        }
        if self.methods.is_empty() {
            return bad("methods must not be empty".into());
        }
        if self.methods.contains(&Method::Oracle) {
            return bad("ORACLE is not a sweep method".into());
        }
        if self.rank_trials == 0 {
            return bad("rank_trials must be at least 1".into());
        }
        if self.order == 0 {
            return bad("order must be at least 1".into());
        }
        if self.methods.contains(&Method::EctSymmetric) && (self.order != 1 || self.graph.directed) {
            return bad("ECT_SYMMETRIC needs first-order dynamics on an undirected graph".into());
        }
        let types = self.type_table();
        if let Some(t) = types.iter().find(|t| t.len() != self.order) {
            return bad(format!("unit type {t:?} does not have {} eigenvalues", self.order));
        }
        let unit = |r: &Rational| r >= &Rational::zero() && r <= &Rational::one();
        match self.experiment {
            ExperimentKind::RhoSweep | ExperimentKind::OrderSweep => {
                if self.experiment == ExperimentKind::RhoSweep && self.order != 1 {
                    return bad("RHO_SWEEP uses first-order dynamics".into());
                }
                if self.experiment == ExperimentKind::OrderSweep && self.order < 2 {
                    return bad("ORDER_SWEEP needs order >= 2".into());
                }
                if types.len() != 2 {
                    return bad(format!("{} needs exactly two unit types", self.experiment.as_str()));
                }
                let rho = self.rho_grid();
                if rho.is_empty() || !rho.iter().all(unit) {
                    return bad("rho grid must be nonempty and inside [0, 1]".into());
                }
            }
            ExperimentKind::Simplex3 => {
                if self.order != 1 || types.len() != 3 {
                    return bad("SIMPLEX3 needs three first-order unit types".into());
                }
                crate::dynamics::densities_on_simplex(&self.simplex_step())?;
            }
            ExperimentKind::DeltaSweep => {
                let ns = types.len() as i64;
                if ns < 2 {
                    return bad("DELTA_SWEEP needs at least two unit types".into());
                }
                let max = Rational::new(2 * (ns - 1), ns);
                let grid = self.delta_grid();
                if grid.is_empty() {
                    return bad("delta grid is empty".into());
                }
                if let Some(d) = grid.iter().find(|d| *d < &Rational::zero() || *d > &max) {
                    return bad(format!("delta {d} outside [0, {max}]"));
                }
            }
            ExperimentKind::NsSweep => {
                let grid = self.ns_grid();
                if grid.is_empty() {
                    return bad("n_types grid is empty".into());
                }
                if let Some(&c) = grid.iter().find(|&&c| c == 0 || c > self.graph.n_nodes) {
                    return bad(format!("N_s = {c} outside [1, N = {}]", self.graph.n_nodes));
                }
            }
            ExperimentKind::LinkweightSweep => {
                if self.order != 1 || types.len() != 1 {
                    return bad("LINKWEIGHT_SWEEP uses a single first-order unit type".into());
                }
                let q = self.q_grid();
                if q.is_empty() || !q.iter().all(unit) {
                    return bad("q grid must be nonempty and inside [0, 1]".into());
                }
                if self.mean_degrees().is_empty() {
                    return bad("mean_degrees is empty".into());
                }
            }
        }
        Ok(())
    }
}

/// JSON schema for [`ExperimentConfig`], shipped with the crate.
pub const CONFIG_SCHEMA: &str = include_str!("../../schema/experiment_config.schema.json");

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = ExperimentConfig::from_json(
            r#"{"experiment":"RHO_SWEEP","graph":{"model":"ER","n_nodes":50,"mean_degree":4}}"#,
        )
        .unwrap();
        assert_eq!(cfg.realizations, 30);
        assert_eq!(cfg.rho_grid().len(), 11);
        assert_eq!(cfg.methods, vec![Method::Et]);
    }

    #[test]
    fn rejects_bad_configs() {
        let bad = [
            r#"{"experiment":"NOPE","graph":{"model":"ER","n_nodes":50,"mean_degree":4}}"#,
            r#"{"experiment":"RHO_SWEEP","graph":{"model":"ER","n_nodes":50,"mean_degree":4},"realizations":0}"#,
            r#"{"experiment":"RHO_SWEEP","graph":{"model":"ER","n_nodes":50,"mean_degree":4},"methods":[]}"#,
            r#"{"experiment":"RHO_SWEEP","graph":{"model":"ER","n_nodes":50,"mean_degree":4},"bogus":1}"#,
            r#"{"experiment":"DELTA_SWEEP","graph":{"model":"ER","n_nodes":50,"mean_degree":4},"grid":{"delta":[2]}}"#,
            r#"{"experiment":"NS_SWEEP","graph":{"model":"ER","n_nodes":5,"mean_degree":2},"grid":{"n_types":[6]}}"#,
            r#"{"experiment":"ORDER_SWEEP","graph":{"model":"ER","n_nodes":5,"mean_degree":2},"order":1}"#,
            r#"{"experiment":"SIMPLEX3","graph":{"model":"ER","n_nodes":5,"mean_degree":2},"grid":{"simplex_step":"2/5"}}"#,
        ];
        for text in bad {
            assert!(ExperimentConfig::from_json(text).is_err(), "{text}");
        }
    }

    #[test]
    fn n_types_accepts_symbolic_n() {
        let cfg = ExperimentConfig::from_json(
            r#"{"experiment":"NS_SWEEP","graph":{"model":"ER","n_nodes":40,"mean_degree":4},"grid":{"n_types":[1,2,"N"]}}"#,
        )
        .unwrap();
        assert_eq!(cfg.ns_grid(), vec![1, 2, 40]);
    }
}
