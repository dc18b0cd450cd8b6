//! Driver-node counts.
//!
//! | method | route |
//! |---|---|
//! | [`nd_et`] | min generic rank of `Phi - lambda I` over candidate constants |
//! | [`nd_ect_numeric`] | max geometric multiplicity of a numeric instantiation |
//! | [`nd_ect_symmetric`] | max eigenvalue degeneracy of a symmetric instantiation |
//! | [`nd_sct_matching`] | `N` minus a maximum matching (structural baseline) |
//! | [`nd_oracle`] | smallest `M` passing Kalman's rank test with exact arithmetic |

mod ect;
mod et;
mod oracle;
mod sct;

use serde::{Deserialize, Serialize};

use crate::rational::Rational;

pub use ect::{balance, eigenvalues, instantiate_real, nd_ect_numeric, nd_ect_symmetric, EctOptions, ECT_DIM_CAP, ECT_RANK_REL_TOL};
pub use et::{candidate_eigenvalues, nd_et, nd_et_with, nd_et_with_candidates, EtOptions};
pub use oracle::{
    instantiate_rational, kalman_rank, kalman_shift_check, nd_oracle, random_b, ORACLE_CAP,
};
pub use sct::{hopcroft_karp, nd_sct_matching, nd_sct_pattern};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Method {
    Et,
    EctNumeric,
    EctSymmetric,
    SctMatching,
    Oracle,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Et => "ET",
            Method::EctNumeric => "ECT_NUMERIC",
            Method::EctSymmetric => "ECT_SYMMETRIC",
            Method::SctMatching => "SCT_MATCHING",
            Method::Oracle => "ORACLE",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().replace('-', "_").as_str() {
            "ET" => Ok(Method::Et),
            "ECT" | "ECT_NUMERIC" => Ok(Method::EctNumeric),
            "ECT_SYM" | "ECT_SYMMETRIC" => Ok(Method::EctSymmetric),
            "SCT" | "SCT_MATCHING" => Ok(Method::SctMatching),
            "ORACLE" => Ok(Method::Oracle),
            _ => Err(crate::Error::InvalidConfig(format!("unknown method {s:?}"))),
        }
    }
}

/// Eigenvalue at which the driver count is attained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Eigenvalue {
    Exact(Rational),
    Real(f64),
    Complex { re: f64, im: f64 },
}

/// Rank of `Phi - lambda I` at one ET candidate. `rank` is `None` when the
/// candidate was skipped because its deficiency bound could not beat the
/// best one found.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateRank {
    pub eigenvalue: Rational,
    pub rank: Option<usize>,
    pub deficiency_bound: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriverResult {
    pub n_d: usize,
    /// `N_D / (dN)`.
    pub n_d_frac: f64,
    /// `N_D / N`.
    pub n_d_per_node: f64,
    pub dim: usize,
    pub n_nodes: usize,
    pub method: Method,
    pub achieving_eigenvalue: Option<Eigenvalue>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub candidate_ranks: Vec<CandidateRank>,
}

impl DriverResult {
    pub(crate) fn new(n_d: usize, dim: usize, n_nodes: usize, method: Method) -> Self {
        let n_d = n_d.max(1);
        DriverResult {
            n_d,
            n_d_frac: n_d as f64 / dim.max(1) as f64,
            n_d_per_node: n_d as f64 / n_nodes.max(1) as f64,
            dim,
            n_nodes,
            method,
            achieving_eigenvalue: None,
            candidate_ranks: Vec::new(),
        }
    }

    /// Restates the per-node fraction for a network of `n_nodes` units. The
    /// dense eigen routes see only the state matrix, so they report one node
    /// per state variable.
    pub fn with_nodes(mut self, n_nodes: usize) -> Self {
        self.n_nodes = n_nodes;
        self.n_d_per_node = self.n_d as f64 / n_nodes.max(1) as f64;
        self
    }
}
