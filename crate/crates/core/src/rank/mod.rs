//! Three independent routes to a matrix rank:
//!
//! * [`field`]: generic rank of a mixed matrix by random substitution over
//!   GF(2^31 - 1) followed by exact elimination;
//! * [`numeric`]: SVD rank of a real or complex matrix with a relative
//!   tolerance;
//! * [`exact`]: fraction-free elimination over the integers, used as an
//!   oracle on small rational matrices.

pub mod exact;
pub mod field;
pub mod numeric;

use serde::{Deserialize, Serialize};

pub use exact::{rank_exact, EXACT_RANK_CAP};
pub use field::{generic_rank, instantiate, rank_ff, FieldMatrix, P};
pub use numeric::{rank_fp, rank_fp_complex, DEFAULT_REL_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RankMethod {
    FfGeneric,
    FpSvd,
    ExactRational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankResult {
    pub rank: usize,
    pub method: RankMethod,
    pub trials: u32,
    /// Upper bound on the probability that `rank` undershoots the generic
    /// rank (zero for the deterministic methods).
    pub failure_bound: f64,
}
