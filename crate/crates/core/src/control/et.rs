use std::collections::BTreeSet;

use super::{CandidateRank, DriverResult, Eigenvalue, Method};
use crate::dynamics::StateMatrix;
use crate::error::Result;
use crate::rank::generic_rank;
use crate::rational::Rational;
use crate::seeds;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EtOptions {
    pub trials: u32,
    /// Skip candidates whose block-multiplicity bound cannot beat the best
    /// deficiency found so far. Only applied when every coupling is free.
    pub prune: bool,
}

impl Default for EtOptions {
    fn default() -> Self {
        EtOptions {
            trials: 3,
            prune: true,
        }
    }
}

/// `{0}` plus every unit-type eigenvalue plus any extra constants carried by
/// the matrix, deduplicated and sorted.
pub fn candidate_eigenvalues(m: &StateMatrix) -> Vec<Rational> {
    let mut set = BTreeSet::new();
    set.insert(Rational::zero());
    for t in &m.types {
        set.extend(t.eigenvalues.iter().cloned());
    }
    set.extend(m.extra_candidates.iter().cloned());
    set.into_iter().collect()
}

pub fn nd_et(m: &StateMatrix, seed: u64) -> Result<DriverResult> {
    nd_et_with(m, EtOptions::default(), seed)
}

pub fn nd_et_with(m: &StateMatrix, opts: EtOptions, seed: u64) -> Result<DriverResult> {
    nd_et_with_candidates(m, &candidate_eigenvalues(m), opts, seed)
}

/// `N_D = max(1, dN - min_lambda rank(Phi - lambda I))` over `candidates`.
/// Ties in the minimum rank go to the candidate carried by the most unit
/// blocks, then to the smallest one. Candidate `i` of
/// the sorted, deduplicated list uses rank seed `derive(seed, i)` whether or
/// not others are pruned.
pub fn nd_et_with_candidates(
    m: &StateMatrix,
    candidates: &[Rational],
    opts: EtOptions,
    seed: u64,
) -> Result<DriverResult> {
    let candidates: Vec<Rational> = candidates.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let dim = m.dim();
    let prune = opts.prune && !m.has_const_couplings();
    let bounds: Vec<Option<usize>> = candidates
        .iter()
        .map(|l| prune.then(|| m.block_multiplicity(l)))
        .collect();

    // Most promising candidates first so the bound can cut the rest.
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(bounds[i].unwrap_or(usize::MAX)));

    let mut ranks: Vec<Option<usize>> = vec![None; candidates.len()];
    // Preference key: deficiency, then bound (the most populated block
    // wins ties), then the smaller candidate.
    let key = |deficiency: usize, i: usize| (deficiency, bounds[i].unwrap_or(0), std::cmp::Reverse(i));
    let mut best: Option<(usize, usize)> = None;
    for &i in &order {
        if let (Some(bound), Some((best_def, best_i))) = (bounds[i], best) {
            // A bound of 1 cannot lift N_D above its floor of 1 either.
            if key(bound, i) < key(best_def, best_i) || bound <= 1 {
                continue;
            }
        }
        let deficiency = match bounds[i] {
            // No block carries this value, so nothing can drop rank.
            Some(0) => {
                ranks[i] = Some(dim);
                0
            }
            _ => {
                let r = generic_rank(m, &candidates[i], opts.trials, seeds::derive(seed, i as u64))?;
                ranks[i] = Some(r.rank);
                dim - r.rank
            }
        };
        if best.is_none_or(|(bd, bi)| key(deficiency, i) > key(bd, bi)) {
            best = Some((deficiency, i));
        }
    }

    let (deficiency, arg) = best.unwrap_or((0, 0));
    let mut res = DriverResult::new(deficiency, dim, m.n_nodes, Method::Et);
    res.achieving_eigenvalue = candidates.get(arg).cloned().map(Eigenvalue::Exact);
    res.candidate_ranks = candidates
        .into_iter()
        .zip(ranks)
        .zip(bounds)
        .map(|((eigenvalue, rank), deficiency_bound)| CandidateRank {
            eigenvalue,
            rank,
            deficiency_bound,
        })
        .collect();
    Ok(res)
}
