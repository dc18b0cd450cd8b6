use std::collections::VecDeque;

use super::{DriverResult, Method};
use crate::dynamics::{Entry, StateMatrix};
use crate::netgen::Topology;

/// Maximum matching size in the bipartite graph with `n_left` left and
/// `n_right` right vertices; `adj[u]` lists the right neighbours of `u`.
pub fn hopcroft_karp(n_left: usize, n_right: usize, adj: &[Vec<usize>]) -> usize {
    const INF: usize = usize::MAX;
    let mut match_l = vec![INF; n_left];
    let mut match_r = vec![INF; n_right];
    let mut dist = vec![0usize; n_left];
    let mut size = 0;
    loop {
        // Layer the free left vertices.
        let mut queue = VecDeque::new();
        for u in 0..n_left {
            if match_l[u] == INF {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = INF;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = match_r[v];
                if w == INF {
                    found = true;
                } else if dist[w] == INF {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            return size;
        }
        // Vertex-disjoint shortest augmenting paths, iterative DFS.
        let mut it = vec![0usize; n_left];
        for root in 0..n_left {
            if match_l[root] != INF {
                continue;
            }
            let mut stack = vec![root];
            while let Some(&u) = stack.last() {
                if it[u] == adj[u].len() {
                    dist[u] = INF;
                    stack.pop();
                    continue;
                }
                let v = adj[u][it[u]];
                it[u] += 1;
                let w = match_r[v];
                if w == INF {
                    // Flip the path root .. u, v.
                    let mut v = v;
                    while let Some(u) = stack.pop() {
                        let prev = match_l[u];
                        match_l[u] = v;
                        match_r[v] = u;
                        v = prev;
                    }
                    size += 1;
                    break;
                } else if dist[w] != INF && dist[w] == dist[u] + 1 {
                    stack.push(w);
                }
            }
        }
    }
}

fn driver_count(n: usize, arcs: impl Iterator<Item = (usize, usize)>) -> usize {
    let mut adj = vec![Vec::new(); n];
    for (src, dst) in arcs {
        adj[src].push(dst);
    }
    for a in &mut adj {
        a.sort_unstable();
        a.dedup();
    }
    n.saturating_sub(hopcroft_karp(n, n, &adj))
}

/// Structural driver count `max(1, N - |maximum matching|)`. `self_loops[i]`
/// marks nodes with a nonzero first-order self-dynamic, which are matchable
/// to themselves.
pub fn nd_sct_matching(t: &Topology, self_loops: &[bool]) -> DriverResult {
    let n = t.n_nodes;
    let loops = (0..n).filter(|&i| self_loops.get(i).copied().unwrap_or(false)).map(|i| (i, i));
    let nd = driver_count(n, t.arcs().into_iter().chain(loops));
    DriverResult::new(nd, n, n, Method::SctMatching)
}

/// Structural driver count of the full nonzero pattern of a state matrix,
/// treating every nonzero entry as an independent parameter.
pub fn nd_sct_pattern(m: &StateMatrix) -> DriverResult {
    let n = m.dim();
    let arcs = m.entries.iter().filter_map(|(r, c, e)| match e {
        Entry::Const(v) if v.is_zero() => None,
        // Entry (r, c) means state c drives state r.
        _ => Some((*c, *r)),
    });
    DriverResult::new(driver_count(n, arcs), n, m.n_nodes, Method::SctMatching)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netgen::{directed_chain, generate, GraphSpec};
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(nd_sct_matching(&directed_chain(5), &[]).n_d, 1);
        assert_eq!(nd_sct_matching(&Topology::empty(5, true), &[]).n_d, 5);
        let t = generate(&GraphSpec::er(50, 3.0, 1).directed(true)).unwrap();
        assert_eq!(nd_sct_matching(&t, &[true; 50]).n_d, 1);
    }

    /// Augmenting-path matching, one DFS per left vertex.
    fn kuhn(n_left: usize, n_right: usize, adj: &[Vec<usize>]) -> usize {
        fn try_kuhn(u: usize, adj: &[Vec<usize>], seen: &mut [bool], mr: &mut [usize]) -> bool {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    if mr[v] == usize::MAX || try_kuhn(mr[v], adj, seen, mr) {
                        mr[v] = u;
                        return true;
                    }
                }
            }
            false
        }
        let mut mr = vec![usize::MAX; n_right];
        (0..n_left).filter(|&u| try_kuhn(u, adj, &mut vec![false; n_right], &mut mr)).count()
    }

    proptest! {
        #[test]
        fn hopcroft_karp_matches_simple_augmenting(
            nl in 1usize..25, nr in 1usize..25,
            edges in prop::collection::vec((0usize..25, 0usize..25), 0..80),
        ) {
            let mut adj = vec![Vec::new(); nl];
            for (u, v) in edges {
                if u < nl && v < nr { adj[u].push(v); }
            }
            prop_assert_eq!(hopcroft_karp(nl, nr, &adj), kuhn(nl, nr, &adj));
        }
    }
}
