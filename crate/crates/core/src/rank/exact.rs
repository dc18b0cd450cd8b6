//! Exact rank over the rationals by fraction-free (Bareiss) elimination.

use num::{BigInt, Integer, One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Largest `min(rows, cols)` accepted by [`rank_exact`].
pub const EXACT_RANK_CAP: usize = 64;

/// Rank of a rational matrix given as rows. Each row is scaled by the lcm of
/// its denominators, then reduced with Bareiss' exact-division update.
///
/// Rejects matrices whose smaller dimension exceeds [`EXACT_RANK_CAP`].
pub fn rank_exact(rows: &[Vec<Rational>]) -> Result<usize> {
    rank_exact_capped(rows, EXACT_RANK_CAP)
}

pub fn rank_exact_capped(rows: &[Vec<Rational>], cap: usize) -> Result<usize> {
    let n_rows = rows.len();
    let n_cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != n_cols) {
        return Err(Error::ContractViolation("ragged matrix".into()));
    }
    let small = n_rows.min(n_cols);
    if small > cap {
        return Err(Error::OracleTooLarge { dim: small, cap });
    }
    let ints: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            row.iter().map(|q| q.numer() * (&l / q.denom())).collect()
        })
        .collect();
    // Work on the orientation with fewer rows.
    let mut m = if n_rows <= n_cols { ints } else { transpose(&ints) };
    Ok(bareiss_rank(&mut m))
}

fn transpose(m: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|c| m.iter().map(|row| row[c].clone()).collect()).collect()
}

/// In-place fraction-free row echelon reduction; returns the rank.
pub fn bareiss_rank(m: &mut [Vec<BigInt>]) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let (head, tail) = m.split_at_mut(rank + 1);
        let prow = &head[rank];
        let pivot = &prow[col];
        for row in tail.iter_mut() {
            let lead = std::mem::take(&mut row[col]);
            for k in col + 1..cols {
                let v = pivot * &row[k] - &lead * &prow[k];
                row[k] = v / &prev;
            }
        }
        prev = pivot.clone();
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Rational {
        Rational::from_int(v)
    }

    #[test]
    fn examples() {
        assert_eq!(rank_exact(&[vec![q(1), q(2)], vec![q(2), q(4)]]).unwrap(), 1);
        let hilbert: Vec<Vec<Rational>> = (0..4)
            .map(|i| (0..4).map(|j| Rational::new(1, i + j + 1)).collect())
            .collect();
        assert_eq!(rank_exact(&hilbert).unwrap(), 4);
        assert_eq!(rank_exact(&vec![vec![q(0); 3]; 3]).unwrap(), 0);
        assert_eq!(rank_exact(&[]).unwrap(), 0);
    }

    #[test]
    fn rectangular_and_skipped_columns() {
        let m = vec![
            vec![q(0), q(1), q(2), q(3)],
            vec![q(0), q(2), q(4), q(7)],
            vec![q(0), q(3), q(6), q(10)],
        ];
        assert_eq!(rank_exact(&m).unwrap(), 2);
        let t: Vec<Vec<Rational>> = (0..4).map(|c| m.iter().map(|r| r[c].clone()).collect()).collect();
        assert_eq!(rank_exact(&t).unwrap(), 2);
    }

    #[test]
    fn cap_is_enforced() {
        let big = vec![vec![q(1); 65]; 65];
        assert!(matches!(rank_exact(&big), Err(Error::OracleTooLarge { dim: 65, cap: 64 })));
        // Wide matrices only count their short side.
        assert_eq!(rank_exact(&vec![vec![q(1); 200]; 3]).unwrap(), 1);
    }
}
