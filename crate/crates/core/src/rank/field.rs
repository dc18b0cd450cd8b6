//! Arithmetic and elimination over GF(p), p = 2^31 - 1.

use num::{BigInt, Integer, ToPrimitive};
use rand::Rng;

use super::{RankMethod, RankResult};
use crate::dynamics::{Entry, StateMatrix};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::seeds;

/// The Mersenne prime 2^31 - 1.
pub const P: u32 = 0x7fff_ffff;
const P64: u64 = P as u64;

#[inline]
fn reduce(x: u64) -> u32 {
    // x < 2^62: fold the high bits twice.
    let t = (x & P64) + (x >> 31);
    let t = (t & P64) + (t >> 31);
    (if t >= P64 { t - P64 } else { t }) as u32
}

#[inline]
pub fn mul(a: u32, b: u32) -> u32 {
    reduce(a as u64 * b as u64)
}

#[inline]
pub fn add(a: u32, b: u32) -> u32 {
    let s = a + b;
    if s >= P { s - P } else { s }
}

#[inline]
pub fn sub(a: u32, b: u32) -> u32 {
    if a >= b { a - b } else { a + P - b }
}

pub fn pow(mut base: u32, mut exp: u64) -> u32 {
    let mut acc = 1u32;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(acc, base);
        }
        base = mul(base, base);
        exp >>= 1;
    }
    acc
}

/// Multiplicative inverse; `a` must be nonzero.
pub fn inv(a: u32) -> u32 {
    debug_assert!(a != 0);
    pow(a, P64 - 2)
}

fn residue_of_int(v: &BigInt) -> u32 {
    v.mod_floor(&BigInt::from(P)).to_u32().expect("residue below p")
}

/// Image of a rational in GF(p).
pub fn residue(q: &Rational) -> Result<u32> {
    let den = residue_of_int(q.denom());
    if den == 0 {
        return Err(Error::UnrepresentableConstant(q.to_string()));
    }
    Ok(mul(residue_of_int(q.numer()), inv(den)))
}

/// Dense square matrix of residues, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    pub dim: usize,
    pub data: Vec<u32>,
}

impl FieldMatrix {
    pub fn zeros(dim: usize) -> Self {
        FieldMatrix {
            dim,
            data: vec![0; dim * dim],
        }
    }

    pub fn from_rows(rows: &[Vec<u32>]) -> Self {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            assert_eq!(row.len(), dim, "FieldMatrix must be square");
            data.extend(row.iter().map(|&v| v % P));
        }
        FieldMatrix { dim, data }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.dim + c]
    }

    /// Whitespace-separated residues, one row per line.
    pub fn dump(&self) -> String {
        self.data
            .chunks(self.dim.max(1))
            .map(|row| row.iter().map(u32::to_string).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Substitutes i.i.d. uniform nonzero residues for the free parameters
/// (shared ids share a value), maps constants exactly, then subtracts
/// `shift` on the diagonal.
pub fn instantiate(m: &StateMatrix, shift: &Rational, seed: u64) -> Result<FieldMatrix> {
    let mut rng = seeds::rng(seed);
    let params: Vec<u32> = (0..m.n_params()).map(|_| rng.gen_range(1..P)).collect();
    let n = m.dim();
    let mut fm = FieldMatrix::zeros(n);
    for (r, c, e) in &m.entries {
        fm.data[r * n + c] = match e {
            Entry::Free(id) => params[*id as usize],
            Entry::Const(v) => residue(v)?,
        };
    }
    let s = residue(shift)?;
    if s != 0 {
        for i in 0..n {
            let d = &mut fm.data[i * n + i];
            *d = sub(*d, s);
        }
    }
    Ok(fm)
}

/// Exact rank over GF(p) by Gaussian elimination with row pivoting.
pub fn rank_ff(fm: &FieldMatrix) -> usize {
    let mut a = fm.data.clone();
    eliminate(&mut a, fm.dim, fm.dim)
}

/// Row-reduces a `rows x cols` row-major buffer in place and returns its rank.
pub(crate) fn eliminate(a: &mut [u32], rows: usize, cols: usize) -> usize {
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| a[r * cols + col] != 0) else {
            continue;
        };
        if piv != rank {
            for k in col..cols {
                a.swap(piv * cols + k, rank * cols + k);
            }
        }
        let pinv = inv(a[rank * cols + col]);
        let (head, tail) = a.split_at_mut((rank + 1) * cols);
        let prow = &head[rank * cols + col..rank * cols + cols];
        for row in tail.chunks_exact_mut(cols) {
            let lead = row[col];
            if lead == 0 {
                continue;
            }
            let f = P - mul(lead, pinv);
            for (x, &p) in row[col..].iter_mut().zip(prow) {
                // x + f * p < 2^31 + 2^62.
                *x = reduce(*x as u64 + f as u64 * p as u64);
            }
        }
        rank += 1;
    }
    rank
}

/// Generic rank of `m - shift I`: the maximum of [`rank_ff`] over `trials`
/// independent substitutions. Trial `t` draws from `derive(seed, t)`.
pub fn generic_rank(m: &StateMatrix, shift: &Rational, trials: u32, seed: u64) -> Result<RankResult> {
    if trials == 0 {
        return Err(Error::ContractViolation("generic_rank needs at least one trial".into()));
    }
    let dim = m.dim();
    let mut best = 0;
    for t in 0..trials {
        let fm = instantiate(m, shift, seeds::derive(seed, t as u64))?;
        best = best.max(rank_ff(&fm));
        if best == dim {
            break;
        }
    }
    Ok(RankResult {
        rank: best,
        method: RankMethod::FfGeneric,
        trials,
        failure_bound: (dim as f64 / P as f64).powi(trials as i32),
    })
}
