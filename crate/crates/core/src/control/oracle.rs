//! Brute-force driver counts from Kalman's rank condition in exact
//! arithmetic. Intended for matrices of dimension at most [`ORACLE_CAP`].

use num::{BigInt, Integer, One, Zero};
use rand::Rng;

use super::{DriverResult, Method};
use crate::dynamics::{Entry, StateMatrix};
use crate::error::{Error, Result};
use crate::rank::exact::bareiss_rank;
use crate::rational::Rational;
use crate::seeds;

pub const ORACLE_CAP: usize = 12;

/// Independent `B` draws tried for each input count.
const B_DRAWS: u64 = 3;
const B_RANGE: i64 = 1000;

fn check_cap(dim: usize) -> Result<()> {
    if dim > ORACLE_CAP {
        return Err(Error::OracleTooLarge { dim, cap: ORACLE_CAP });
    }
    Ok(())
}

/// Dense rational instantiation with free parameters drawn from `draw`.
pub fn instantiate_rational(m: &StateMatrix, mut draw: impl FnMut() -> Rational) -> Vec<Vec<Rational>> {
    let params: Vec<Rational> = (0..m.n_params()).map(|_| draw()).collect();
    let n = m.dim();
    let flat = m.fill_dense(Rational::zero(), |e| match e {
        Entry::Free(id) => params[*id as usize].clone(),
        Entry::Const(v) => v.clone(),
    });
    flat.chunks(n.max(1)).map(<[Rational]>::to_vec).collect()
}

/// Dense `rows x cols` integer matrix with entries in `[-B_RANGE, B_RANGE]`.
pub fn random_b(rows: usize, cols: usize, seed: u64) -> Vec<Vec<Rational>> {
    let mut rng = seeds::rng(seed);
    (0..rows)
        .map(|_| (0..cols).map(|_| Rational::from_int(rng.gen_range(-B_RANGE..=B_RANGE))).collect())
        .collect()
}

fn to_scaled_ints(m: &[Vec<Rational>]) -> Vec<Vec<BigInt>> {
    let l = m.iter().flatten().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    m.iter()
        .map(|row| row.iter().map(|q| q.numer() * (&l / q.denom())).collect())
        .collect()
}

/// `rank [B, A B, ..., A^(n-1) B]`, exact. `A` and `B` are scaled to
/// integers first; scaling `A` by `L` scales block `k` by `L^k`, which
/// leaves the rank unchanged.
pub fn kalman_rank(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Result<usize> {
    let n = a.len();
    check_cap(n)?;
    if b.len() != n {
        return Err(Error::ContractViolation(format!("B has {} rows, A has {n}", b.len())));
    }
    let m = b.first().map_or(0, Vec::len);
    if n == 0 || m == 0 {
        return Ok(0);
    }
    let ai = to_scaled_ints(a);
    let mut block = to_scaled_ints(b);
    // Rows of the controllability matrix, filled block by block.
    let mut k: Vec<Vec<BigInt>> = vec![Vec::with_capacity(n * m); n];
    for step in 0..n {
        for (r, row) in block.iter().enumerate() {
            k[r].extend(row.iter().cloned());
        }
        if step + 1 < n {
            block = (0..n)
                .map(|r| {
                    (0..m)
                        .map(|c| {
                            let mut acc = BigInt::zero();
                            for (j, arj) in ai[r].iter().enumerate() {
                                if !arj.is_zero() {
                                    acc += arj * &block[j][c];
                                }
                            }
                            acc
                        })
                        .collect()
                })
                .collect();
        }
    }
    Ok(bareiss_rank(&mut k))
}

/// Smallest number of independent inputs making a random exact
/// instantiation of `m` controllable. Coupling weights are integers in
/// `[1, 10^6]`; each candidate input count tries three dense random `B`.
pub fn nd_oracle(m: &StateMatrix, seed: u64) -> Result<DriverResult> {
    let dim = m.dim();
    check_cap(dim)?;
    let mut rng = seeds::rng(seed);
    let phi = instantiate_rational(m, || Rational::from_int(rng.gen_range(1..=1_000_000)));
    let mut found = dim.max(1);
    'search: for inputs in 1..=dim {
        for draw in 0..B_DRAWS {
            let b = random_b(dim, inputs, seeds::derive(seed, (inputs as u64) << 8 | draw));
            if kalman_rank(&phi, &b)? == dim {
                found = inputs;
                break 'search;
            }
        }
    }
    Ok(DriverResult::new(found, dim, m.n_nodes, Method::Oracle))
}

/// Checks that adding `w I` leaves the controllability-matrix rank
/// unchanged on a random rational instantiation of the coupling-only,
/// first-order matrix `m`.
pub fn kalman_shift_check(m: &StateMatrix, b: &[Vec<Rational>], w: &Rational, seed: u64) -> Result<bool> {
    check_cap(m.dim())?;
    if m.order != 1 {
        return Err(Error::ContractViolation("shift check needs first-order dynamics".into()));
    }
    if m.entries.iter().any(|(r, c, e)| r == c && matches!(e, Entry::Const(v) if !v.is_zero())) {
        return Err(Error::ContractViolation("shift check needs a matrix without self-dynamics".into()));
    }
    let mut rng = seeds::rng(seed);
    let a = instantiate_rational(m, || Rational::new(rng.gen_range(-1000..=1000), rng.gen_range(1..=100)));
    let mut shifted = a.clone();
    for (i, row) in shifted.iter_mut().enumerate() {
        row[i] = &row[i] + w;
    }
    Ok(kalman_rank(&a, b)? == kalman_rank(&shifted, b)?)
}
