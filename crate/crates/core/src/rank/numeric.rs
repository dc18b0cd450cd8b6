//! Floating-point rank from singular values.

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};

pub const DEFAULT_REL_TOL: f64 = 1e-10;

fn count_above(singular: impl Iterator<Item = f64> + Clone, max_dim: usize, rel_tol: f64) -> usize {
    let smax = singular.clone().fold(0.0_f64, f64::max);
    if smax == 0.0 {
        return 0;
    }
    let tol = rel_tol * smax * max_dim as f64;
    singular.filter(|&s| s > tol).count()
}

/// Number of singular values above `rel_tol * sigma_max * max(rows, cols)`.
pub fn rank_fp(m: &DMatrix<f64>, rel_tol: f64) -> Result<usize> {
    if m.is_empty() {
        return Ok(0);
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::NumericFailure("non-finite matrix entry".into()));
    }
    let sv = m
        .clone()
        .try_svd(false, false, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::NumericFailure("SVD did not converge".into()))?
        .singular_values;
    Ok(count_above(sv.iter().copied(), m.nrows().max(m.ncols()), rel_tol))
}

pub fn rank_fp_complex(m: &DMatrix<Complex<f64>>, rel_tol: f64) -> Result<usize> {
    if m.is_empty() {
        return Ok(0);
    }
    let sv = m
        .clone()
        .try_svd(false, false, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::NumericFailure("SVD did not converge".into()))?
        .singular_values;
    Ok(count_above(sv.iter().copied(), m.nrows().max(m.ncols()), rel_tol))
}
