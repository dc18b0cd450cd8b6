use nalgebra::{Complex, DMatrix};
use rand::Rng;

use super::{DriverResult, Eigenvalue, Method};
use crate::dynamics::{Entry, StateMatrix};
use crate::error::{Error, Result};
use crate::rank::{rank_fp, rank_fp_complex};
use crate::seeds;

/// Largest matrix accepted by the dense eigensolver paths.
pub const ECT_DIM_CAP: usize = 500;

/// Singular-value cutoff relative to `sigma_max * dim`. Tighter than the
/// general default so that a distinct eigenvalue a few 1e-8 away from a
/// multiple one is not counted with it.
pub const ECT_RANK_REL_TOL: f64 = 1e-12;

/// Cluster members probed individually, besides the cluster mean.
const MEMBER_PROBES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EctOptions {
    /// Eigenvalues closer than `cluster_tol * max(1, spectral radius)` are
    /// treated as one.
    pub cluster_tol: f64,
    /// Relative singular-value cutoff for the rank of `lambda I - Phi`.
    pub rank_rel_tol: f64,
    /// Isolated eigenvalues with a neighbour within
    /// `neighbor_tol * max(1, spectral radius)` get their own rank test;
    /// defective eigenvalues split by roundoff land here.
    pub neighbor_tol: f64,
    pub max_dim: usize,
}

impl Default for EctOptions {
    fn default() -> Self {
        EctOptions {
            cluster_tol: 1e-6,
            rank_rel_tol: ECT_RANK_REL_TOL,
            neighbor_tol: 1e-3,
            max_dim: ECT_DIM_CAP,
        }
    }
}

/// Real instantiation of `m`: each free parameter gets an independent value
/// of magnitude in `[0.5, 1.5)` with random sign.
pub fn instantiate_real(m: &StateMatrix, seed: u64) -> DMatrix<f64> {
    let mut rng = seeds::rng(seed);
    let params: Vec<f64> = (0..m.n_params())
        .map(|_| {
            let v: f64 = rng.gen_range(0.5..1.5);
            if rng.gen::<bool>() { v } else { -v }
        })
        .collect();
    let n = m.dim();
    let data = m.fill_dense(0.0, |e| match e {
        Entry::Free(id) => params[*id as usize],
        Entry::Const(v) => v.to_f64(),
    });
    DMatrix::from_row_slice(n, n, &data)
}

fn check_square(phi: &DMatrix<f64>, opts: &EctOptions) -> Result<usize> {
    let n = phi.nrows();
    if phi.ncols() != n {
        return Err(Error::ContractViolation(format!("{}x{} matrix is not square", n, phi.ncols())));
    }
    if n > opts.max_dim {
        return Err(Error::OracleTooLarge { dim: n, cap: opts.max_dim });
    }
    if phi.iter().any(|v| !v.is_finite()) {
        return Err(Error::NumericFailure("non-finite matrix entry".into()));
    }
    Ok(n)
}

/// Groups eigenvalues by single linkage at distance `tol`; returns clusters
/// as index lists in order of their first member.
fn cluster(eigs: &[Complex<f64>], tol: f64) -> Vec<Vec<usize>> {
    let n = eigs.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for i in 0..n {
        for j in i + 1..n {
            if (eigs[i] - eigs[j]).norm() <= tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[b.max(a)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    groups
}

fn geometric_multiplicity(phi: &DMatrix<f64>, lambda: Complex<f64>, real_tol: f64, opts: &EctOptions) -> Result<usize> {
    let n = phi.nrows();
    let rank = if lambda.im.abs() <= real_tol {
        let shifted = DMatrix::identity(n, n) * lambda.re - phi;
        rank_fp(&shifted, opts.rank_rel_tol)?
    } else {
        let shifted = DMatrix::from_fn(n, n, |r, c| {
            let diag = if r == c { lambda } else { Complex::new(0.0, 0.0) };
            diag - Complex::new(phi[(r, c)], 0.0)
        });
        rank_fp_complex(&shifted, opts.rank_rel_tol)?
    };
    Ok(n - rank)
}

/// Diagonal offsets tried when the QR iteration stalls. Stalls happen on
/// matrices whose eigenvalues share one modulus (a directed cycle is the
/// classic case); an irrational offset separates the moduli.
const SCHUR_SHIFTS: [f64; 4] = [0.0, 0.707_106_781, -1.324_717_957, 2.236_067_977];

/// Random orthogonal similarities tried after the shifts, for stalls that
/// come from the Hessenberg structure rather than the spectrum.
const SCHUR_ROTATIONS: u64 = 2;

/// Deflation thresholds in units of machine epsilon. Highly degenerate
/// spectra can leave subdiagonals hovering just above the tightest one.
const SCHUR_EPS_SCALES: [f64; 3] = [1.0, 4.0, 64.0];

/// All eigenvalues of a dense real matrix via the real Schur form.
pub fn eigenvalues(phi: &DMatrix<f64>) -> Result<Vec<Complex<f64>>> {
    let n = phi.nrows();
    let norm = phi.iter().fold(0.0_f64, |a, v| a.max(v.abs())).max(1.0);
    let mut candidates = vec![phi.clone()];
    for r in 0..SCHUR_ROTATIONS {
        let mut rng = seeds::rng(seeds::derive(0x5C4E_0000, r));
        let q = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0)).qr().q();
        candidates.push(q.transpose() * phi * &q);
    }
    for scale in SCHUR_EPS_SCALES {
        for m in &candidates {
            for c in SCHUR_SHIFTS {
                let shifted = m + DMatrix::identity(n, n) * (c * norm);
                if let Some(schur) = shifted.try_schur(f64::EPSILON * scale, 10_000) {
                    return Ok(schur.complex_eigenvalues().iter().map(|z| z - c * norm).collect());
                }
            }
        }
    }
    Err(Error::NumericFailure("Schur decomposition did not converge".into()))
}

/// Parlett-Reinsch balancing: a diagonal similarity by powers of two that
/// roughly equalizes row and column norms. Companion blocks of higher-order
/// units have coefficients far larger than their ones, and balancing them
/// first sharpens both the eigenvalues and the rank gaps. The scaling is
/// exact in floating point and leaves every multiplicity unchanged.
pub fn balance(phi: &DMatrix<f64>) -> DMatrix<f64> {
    const RADIX: f64 = 2.0;
    let n = phi.nrows();
    let mut a = phi.clone();
    let mut converged = false;
    while !converged {
        converged = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= RADIX * RADIX;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= RADIX * RADIX;
            }
            if (c + r) / f < 0.95 * s {
                converged = false;
                for j in 0..n {
                    a[(i, j)] /= f;
                    a[(j, i)] *= f;
                }
            }
        }
    }
    a
}

fn mean_of(eigs: &[Complex<f64>], group: &[usize]) -> Complex<f64> {
    group.iter().map(|&i| eigs[i]).sum::<Complex<f64>>() / group.len() as f64
}

fn as_eigenvalue(z: Complex<f64>, real_tol: f64) -> Eigenvalue {
    if z.im.abs() <= real_tol {
        Eigenvalue::Real(z.re)
    } else {
        Eigenvalue::Complex { re: z.re, im: z.im }
    }
}

/// Maximum geometric multiplicity over the eigenvalues of a dense real matrix.
///
/// Clusters of two or more eigenvalues are tested at their mean, which
/// stays accurate for defective eigenvalues even when the members scatter,
/// and at up to eight of their members, which are the sharper probes when a
/// semisimple multiple eigenvalue has a distinct neighbour inside the
/// cluster. The largest multiplicity found wins.
/// A lone eigenvalue is a simple root with multiplicity 1 unless another
/// eigenvalue lies within the neighbour tolerance, in which case it is
/// tested too, along with the mean of its neighbourhood.
pub fn nd_ect_numeric(phi: &DMatrix<f64>, opts: &EctOptions) -> Result<DriverResult> {
    let n = check_square(phi, opts)?;
    if n == 0 {
        return Ok(DriverResult::new(1, 0, 0, Method::EctNumeric));
    }
    let balanced = balance(phi);
    let phi = &balanced;
    let eigs = eigenvalues(phi)?;
    let scale = eigs.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
    let tol = opts.cluster_tol * scale;
    let near = opts.neighbor_tol * scale;

    let mut probes = Vec::new();
    let mut best = (0usize, None);
    for group in cluster(&eigs, tol) {
        if group.len() > 1 {
            probes.push(mean_of(&eigs, &group));
            let stride = group.len().div_ceil(MEMBER_PROBES);
            probes.extend(group.iter().step_by(stride).map(|&i| eigs[i]));
        } else {
            let z = eigs[group[0]];
            let crowded = eigs.iter().enumerate().any(|(j, w)| j != group[0] && (z - w).norm() <= near);
            if crowded {
                probes.push(z);
            } else if best.0 < 1 {
                best = (1, Some(z));
            }
        }
    }
    // Defective eigenvalues split by roughly eps^(1/k) for a Jordan chain
    // of length k, which can exceed the cluster tolerance. The mean of the
    // wider neighbourhood is still accurate, so probe it as well.
    for group in cluster(&eigs, near) {
        if group.len() > 1 {
            probes.push(mean_of(&eigs, &group));
        }
    }
    for z in probes {
        let mu = geometric_multiplicity(phi, z, tol, opts)?;
        if mu > best.0 {
            best = (mu, Some(z));
        }
    }
    let mut res = DriverResult::new(best.0, n, n, Method::EctNumeric);
    res.achieving_eigenvalue = best.1.map(|z| as_eigenvalue(z, tol));
    Ok(res)
}

/// Largest eigenvalue degeneracy of a symmetric matrix.
pub fn nd_ect_symmetric(phi: &DMatrix<f64>, opts: &EctOptions) -> Result<DriverResult> {
    let n = check_square(phi, opts)?;
    if n == 0 {
        return Ok(DriverResult::new(1, 0, 0, Method::EctSymmetric));
    }
    let amax = phi.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    let asym = (phi - phi.transpose()).iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    if asym > 1e-12 * amax.max(f64::MIN_POSITIVE) {
        return Err(Error::ContractViolation(format!(
            "matrix is not symmetric (max |A - A^T| = {asym:e})"
        )));
    }
    let mut eigs: Vec<f64> = phi.clone().symmetric_eigenvalues().iter().copied().collect();
    eigs.sort_by(f64::total_cmp);
    let scale = eigs.iter().map(|v| v.abs()).fold(1.0_f64, f64::max);
    let tol = opts.cluster_tol * scale;
    let (mut best, mut best_at) = (1usize, eigs[0]);
    let mut start = 0;
    for i in 1..=eigs.len() {
        if i == eigs.len() || eigs[i] - eigs[i - 1] > tol {
            let size = i - start;
            if size > best {
                best = size;
                best_at = eigs[start..i].iter().sum::<f64>() / size as f64;
            }
            start = i;
        }
    }
    let mut res = DriverResult::new(best, n, n, Method::EctSymmetric);
    res.achieving_eigenvalue = Some(Eigenvalue::Real(best_at));
    Ok(res)
}
