//! Smallest eigenpairs of the generalized symmetric problem `K x = μ M x`
//! with `K` positive semidefinite and `M` positive definite.
//!
//! Large problems use shift-invert block subspace iteration: the block is
//! pushed through `(K + σM)⁻¹ M`, `M`-orthonormalized, and Rayleigh–Ritz
//! projected onto `K` every sweep. The block carries extra guard vectors so
//! repeated eigenvalues are resolved without special handling. Small
//! problems go through a dense Cholesky reduction instead.

use crate::error::{Error, Result};
use crate::sparse::{EnvelopeCholesky, SparseSymmetric};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy)]
pub struct EigenOptions {
    /// Relative residual `|Kx − μMx| / (|Kx| + (|μ| + μ_floor)|Mx|)` required
    /// of every requested pair.
    pub tol: f64,
    pub max_iter: usize,
    /// Dense reduction at or below this many unknowns.
    pub dense_threshold: usize,
    /// Shift `σ` relative to `trace(K) / trace(M)`.
    pub relative_shift: f64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions { tol: 1e-10, max_iter: 1000, dense_threshold: 400, relative_shift: 1e-6 }
    }
}

#[derive(Debug, Clone)]
pub struct EigenPairs {
    pub values: Vec<f64>,
    /// `M`-orthonormal eigenvectors, largest-magnitude entry positive.
    pub vectors: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub iterations: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Fraction of `trace(K) / trace(M)` used as an eigenvalue floor in the
/// residual denominator, so null-space vectors are measured on the scale of
/// the spectrum rather than against their own vanishing `Kx`.
const RESIDUAL_FLOOR: f64 = 1e-4;

fn relative_residual(k: &SparseSymmetric, m: &SparseSymmetric, x: &[f64], mu: f64, floor: f64) -> f64 {
    let kx = k.apply(x);
    let mx = m.apply(x);
    let r: Vec<f64> = kx.iter().zip(&mx).map(|(a, b)| a - mu * b).collect();
    norm(&r) / (norm(&kx) + (mu.abs() + floor) * norm(&mx) + f64::MIN_POSITIVE)
}

fn residual_floor(k: &SparseSymmetric, m: &SparseSymmetric) -> f64 {
    RESIDUAL_FLOOR * k.trace() / m.trace()
}

fn fix_sign(v: &mut [f64]) {
    let mut best = 0usize;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() * (1.0 + 1e-9) {
            best = i;
        }
    }
    if v[best] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// The `count` smallest eigenpairs, ascending.
pub fn smallest_generalized(
    k: &SparseSymmetric,
    m: &SparseSymmetric,
    count: usize,
    opts: &EigenOptions,
) -> Result<EigenPairs> {
    let n = k.dim();
    assert_eq!(n, m.dim(), "K and M must have the same dimension");
    if count == 0 || count > n {
        return Err(Error::Domain(format!("cannot extract {count} eigenpairs from a problem of size {n}")));
    }
    if n <= opts.dense_threshold {
        dense(k, m, count)
    } else {
        subspace_iteration(k, m, count, opts)
    }
}

fn dense(k: &SparseSymmetric, m: &SparseSymmetric, count: usize) -> Result<EigenPairs> {
    let n = k.dim();
    let kd = k.to_dense();
    let md = m.to_dense();
    let chol = md.clone().cholesky().ok_or(Error::NotPositiveDefinite { pivot: 0, value: f64::NAN })?;
    let l = chol.l();
    let linv = l.clone().try_inverse().ok_or(Error::NotPositiveDefinite { pivot: 0, value: 0.0 })?;
    let c = &linv * kd * linv.transpose();
    let c = (&c + c.transpose()) * 0.5;
    let eig = c.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let lt_inv = linv.transpose();
    let floor = residual_floor(k, m);
    let mut values = Vec::with_capacity(count);
    let mut vectors = Vec::with_capacity(count);
    let mut residuals = Vec::with_capacity(count);
    for &i in order.iter().take(count) {
        let y: DVector<f64> = &lt_inv * eig.eigenvectors.column(i);
        let mut v: Vec<f64> = y.iter().copied().collect();
        let scale = dot(&v, &m.apply(&v)).sqrt();
        v.iter_mut().for_each(|x| *x /= scale);
        fix_sign(&mut v);
        let mu = eig.eigenvalues[i];
        residuals.push(relative_residual(k, m, &v, mu, floor));
        values.push(mu);
        vectors.push(v);
    }
    Ok(EigenPairs { values, vectors, residuals, iterations: 1 })
}

/// `M`-orthonormalizes the columns in place with two passes of modified
/// Gram–Schmidt; columns that collapse are replaced by fresh random ones.
fn m_orthonormalize(m: &SparseSymmetric, block: &mut [Vec<f64>], rng: &mut ChaCha8Rng) {
    for i in 0..block.len() {
        for _attempt in 0..4 {
            let before = dot(&block[i], &m.apply(&block[i])).sqrt();
            for _pass in 0..2 {
                let mbi = m.apply(&block[i]);
                for j in 0..i {
                    let c = dot(&block[j], &mbi);
                    let (done, rest) = block.split_at_mut(i);
                    rest[0].iter_mut().zip(&done[j]).for_each(|(x, y)| *x -= c * y);
                }
            }
            let after = dot(&block[i], &m.apply(&block[i])).sqrt();
            if after > 1e-10 * before && after > 0.0 {
                block[i].iter_mut().for_each(|x| *x /= after);
                break;
            }
            block[i].iter_mut().for_each(|x| *x = rng.gen::<f64>() - 0.5);
        }
    }
}

fn subspace_iteration(
    k: &SparseSymmetric,
    m: &SparseSymmetric,
    count: usize,
    opts: &EigenOptions,
) -> Result<EigenPairs> {
    let n = k.dim();
    let block_size = (count + count.max(4)).min(n);
    let sigma = opts.relative_shift * k.trace() / m.trace();
    let shifted = k.add_scaled(m, sigma);
    let chol = EnvelopeCholesky::factor(&shifted)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut block: Vec<Vec<f64>> = (0..block_size).map(|_| (0..n).map(|_| rng.gen::<f64>() - 0.5).collect()).collect();
    m_orthonormalize(m, &mut block, &mut rng);

    let floor = residual_floor(k, m);
    let mut residuals = vec![f64::INFINITY; count];
    let mut values = vec![0.0; count];
    for iter in 1..=opts.max_iter {
        let mut next: Vec<Vec<f64>> = block.iter().map(|x| chol.solve(&m.apply(x))).collect();
        m_orthonormalize(m, &mut next, &mut rng);
        // Rayleigh–Ritz on K in the M-orthonormal basis
        let kq: Vec<Vec<f64>> = next.iter().map(|q| k.apply(q)).collect();
        let mut proj = DMatrix::zeros(block_size, block_size);
        for i in 0..block_size {
            for j in i..block_size {
                let v = 0.5 * (dot(&next[i], &kq[j]) + dot(&next[j], &kq[i]));
                proj[(i, j)] = v;
                proj[(j, i)] = v;
            }
        }
        let eig = proj.symmetric_eigen();
        let mut order: Vec<usize> = (0..block_size).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        block = order
            .iter()
            .map(|&c| {
                let coef = eig.eigenvectors.column(c);
                let mut v = vec![0.0; n];
                for (q, &w) in next.iter().zip(coef.iter()) {
                    v.iter_mut().zip(q).for_each(|(x, y)| *x += w * y);
                }
                v
            })
            .collect();
        for i in 0..count {
            values[i] = eig.eigenvalues[order[i]];
            residuals[i] = relative_residual(k, m, &block[i], values[i], floor);
        }
        if residuals.iter().all(|&r| r <= opts.tol) {
            let mut vectors: Vec<Vec<f64>> = block.into_iter().take(count).collect();
            for v in &mut vectors {
                let scale = dot(v, &m.apply(v)).sqrt();
                v.iter_mut().for_each(|x| *x /= scale);
                fix_sign(v);
            }
            return Ok(EigenPairs { values, vectors, residuals, iterations: iter });
        }
    }
    Err(Error::EigenNotConverged { iterations: opts.max_iter, residuals })
}
