//! Seeded randomized truncated SVD for sparse matrices.
//!
//! A Gaussian sketch captures the range of the matrix, subspace iteration
//! refines it until the retained singular values are stable to 1e-10, and
//! a one-sided Jacobi factorization of the small projected matrix yields
//! the factors. Everything is deterministic for a fixed seed and runs
//! sequentially; concurrency belongs to the callers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{jacobi_svd_tall, orthonormalize_columns, Mat};

use super::ppmi::PpmiMatrix;

const OVERSAMPLE: usize = 10;
const SIGMA_TOL: f64 = 1e-10;
const MAX_POWER_ITERS: usize = 80;

/// Truncated factors `U_k`, `sigma_k`, `V_k` with `U`, `V` column-orthonormal
/// and the singular values sorted nonincreasing.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    u: Mat,
    sigma: Vec<f64>,
    v: Mat,
}

impl SvdFactors {
    pub fn u(&self) -> &Mat {
        &self.u
    }

    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    pub fn v(&self) -> &Mat {
        &self.v
    }

    pub fn k(&self) -> usize {
        self.sigma.len()
    }

    /// Keep the leading `k` factors.
    pub fn truncate(&self, k: usize) -> Result<SvdFactors> {
        if k == 0 || k > self.k() {
            return Err(Error::Parameter(format!(
                "cannot truncate rank-{} factors to k={k}",
                self.k()
            )));
        }
        Ok(SvdFactors {
            u: self.u.take_cols(k),
            sigma: self.sigma[..k].to_vec(),
            v: self.v.take_cols(k),
        })
    }

    /// Dense reconstruction `U diag(sigma) V^T`.
    pub fn reconstruct(&self) -> Mat {
        let (m, n, k) = (self.u.rows(), self.v.rows(), self.k());
        let mut out = Mat::zeros(m, n);
        for i in 0..m {
            for j in 0..n {
                let mut s = 0.0;
                for t in 0..k {
                    s += self.u.at(i, t) * self.sigma[t] * self.v.at(j, t);
                }
                *out.at_mut(i, j) = s;
            }
        }
        out
    }
}

/// `y = a * omega` for sparse row entries `a` (m x n) and dense `omega` (n x l).
fn sparse_mul_dense(rows: &[Vec<(usize, f64)>], omega: &Mat) -> Mat {
    let mut y = Mat::zeros(rows.len(), omega.cols());
    for (i, row) in rows.iter().enumerate() {
        let dst = y.row_mut(i);
        for &(j, v) in row {
            let src = omega.row(j);
            for (d, s) in dst.iter_mut().zip(src) {
                *d += v * s;
            }
        }
    }
    y
}

/// `z = a^T * q` for sparse row entries `a` (m x n) and dense `q` (m x l).
fn sparse_t_mul_dense(rows: &[Vec<(usize, f64)>], n_cols: usize, q: &Mat) -> Mat {
    let mut z = Mat::zeros(n_cols, q.cols());
    for (i, row) in rows.iter().enumerate() {
        let src = q.row(i);
        for &(j, v) in row {
            let dst = z.row_mut(j);
            for (d, s) in dst.iter_mut().zip(src) {
                *d += v * s;
            }
        }
    }
    z
}

/// Truncated SVD of a sparse matrix given as per-row `(col, value)` entries.
pub fn truncated_svd_sparse(
    rows: &[Vec<(usize, f64)>],
    n_cols: usize,
    k: usize,
    seed: u64,
) -> Result<SvdFactors> {
    let n_rows = rows.len();
    let max_rank = n_rows.min(n_cols);
    if k == 0 || k > max_rank {
        return Err(Error::Parameter(format!(
            "k must satisfy 1 <= k <= min(rows, cols) = {max_rank}, got {k}"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sketch = (k + OVERSAMPLE).min(max_rank);

    let mut omega = Mat::zeros(n_cols, sketch);
    for i in 0..n_cols {
        for j in 0..sketch {
            *omega.at_mut(i, j) = StandardNormal.sample(&mut rng);
        }
    }

    let mut q = sparse_mul_dense(rows, &omega);
    orthonormalize_columns(&mut q, &mut rng);

    let mut prev_sigma: Option<Vec<f64>> = None;
    let mut factors = None;
    for _iter in 0..MAX_POWER_ITERS {
        // b = q^T a, factored through its tall transpose
        let bt = sparse_t_mul_dense(rows, n_cols, &q); // n x sketch
        let (w, sigma, z) = jacobi_svd_tall(&bt, &mut rng);
        // bt = w sigma z^T  =>  a ~ q (z sigma w^T), so u = q z, v = w
        let converged = prev_sigma.as_ref().is_some_and(|prev| {
            prev.iter()
                .zip(&sigma)
                .take(k)
                .all(|(a, b)| (a - b).abs() <= SIGMA_TOL * b.abs().max(1.0))
        });
        factors = Some((q.matmul(&z), sigma.clone(), w));
        if converged {
            break;
        }
        prev_sigma = Some(sigma);
        // one power iteration refines the captured subspace
        let mut at_q = sparse_t_mul_dense(rows, n_cols, &q);
        orthonormalize_columns(&mut at_q, &mut rng);
        q = sparse_mul_dense(rows, &at_q);
        orthonormalize_columns(&mut q, &mut rng);
    }

    let (u, sigma, v) = factors.expect("at least one iteration runs");
    let full = SvdFactors { u, sigma, v };
    full.truncate(k)
}

/// Truncated SVD of a PPMI matrix.
pub fn truncated_svd(matrix: &PpmiMatrix, k: usize, seed: u64) -> Result<SvdFactors> {
    truncated_svd_sparse(matrix.row_entries(), matrix.n_cols(), k, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_to_rows(rows: &[Vec<f64>]) -> Vec<Vec<(usize, f64)>> {
        rows.iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, v)| **v != 0.0)
                    .map(|(j, v)| (j, *v))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn diagonal_dominant_direction() {
        // diag(3, 1), k = 1 -> sigma = [3], reconstruction diag(3, 0)
        let rows = dense_to_rows(&[vec![3.0, 0.0], vec![0.0, 1.0]]);
        let f = truncated_svd_sparse(&rows, 2, 1, 0).unwrap();
        assert!((f.sigma()[0] - 3.0).abs() < 1e-10);
        let recon = f.reconstruct();
        assert!((recon.at(0, 0) - 3.0).abs() < 1e-9);
        assert!(recon.at(1, 1).abs() < 1e-9);
        assert!(recon.at(0, 1).abs() < 1e-9);
    }

    #[test]
    fn full_rank_reconstruction_is_exact() {
        let rows = dense_to_rows(&[
            vec![0.3, -1.2, 0.7, 2.0],
            vec![1.1, 0.4, -0.6, 0.9],
            vec![-0.5, 0.8, 1.3, -0.2],
            vec![2.2, -0.9, 0.1, 0.5],
            vec![0.6, 1.5, -1.1, 0.3],
        ]);
        let f = truncated_svd_sparse(&rows, 4, 4, 7).unwrap();
        let recon = f.reconstruct();
        let mut err = 0.0f64;
        for (i, r) in rows.iter().enumerate() {
            let mut dense = [0.0; 4];
            for &(j, v) in r {
                dense[j] = v;
            }
            for (j, &dv) in dense.iter().enumerate() {
                err += (recon.at(i, j) - dv).powi(2);
            }
        }
        assert!(err.sqrt() < 1e-8, "frobenius error {}", err.sqrt());
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let rows = dense_to_rows(&[
            vec![0.3, -1.2, 0.7],
            vec![1.1, 0.4, -0.6],
            vec![-0.5, 0.8, 1.3],
            vec![2.2, -0.9, 0.1],
        ]);
        let a = truncated_svd_sparse(&rows, 3, 2, 123).unwrap();
        let b = truncated_svd_sparse(&rows, 3, 2, 123).unwrap();
        assert_eq!(a.u(), b.u());
        assert_eq!(a.sigma(), b.sigma());
        assert_eq!(a.v(), b.v());
    }

    #[test]
    fn k_out_of_range_is_a_parameter_error() {
        let rows = dense_to_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert!(truncated_svd_sparse(&rows, 2, 0, 0).is_err());
        assert!(truncated_svd_sparse(&rows, 2, 3, 0).is_err());
    }

    #[test]
    fn sigma_nonincreasing_and_orthonormal() {
        let rows = dense_to_rows(&[
            vec![1.0, 2.0, 0.0, 0.5],
            vec![0.0, 1.0, 3.0, 0.0],
            vec![4.0, 0.0, 1.0, 1.0],
        ]);
        let f = truncated_svd_sparse(&rows, 4, 3, 5).unwrap();
        for w in f.sigma().windows(2) {
            assert!(w[0] >= w[1] - 1e-12);
        }
        for p in 0..3 {
            for q in 0..3 {
                let want = if p == q { 1.0 } else { 0.0 };
                let uu: f64 = (0..3).map(|i| f.u().at(i, p) * f.u().at(i, q)).sum();
                let vv: f64 = (0..4).map(|i| f.v().at(i, p) * f.v().at(i, q)).sum();
                assert!((uu - want).abs() < 1e-8);
                assert!((vv - want).abs() < 1e-8);
            }
        }
    }
}
