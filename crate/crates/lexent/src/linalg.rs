//! Minimal dense matrix support for the factorization code.
//!
//! Row-major `f64` storage. Only the handful of operations the truncated
//! SVD and the embeddings need; nothing here is a general linear algebra
//! library.

use rand::Rng;
use rand_distr::StandardNormal;

#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        let nr = rows.len();
        let nc = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == nc), "ragged rows");
        let mut data = Vec::with_capacity(nr * nc);
        for r in &rows {
            data.extend_from_slice(r);
        }
        Mat {
            rows: nr,
            cols: nc,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.at(i, j)).collect()
    }

    /// Keep the first `k` columns.
    pub fn take_cols(&self, k: usize) -> Mat {
        assert!(k <= self.cols);
        let mut out = Mat::zeros(self.rows, k);
        for i in 0..self.rows {
            out.row_mut(i).copy_from_slice(&self.row(i)[..k]);
        }
        out
    }

    /// Dense product `self * other`.
    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "shape mismatch in matmul");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for kk in 0..self.cols {
                let a = self.at(i, kk);
                if a == 0.0 {
                    continue;
                }
                let src = other.row(kk);
                let dst = out.row_mut(i);
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += a * s;
                }
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn has_non_finite(&self) -> bool {
        self.data.iter().any(|v| !v.is_finite())
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn col_dot(m: &Mat, p: usize, q: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..m.rows() {
        s += m.at(i, p) * m.at(i, q);
    }
    s
}

/// Orthonormalize the columns of `m` in place with modified Gram-Schmidt
/// (two passes). Columns that vanish are replaced by seeded random vectors
/// orthogonalized against the rest, so the result always has full column
/// rank.
pub fn orthonormalize_columns<R: Rng>(m: &mut Mat, rng: &mut R) {
    let (nr, nc) = (m.rows(), m.cols());
    debug_assert!(nc <= nr, "cannot orthonormalize more columns than rows");
    for j in 0..nc {
        // two projection passes for numerical stability
        for _pass in 0..2 {
            for prev in 0..j {
                let proj = col_dot(m, prev, j);
                for i in 0..nr {
                    let v = m.at(i, prev);
                    *m.at_mut(i, j) -= proj * v;
                }
            }
        }
        let mut nrm = col_dot(m, j, j).sqrt();
        let mut guard = 0;
        while nrm < 1e-12 {
            // rank-deficient input: draw a replacement direction
            for i in 0..nr {
                *m.at_mut(i, j) = rng.sample::<f64, _>(StandardNormal);
            }
            for _pass in 0..2 {
                for prev in 0..j {
                    let proj = col_dot(m, prev, j);
                    for i in 0..nr {
                        let v = m.at(i, prev);
                        *m.at_mut(i, j) -= proj * v;
                    }
                }
            }
            nrm = col_dot(m, j, j).sqrt();
            guard += 1;
            assert!(guard < 64, "failed to complete orthonormal basis");
        }
        for i in 0..nr {
            *m.at_mut(i, j) /= nrm;
        }
    }
}

/// Thin SVD of a tall matrix (`rows >= cols`) by the one-sided Jacobi
/// method: returns `(u, sigma, v)` with `a = u * diag(sigma) * v^T`,
/// singular values sorted nonincreasing, `u` (rows x cols) and `v`
/// (cols x cols) column-orthonormal. Zero singular directions are
/// completed to a full orthonormal basis using `rng`.
pub fn jacobi_svd_tall<R: Rng>(a: &Mat, rng: &mut R) -> (Mat, Vec<f64>, Mat) {
    assert!(a.rows() >= a.cols(), "jacobi_svd_tall needs rows >= cols");
    let (nr, nc) = (a.rows(), a.cols());
    let mut u = a.clone();
    let mut v = Mat::zeros(nc, nc);
    for j in 0..nc {
        *v.at_mut(j, j) = 1.0;
    }

    const TOL: f64 = 1e-15;
    const MAX_SWEEPS: usize = 120;
    for _sweep in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..nc.saturating_sub(1) {
            for q in (p + 1)..nc {
                let app = col_dot(&u, p, p);
                let aqq = col_dot(&u, q, q);
                let apq = col_dot(&u, p, q);
                if apq.abs() <= TOL * (app * aqq).sqrt() || apq == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (aqq - app) / (2.0 * apq);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..nr {
                    let up = u.at(i, p);
                    let uq = u.at(i, q);
                    *u.at_mut(i, p) = c * up - s * uq;
                    *u.at_mut(i, q) = s * up + c * uq;
                }
                for i in 0..nc {
                    let vp = v.at(i, p);
                    let vq = v.at(i, q);
                    *v.at_mut(i, p) = c * vp - s * vq;
                    *v.at_mut(i, q) = s * vp + c * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    // column norms are the singular values; sort nonincreasing
    let mut order: Vec<usize> = (0..nc).collect();
    let norms: Vec<f64> = (0..nc).map(|j| col_dot(&u, j, j).sqrt()).collect();
    order.sort_by(|&x, &y| norms[y].partial_cmp(&norms[x]).unwrap().then(x.cmp(&y)));

    let mut u_sorted = Mat::zeros(nr, nc);
    let mut v_sorted = Mat::zeros(nc, nc);
    let mut sigma = Vec::with_capacity(nc);
    for (dst, &src) in order.iter().enumerate() {
        sigma.push(norms[src]);
        for i in 0..nr {
            *u_sorted.at_mut(i, dst) = u.at(i, src);
        }
        for i in 0..nc {
            *v_sorted.at_mut(i, dst) = v.at(i, src);
        }
    }

    // normalize the left vectors, completing zero directions
    let scale = sigma.first().copied().unwrap_or(0.0).max(1.0);
    for (j, s) in sigma.iter_mut().enumerate() {
        if *s > 1e-14 * scale {
            for i in 0..nr {
                *u_sorted.at_mut(i, j) /= *s;
            }
        } else {
            *s = s.max(0.0);
            for i in 0..nr {
                *u_sorted.at_mut(i, j) = 0.0;
            }
        }
    }
    orthonormalize_columns(&mut u_sorted, rng);
    (u_sorted, sigma, v_sorted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn orthonormalize_recovers_identity_like_basis() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut m = Mat::from_rows(vec![vec![2.0, 2.0], vec![0.0, 1.0], vec![0.0, 0.0]]);
        orthonormalize_columns(&mut m, &mut rng);
        for p in 0..2 {
            for q in 0..2 {
                let want = if p == q { 1.0 } else { 0.0 };
                assert!((col_dot(&m, p, q) - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn jacobi_svd_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = Mat::from_rows(vec![vec![1.0, 2.0], vec![3.0, 4.0], vec![5.0, 6.0]]);
        let (u, sigma, v) = jacobi_svd_tall(&a, &mut rng);
        let mut recon = Mat::zeros(3, 2);
        for i in 0..3 {
            for j in 0..2 {
                let mut s = 0.0;
                for (k, &sk) in sigma.iter().enumerate() {
                    s += u.at(i, k) * sk * v.at(j, k);
                }
                *recon.at_mut(i, j) = s;
            }
        }
        for i in 0..3 {
            for j in 0..2 {
                assert!((recon.at(i, j) - a.at(i, j)).abs() < 1e-10);
            }
        }
        assert!(sigma[0] >= sigma[1]);
    }

    #[test]
    fn jacobi_svd_handles_rank_deficiency() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        // rank 1
        let a = Mat::from_rows(vec![vec![1.0, 2.0], vec![2.0, 4.0], vec![3.0, 6.0]]);
        let (u, sigma, _v) = jacobi_svd_tall(&a, &mut rng);
        assert!(sigma[1].abs() < 1e-10);
        for p in 0..2 {
            for q in 0..2 {
                let want = if p == q { 1.0 } else { 0.0 };
                assert!((col_dot(&u, p, q) - want).abs() < 1e-10);
            }
        }
    }
}
