//! Householder reduction of a dense symmetric matrix to tridiagonal form.

use super::tridiag::SymTridiag;

/// `A = Q T Q^T` with `Q = H_0 H_1 ... H_{n-3}`, `H_k = I - 2 v_k v_k^T`.
pub(crate) struct Tridiagonalization {
    pub t: SymTridiag,
    /// Unit reflector `v_k`, acting on indices `k+1..n`.
    reflectors: Vec<Vec<f64>>,
}

impl Tridiagonalization {
    /// Reduce the row-major `n x n` symmetric matrix `a` (overwritten).
    pub fn new(mut a: Vec<f64>, n: usize) -> Self {
        assert_eq!(a.len(), n * n);
        let mut diag = vec![0.0; n];
        let mut off = vec![0.0; n.saturating_sub(1)];
        let mut reflectors = Vec::with_capacity(n.saturating_sub(2));
        let mut p = vec![0.0; n];
        for k in 0..n.saturating_sub(2) {
            let m = n - k - 1;
            let mut v: Vec<f64> = (0..m).map(|i| a[(k + 1 + i) * n + k]).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            diag[k] = a[k * n + k];
            if norm == 0.0 {
                off[k] = 0.0;
                reflectors.push(vec![0.0; m]);
                continue;
            }
            let alpha = if v[0] > 0.0 { -norm } else { norm };
            v[0] -= alpha;
            let vn = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.iter_mut().for_each(|x| *x /= vn);
            off[k] = alpha;

            // p = A_sub v, c = v^T p, w = 2p - 2c v
            let base = k + 1;
            for i in 0..m {
                let row = &a[(base + i) * n + base..(base + i) * n + n];
                p[i] = row.iter().zip(&v).map(|(x, y)| x * y).sum();
            }
            let c: f64 = p[..m].iter().zip(&v).map(|(x, y)| x * y).sum();
            for i in 0..m {
                p[i] = 2.0 * p[i] - 2.0 * c * v[i];
            }
            // A_sub -= v w^T + w v^T
            for i in 0..m {
                let (vi, wi) = (v[i], p[i]);
                let row = &mut a[(base + i) * n + base..(base + i) * n + n];
                for (j, x) in row.iter_mut().enumerate() {
                    *x -= vi * p[j] + wi * v[j];
                }
            }
            reflectors.push(v);
        }
        if n >= 2 {
            diag[n - 2] = a[(n - 2) * n + n - 2];
            off[n - 2] = a[(n - 1) * n + n - 2];
        }
        if n >= 1 {
            diag[n - 1] = a[(n - 1) * n + n - 1];
        }
        Tridiagonalization { t: SymTridiag { diag, off }, reflectors }
    }

    /// Map an eigenvector of `T` back to one of `A`.
    pub fn back_transform(&self, mut z: Vec<f64>) -> Vec<f64> {
        for (k, v) in self.reflectors.iter().enumerate().rev() {
            let tail = &mut z[k + 1..];
            let dot: f64 = tail.iter().zip(v).map(|(a, b)| a * b).sum();
            for (x, vi) in tail.iter_mut().zip(v) {
                *x -= 2.0 * dot * vi;
            }
        }
        z
    }
}
