//! Symmetric tridiagonal eigenproblems: Sturm-count bisection for selected
//! eigenvalues and inverse iteration (pivoted LU) for their vectors.

/// Symmetric tridiagonal matrix: `diag` of length `n`, `off` of length `n - 1`.
#[derive(Clone, Debug)]
pub(crate) struct SymTridiag {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiag {
    /// Number of eigenvalues strictly less than `x`.
    pub fn count_below(&self, x: f64) -> usize {
        let n = self.diag.len();
        let pivmin = f64::MIN_POSITIVE / f64::EPSILON;
        let mut count = 0;
        let mut q = self.diag[0] - x;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
        for i in 1..n {
            let e = self.off[i - 1];
            q = self.diag[i] - x - e * e / q;
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin interval containing the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// The `k`-th smallest eigenvalue (0-based), bisected to full precision.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        let (glo, ghi) = self.gershgorin();
        let pad = f64::EPSILON * (glo.abs().max(ghi.abs())).max(1.0) * 4.0;
        let mut lo = glo - pad;
        let mut hi = ghi + pad;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Unit eigenvector for the (accurate) eigenvalue `lambda`.
    pub fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.diag.len();
        if n == 1 {
            return vec![1.0];
        }
        let scale = self
            .diag
            .iter()
            .map(|d| d.abs())
            .chain(self.off.iter().map(|e| e.abs()))
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        let lu = PivotedLu::new(&self.off, &self.diag, lambda, scale * f64::EPSILON);
        // Deterministic start with components of both signs mixed in.
        let mut z: Vec<f64> = (0..n).map(|i| 1.0 + 0.01 * ((i * 7 % 13) as f64 - 6.0) / 6.0).collect();
        for _ in 0..4 {
            lu.solve(&mut z);
            let norm = z.iter().map(|v| v * v).sum::<f64>().sqrt();
            if !(norm > 0.0) || !norm.is_finite() {
                break;
            }
            z.iter_mut().for_each(|v| *v /= norm);
        }
        z
    }
}

/// LU factorisation with partial pivoting of `T - lambda I`.
struct PivotedLu {
    l: Vec<f64>,
    d: Vec<f64>,
    u1: Vec<f64>,
    u2: Vec<f64>,
    swapped: Vec<bool>,
}

impl PivotedLu {
    fn new(off: &[f64], diag: &[f64], lambda: f64, tiny: f64) -> Self {
        let n = diag.len();
        let mut l = off.to_vec();
        let mut d: Vec<f64> = diag.iter().map(|x| x - lambda).collect();
        let mut u1 = off.to_vec();
        let mut u2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n - 1 {
            if d[i].abs() >= l[i].abs() {
                if d[i] != 0.0 {
                    let fact = l[i] / d[i];
                    l[i] = fact;
                    d[i + 1] -= fact * u1[i];
                } else {
                    l[i] = 0.0;
                }
            } else {
                let fact = d[i] / l[i];
                d[i] = l[i];
                l[i] = fact;
                let temp = u1[i];
                u1[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    u2[i] = u1[i + 1];
                    u1[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        for v in d.iter_mut() {
            if v.abs() < tiny {
                *v = if *v < 0.0 { -tiny } else { tiny };
            }
        }
        PivotedLu { l, d, u1, u2, swapped }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = b.len();
        for i in 0..n - 1 {
            if self.swapped[i] {
                b.swap(i, i + 1);
            }
            b[i + 1] -= self.l[i] * b[i];
        }
        b[n - 1] /= self.d[n - 1];
        if n >= 2 {
            b[n - 2] = (b[n - 2] - self.u1[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.u1[i] * b[i + 1] - self.u2[i] * b[i + 2]) / self.d[i];
        }
    }
}
