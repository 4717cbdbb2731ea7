//! Composite Gauss-Legendre quadrature on panels graded towards the origin.
//!
//! The integrands met here (powers of the circle metrics, resolvent profiles)
//! are smooth on `(0, pi]` but may have a weak singularity or a sharp peak at
//! `theta = 0`, so the first panel is split geometrically.

use std::f64::consts::PI;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Panel breakpoints on `[0, hi]`: `uniform` equal panels, with the first
/// one refined geometrically over `levels` halvings.
fn graded_breakpoints(hi: f64, uniform: usize, levels: usize) -> Vec<f64> {
    let h = hi / uniform as f64;
    let mut pts = Vec::with_capacity(uniform + levels + 1);
    pts.push(0.0);
    for j in (1..=levels).rev() {
        pts.push(h * 0.5f64.powi(j as i32));
    }
    for i in 1..=uniform {
        pts.push(h * i as f64);
    }
    *pts.last_mut().unwrap() = hi;
    pts
}

/// Quadrature nodes and weights for `[0, hi]`.
pub(crate) fn graded_rule(hi: f64, uniform: usize, order: usize) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(order);
    let pts = graded_breakpoints(hi, uniform, 50);
    let mut out = Vec::with_capacity((pts.len() - 1) * order);
    for pair in pts.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        for (xi, wi) in x.iter().zip(&w) {
            out.push((mid + half * xi, half * wi));
        }
    }
    out
}

/// `integral_0^hi f`, with grading towards 0.
#[cfg(test)]
pub(crate) fn integrate(f: impl Fn(f64) -> f64, hi: f64, uniform: usize) -> f64 {
    graded_rule(hi, uniform, 24)
        .into_iter()
        .map(|(x, w)| w * f(x))
        .sum()
}

/// Cosine moments `(1/pi) * integral_0^pi f(theta) cos(k theta) dtheta` for
/// `k = 0..=k_max` using a rule of the given order.
pub(crate) fn cosine_moments_with(f: &impl Fn(f64) -> f64, k_max: usize, order: usize) -> Vec<f64> {
    let uniform = (k_max / 2 + 1).max(16);
    let rule = graded_rule(PI, uniform, order);
    let mut acc = vec![0.0; k_max + 1];
    for (theta, w) in rule {
        let wf = w * f(theta) / PI;
        if wf == 0.0 {
            continue;
        }
        // Rotate e^{ik theta}; resynchronise periodically to bound drift.
        let (s1, c1) = theta.sin_cos();
        let (mut c, mut s) = (1.0, 0.0);
        for (k, slot) in acc.iter_mut().enumerate() {
            if k % 64 == 0 && k > 0 {
                let (sk, ck) = (k as f64 * theta).sin_cos();
                c = ck;
                s = sk;
            }
            *slot += wf * c;
            let cn = c * c1 - s * s1;
            s = s * c1 + c * s1;
            c = cn;
        }
    }
    acc
}
