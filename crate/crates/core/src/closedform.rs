//! Exact ground states for the discrete number metric.
//!
//! With `d_Z` discrete, `H(t) = 1 - |0><0| + t V`, and the eigenvalue
//! equation `(1 + tV - c) psi = |0><0|psi>` gives the resolvent form
//! `psi(theta) = A / (mu + V(theta))` with `mu = (1 - c)/t`. Everything
//! reduces to the integrals over `[-pi, pi]`
//!
//! ```text
//! I1 = int 1/(mu + V),  I2 = int 1/(mu + V)^2 = -dI1/dmu,  I3 = int V/(mu + V)^2 = I1 - mu I2,
//! ```
//!
//! giving `x = I3/I2`, `y = 1 - I1^2/(2 pi I2)` and the consistency
//! condition `I1(mu) = 2 pi t`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::dist::CircleDist;
use crate::error::{Error, Result};
use crate::metrics::MetricT;
use crate::quadrature;

fn check_mu(mu: f64) -> Result<()> {
    if mu > 0.0 && mu.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("mu must be positive, got {mu}")))
    }
}

/// `int_{-pi}^{pi} dtheta / (mu + V(theta))`.
pub fn i1(metric_t: MetricT, mu: f64) -> Result<f64> {
    check_mu(mu)?;
    Ok(match metric_t {
        MetricT::Arc => {
            let s = mu.sqrt();
            2.0 / s * (PI / s).atan()
        }
        MetricT::Cho => 2.0 * PI / (mu * (mu + 4.0)).sqrt(),
    })
}

/// `int dtheta / (mu + V)^2`.
pub fn i2(metric_t: MetricT, mu: f64) -> Result<f64> {
    check_mu(mu)?;
    Ok(match metric_t {
        MetricT::Arc => {
            let s = mu.sqrt();
            (PI / s).atan() / (s * mu) + PI / (mu * (mu + PI * PI))
        }
        MetricT::Cho => {
            let q = mu * (mu + 4.0);
            2.0 * PI * (mu + 2.0) / (q * q.sqrt())
        }
    })
}

/// `int V dtheta / (mu + V)^2`, evaluated without cancellation.
pub fn i3(metric_t: MetricT, mu: f64) -> Result<f64> {
    check_mu(mu)?;
    Ok(match metric_t {
        MetricT::Arc => {
            let z = PI / mu.sqrt();
            let bracket = if z < 0.1 {
                // atan z - z/(1+z^2) = sum_{k>=1} (-1)^(k+1) 2k/(2k+1) z^(2k+1)
                let z2 = z * z;
                let mut term = z * z2;
                let mut s = 0.0;
                for k in 1..30 {
                    let kf = k as f64;
                    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                    s += sign * 2.0 * kf / (2.0 * kf + 1.0) * term;
                    term *= z2;
                    if term < 1e-18 * s.abs() {
                        break;
                    }
                }
                s
            } else {
                z.atan() - z / (1.0 + z * z)
            };
            z / PI * bracket
        }
        MetricT::Cho => {
            let q = mu * (mu + 4.0);
            4.0 * PI * mu / (q * q.sqrt())
        }
    })
}

/// One member of the resolvent family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscreteSolution {
    pub mu: f64,
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    /// Angle variance `I3/I2`.
    pub x: f64,
    /// Discrete number deviation `1 - I1^2/(2 pi I2)`.
    pub y: f64,
}

pub fn discrete_solution(metric_t: MetricT, mu: f64) -> Result<DiscreteSolution> {
    let (a, b, c) = (i1(metric_t, mu)?, i2(metric_t, mu)?, i3(metric_t, mu)?);
    Ok(DiscreteSolution { mu, i1: a, i2: b, i3: c, x: c / b, y: 1.0 - a * a / (2.0 * PI * b) })
}

/// The curve point `(x, y)` of the resolvent state with parameter `mu`.
pub fn discrete_pair(metric_t: MetricT, mu: f64) -> Result<(f64, f64)> {
    let s = discrete_solution(metric_t, mu)?;
    Ok((s.x, s.y))
}

/// The chordal tradeoff curve `y = 1 - sqrt(x(4 - x))/2` on `[0, 2]`.
pub fn dischord_curve(x: f64) -> Result<f64> {
    if !(0.0..=2.0).contains(&x) {
        return Err(Error::OutOfRange { what: "x", value: x, lo: 0.0, hi: 2.0 });
    }
    Ok(1.0 - 0.5 * (x * (4.0 - x)).sqrt())
}

/// `I1((1 - c)/t) - 2 pi t`; increasing in `c`, zero at the ground energy.
pub fn consistency_residual(metric_t: MetricT, t: f64, c: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("t must be positive, got {t}")));
    }
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::OutOfRange { what: "c", value: c, lo: 0.0, hi: 1.0 });
    }
    Ok(i1(metric_t, (1.0 - c) / t)? - 2.0 * PI * t)
}

/// Bracket for the consistency root.
pub const ROOT_EPS: f64 = 1e-12;

/// Ground energy `c(t)` of the discrete-metric Hamiltonian: bisection of the
/// consistency residual on `(eps, 1 - eps)`.
pub fn ground_energy(metric_t: MetricT, t: f64) -> Result<f64> {
    let (mut lo, mut hi) = (ROOT_EPS, 1.0 - ROOT_EPS);
    let r_lo = consistency_residual(metric_t, t, lo)?;
    let r_hi = consistency_residual(metric_t, t, hi)?;
    if !(r_lo <= 0.0 && r_hi >= 0.0) {
        return Err(Error::NoSignChange { lo, hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if consistency_residual(metric_t, t, mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Curve sample from the closed form at slope `-t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormPoint {
    pub t: f64,
    /// Ground energy `c(t)`.
    pub e0: f64,
    pub solution: DiscreteSolution,
}

/// Closed-form curve samples at each `t`.
pub fn discrete_curve(metric_t: MetricT, t_grid: &[f64]) -> Result<Vec<ClosedFormPoint>> {
    t_grid
        .iter()
        .map(|&t| {
            let c = ground_energy(metric_t, t)?;
            let solution = discrete_solution(metric_t, (1.0 - c) / t)?;
            Ok(ClosedFormPoint { t, e0: c, solution })
        })
        .collect()
}

/// The normalised resolvent ground state.
#[derive(Clone, Debug, PartialEq)]
pub struct ResolventState {
    pub mu: f64,
    /// `psi(theta_j)` on the grid `theta_j = 2 pi j / G`, with
    /// `int |psi|^2 dtheta = 1`.
    pub profile: Vec<f64>,
    /// Grid distribution proportional to `|psi(theta_j)|^2`.
    pub distribution: CircleDist,
    /// Fourier coefficients `psi_hat_n`, index `n + n_max`.
    pub psi_hat: Vec<f64>,
}

/// `psi = A/(mu + V)` on a grid and in the number basis.
pub fn resolvent_state(metric_t: MetricT, mu: f64, grid_size: usize, n_max: usize) -> Result<ResolventState> {
    let norm = i2(metric_t, mu)?.sqrt().recip();
    let v = |th: f64| metric_t.potential(th, 2.0);
    let profile: Vec<f64> = (0..grid_size)
        .map(|j| norm / (mu + v(crate::dist::grid_angle(grid_size, j))))
        .collect();
    let distribution = CircleDist::normalized(profile.iter().map(|p| p * p).collect())?;

    // int cos(n theta)/(mu + V) dtheta for n = 0..=n_max
    let moments: Vec<f64> = match metric_t {
        MetricT::Cho => {
            let q = (mu * (mu + 4.0)).sqrt();
            let r = 2.0 / (mu + 2.0 + q);
            let base = 2.0 * PI / q;
            let mut out = Vec::with_capacity(n_max + 1);
            let mut rn = 1.0;
            for _ in 0..=n_max {
                out.push(base * rn);
                rn *= r;
            }
            out
        }
        MetricT::Arc => {
            let f = |th: f64| 1.0 / (mu + th * th);
            quadrature::cosine_moments_with(&f, n_max, 24).into_iter().map(|m| 2.0 * PI * m).collect()
        }
    };
    let scale = norm / (2.0 * PI).sqrt();
    let mut psi_hat = vec![0.0; 2 * n_max + 1];
    for n in 0..=n_max {
        psi_hat[n_max + n] = scale * moments[n];
        psi_hat[n_max - n] = scale * moments[n];
    }
    Ok(ResolventState { mu, profile, distribution, psi_hat })
}
