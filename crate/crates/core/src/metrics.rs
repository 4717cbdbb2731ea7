//! Translation-invariant metrics on Z and on the circle.
//!
//! Angles are plain radians; they are reduced to `(-pi, pi]` only inside
//! metric evaluation.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature;

/// Metric on the integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricZ {
    /// `|n - m|`
    Std,
    /// `0` on the diagonal, `1` elsewhere.
    Disc,
}

/// Metric on the circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricT {
    /// Geodesic distance, range `[0, pi]`.
    Arc,
    /// Chordal distance `2|sin((a - b)/2)|`, range `[0, 2]`.
    Cho,
}

/// Reduce an angle to `(-pi, pi]`.
pub fn reduce_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

impl MetricZ {
    pub fn eval(self, n: i64, m: i64) -> f64 {
        match self {
            MetricZ::Std => (n - m).unsigned_abs() as f64,
            MetricZ::Disc => {
                if n == m {
                    0.0
                } else {
                    1.0
                }
            }
        }
    }

    /// `d(n, 0)^beta`; real-valued reference points are allowed for `Std`.
    pub fn potential(self, n: f64, beta: f64) -> f64 {
        match self {
            MetricZ::Std => n.abs().powf(beta),
            MetricZ::Disc => {
                if n == 0.0 {
                    0.0
                } else {
                    1.0
                }
            }
        }
    }

    /// Distance between real points (Std) or the indicator (Disc).
    pub fn eval_real(self, a: f64, b: f64) -> f64 {
        match self {
            MetricZ::Std => (a - b).abs(),
            MetricZ::Disc => {
                if a == b {
                    0.0
                } else {
                    1.0
                }
            }
        }
    }
}

impl MetricT {
    pub fn eval(self, a: f64, b: f64) -> f64 {
        let d = reduce_angle(a - b).abs();
        match self {
            MetricT::Arc => d,
            MetricT::Cho => 2.0 * (0.5 * d).sin(),
        }
    }

    /// `d(theta, 0)^alpha`, the periodic potential.
    pub fn potential(self, theta: f64, alpha: f64) -> f64 {
        let d = self.eval(theta, 0.0);
        if alpha == 2.0 {
            d * d
        } else {
            d.powf(alpha)
        }
    }

    /// Largest possible distance.
    pub fn diameter(self) -> f64 {
        match self {
            MetricT::Arc => PI,
            MetricT::Cho => 2.0,
        }
    }

    /// Fourier coefficients `v_0..=v_k_max` of `d(theta, 0)^alpha`.
    pub fn fourier_coeffs(self, alpha: f64, k_max: usize) -> Result<Vec<f64>> {
        potential_fourier_coeffs(self, alpha, k_max)
    }
}

/// `v_k = (1/2pi) * integral_{-pi}^{pi} d(theta, 0)^alpha cos(k theta) dtheta`
/// for `k = 0..=k_max`. The multiplication operator by the potential is the
/// Toeplitz matrix `v_{|m-n|}` in the number basis.
///
/// `alpha = 2` uses the analytic coefficients. Other exponents use graded
/// Gauss-Legendre quadrature, checked against a lower-order rule to `1e-12`.
pub fn potential_fourier_coeffs(m: MetricT, alpha: f64, k_max: usize) -> Result<Vec<f64>> {
    if k_max < 1 {
        return Err(Error::InvalidArgument("need at least one coefficient beyond v_0".into()));
    }
    if !(alpha >= 1.0) || !alpha.is_finite() {
        return Err(Error::InvalidArgument(format!("alpha must be >= 1, got {alpha}")));
    }
    if alpha == 2.0 {
        let mut v = vec![0.0; k_max + 1];
        match m {
            MetricT::Cho => {
                v[0] = 2.0;
                v[1] = -1.0;
            }
            MetricT::Arc => {
                v[0] = PI * PI / 3.0;
                for (k, vk) in v.iter_mut().enumerate().skip(1) {
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    *vk = 2.0 * sign / (k as f64 * k as f64);
                }
            }
        }
        return Ok(v);
    }
    let f = |theta: f64| m.potential(theta, alpha);
    let fine = quadrature::cosine_moments_with(&f, k_max, 24);
    let coarse = quadrature::cosine_moments_with(&f, k_max, 16);
    for (index, (a, b)) in fine.iter().zip(&coarse).enumerate() {
        let discrepancy = (a - b).abs();
        if discrepancy > 1e-12 {
            return Err(Error::QuadratureNotConverged { index, discrepancy });
        }
    }
    Ok(fine)
}

/// The problem family: metrics on both sides and their exponents.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricSpec {
    pub metric_z: MetricZ,
    pub metric_t: MetricT,
    /// Angle exponent.
    pub alpha: f64,
    /// Number exponent.
    pub beta: f64,
}

impl Default for MetricSpec {
    fn default() -> Self {
        MetricSpec::new(MetricZ::Std, MetricT::Cho)
    }
}

impl MetricSpec {
    /// Quadratic exponents on both sides.
    pub const fn new(metric_z: MetricZ, metric_t: MetricT) -> Self {
        MetricSpec { metric_z, metric_t, alpha: 2.0, beta: 2.0 }
    }

    pub fn with_exponents(mut self, alpha: f64, beta: f64) -> Self {
        self.alpha = alpha;
        self.beta = beta;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha >= 1.0) || !self.alpha.is_finite() {
            return Err(Error::InvalidArgument(format!("alpha must be >= 1, got {}", self.alpha)));
        }
        if !(self.beta >= 1.0) || !self.beta.is_finite() {
            return Err(Error::InvalidArgument(format!("beta must be >= 1, got {}", self.beta)));
        }
        Ok(())
    }

    /// Equidistribution value of the angle potential, the largest attainable x.
    pub fn x_max(&self) -> Result<f64> {
        Ok(potential_fourier_coeffs(self.metric_t, self.alpha, 1)?[0])
    }
}

impl fmt::Display for MetricZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MetricZ::Std => "std",
            MetricZ::Disc => "disc",
        })
    }
}

impl fmt::Display for MetricT {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MetricT::Arc => "arc",
            MetricT::Cho => "cho",
        })
    }
}

impl fmt::Display for MetricSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{} alpha={} beta={}", self.metric_z, self.metric_t, self.alpha, self.beta)
    }
}

impl FromStr for MetricZ {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "std" => Ok(MetricZ::Std),
            "disc" => Ok(MetricZ::Disc),
            _ => Err(Error::InvalidArgument(format!("unknown number metric {s:?}"))),
        }
    }
}

impl FromStr for MetricT {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "arc" => Ok(MetricT::Arc),
            "cho" | "chord" => Ok(MetricT::Cho),
            _ => Err(Error::InvalidArgument(format!("unknown angle metric {s:?}"))),
        }
    }
}
