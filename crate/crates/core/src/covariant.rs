//! Margins of covariant phase-space observables and their error measures.
//!
//! A covariant observable generated by a state `sigma` has margins
//! `rho_Theta * sigma_Theta` and `rho_N * sigma_N`: the ideal distributions
//! with independent noise added. The worst-case transport error against the
//! ideal observable and the calibration error on nearly sharp probes both
//! equal `deviation(sigma_margin, 0)`; the estimates here approach that value
//! from probe families and bracket it with the analytic coupling bound.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::{CircleDist, IntDist};
use crate::error::{Error, Result};
use crate::metrics::{MetricSpec, MetricT, MetricZ};
use crate::spectral::SpectralResult;

/// Circle grid used for angle margins unless a caller picks another.
pub const DEFAULT_NOISE_GRID: usize = 128;

/// Angle and number margins of the generating state.
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseMargins {
    pub sigma_theta: CircleDist,
    pub sigma_n: IntDist,
}

impl NoiseMargins {
    /// Margins of a solved ground state, the angle margin sampled on
    /// `grid_size` points.
    pub fn from_state(r: &SpectralResult, grid_size: usize) -> Result<Self> {
        Ok(NoiseMargins { sigma_theta: r.angle_distribution(grid_size)?, sigma_n: r.number_distribution()? })
    }

    /// Noiseless margins.
    pub fn sharp(grid_size: usize) -> Self {
        NoiseMargins { sigma_theta: CircleDist::point(grid_size, 0), sigma_n: IntDist::point(0) }
    }

    /// `(deviation(sigma_Theta, 0)^alpha, deviation(sigma_N, 0)^beta)`.
    pub fn deviation_pair(&self, spec: &MetricSpec) -> (f64, f64) {
        (
            self.sigma_theta.deviation_pow(spec.metric_t, spec.alpha, 0.0),
            self.sigma_n.deviation_pow(spec.metric_z, spec.beta, 0.0),
        )
    }
}

/// Margins `(rho_Theta * sigma_Theta, rho_N * sigma_N)` of the covariant
/// observable on a state with margins `rho_theta`, `rho_n`.
pub fn joint_margins(
    rho_theta: &CircleDist,
    rho_n: &IntDist,
    noise: &NoiseMargins,
) -> Result<(CircleDist, IntDist)> {
    Ok((rho_theta.convolve(&noise.sigma_theta)?, rho_n.convolve(&noise.sigma_n)))
}

/// A space of margins (integers or the circle grid) with its metric.
pub trait Margin: Sized + Clone + Send + Sync {
    type Metric: Copy + Send + Sync;

    fn add_noise(&self, noise: &Self) -> Result<Self>;
    fn transport(&self, other: &Self, metric: Self::Metric, alpha: f64) -> Result<f64>;
    /// `deviation(self, 0)`.
    fn deviation_at_zero(&self, metric: Self::Metric, alpha: f64) -> f64;
    /// A probe centred at 0 with `deviation(probe, 0) = eps` (or the largest
    /// attainable value below it), shaped like `noise`'s space.
    fn peaked_probe(like: &Self, metric: Self::Metric, alpha: f64, eps: f64) -> Result<Self>;
}

impl Margin for IntDist {
    type Metric = MetricZ;

    fn add_noise(&self, noise: &Self) -> Result<Self> {
        Ok(self.convolve(noise))
    }
    fn transport(&self, other: &Self, metric: MetricZ, alpha: f64) -> Result<f64> {
        Ok(self.transport_distance(other, metric, alpha)?.distance)
    }
    fn deviation_at_zero(&self, metric: MetricZ, alpha: f64) -> f64 {
        self.deviation(metric, alpha, 0.0)
    }
    /// `(1 - w) delta_0 + (w/2)(delta_1 + delta_-1)` with `w = eps^alpha`
    /// capped at `1`; both metrics have `d(+-1, 0) = 1`.
    fn peaked_probe(_: &Self, _: MetricZ, alpha: f64, eps: f64) -> Result<Self> {
        if !(eps >= 0.0) {
            return Err(Error::InvalidArgument(format!("eps must be non-negative, got {eps}")));
        }
        let w = eps.powf(alpha).min(1.0);
        if w == 0.0 {
            return Ok(IntDist::point(0));
        }
        IntDist::from_pairs([(-1, 0.5 * w), (0, 1.0 - w), (1, 0.5 * w)])
    }
}

impl Margin for CircleDist {
    type Metric = MetricT;

    fn add_noise(&self, noise: &Self) -> Result<Self> {
        self.convolve(noise)
    }
    fn transport(&self, other: &Self, metric: MetricT, alpha: f64) -> Result<f64> {
        Ok(self.transport_distance(other, metric, alpha)?.distance)
    }
    fn deviation_at_zero(&self, metric: MetricT, alpha: f64) -> f64 {
        self.deviation(metric, alpha, 0.0)
    }
    /// Grid weights `((1 + cos theta)/2)^p`, `p` found by bisection in `ln p`.
    fn peaked_probe(like: &Self, metric: MetricT, alpha: f64, eps: f64) -> Result<Self> {
        peaked_circle_probe(like.grid_size(), metric, alpha, eps)
    }
}

/// Weights below this fraction of the peak are dropped from circle probes.
const PROBE_CUTOFF: f64 = 1e-18;

fn power_cosine(grid_size: usize, p: f64) -> Result<CircleDist> {
    let atoms: Vec<f64> = (0..grid_size)
        .map(|j| {
            let c = 0.5 * (1.0 + crate::dist::grid_angle(grid_size, j).cos());
            let w = if c > 0.0 { (p * c.ln()).exp() } else if p == 0.0 { 1.0 } else { 0.0 };
            if w < PROBE_CUTOFF {
                0.0
            } else {
                w
            }
        })
        .collect();
    CircleDist::normalized(atoms)
}

/// Probe `((1 + cos theta)/2)^p` on the grid with deviation `eps` about 0.
pub fn peaked_circle_probe(grid_size: usize, metric: MetricT, alpha: f64, eps: f64) -> Result<CircleDist> {
    if !(eps >= 0.0) {
        return Err(Error::InvalidArgument(format!("eps must be non-negative, got {eps}")));
    }
    let dev = |p: f64| power_cosine(grid_size, p).map(|d| d.deviation(metric, alpha, 0.0));
    if eps >= dev(0.0)? {
        return power_cosine(grid_size, 0.0);
    }
    let (mut lo, mut hi) = (-10.0f64, 10.0f64);
    while dev(hi.exp())? > eps {
        hi += 10.0;
        if hi > 200.0 {
            return Ok(CircleDist::point(grid_size, 0));
        }
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if dev(mid.exp())? > eps {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    power_cosine(grid_size, hi.exp())
}

/// `max_rho transport(rho * sigma, rho)` over the probes; never exceeds
/// `deviation(sigma, 0)`.
pub fn metric_error_estimate<D: Margin>(noise: &D, metric: D::Metric, alpha: f64, probes: &[D]) -> Result<f64> {
    let values: Vec<Result<f64>> =
        probes.par_iter().map(|rho| rho.add_noise(noise)?.transport(rho, metric, alpha)).collect();
    let mut best = 0.0f64;
    for v in values {
        best = best.max(v?);
    }
    Ok(best)
}

/// Peaked probes for a schedule of deviations.
pub fn probe_family<D: Margin>(like: &D, metric: D::Metric, alpha: f64, eps_schedule: &[f64]) -> Result<Vec<D>> {
    eps_schedule.iter().map(|&e| D::peaked_probe(like, metric, alpha, e)).collect()
}

/// Calibration values per `eps` and their extrapolation to `eps = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationEstimate {
    pub eps: Vec<f64>,
    /// `deviation(rho_eps * sigma, 0)` for the probe of deviation `eps`.
    pub values: Vec<f64>,
    /// Actual deviation of each probe (at most `eps`).
    pub probe_deviation: Vec<f64>,
    pub limit: f64,
    pub error_bar: f64,
}

fn extrapolate(u: (f64, f64), w: (f64, f64)) -> f64 {
    // w linear in u through both points, evaluated at u = 0
    if u.0 == u.1 {
        w.1
    } else {
        w.1 - u.1 * (w.0 - w.1) / (u.0 - u.1)
    }
}

/// Calibration error on probes of deviation at most `eps`, for a decreasing
/// schedule. The `eps -> 0` value is a linear extrapolation of
/// `value^alpha` in `probe_deviation^alpha` over the last two entries;
/// the error bar is the spread against the last value and against the
/// extrapolation from the preceding pair.
pub fn calibration_error_estimate<D: Margin>(
    noise: &D,
    metric: D::Metric,
    alpha: f64,
    eps_schedule: &[f64],
) -> Result<CalibrationEstimate> {
    if eps_schedule.is_empty() {
        return Err(Error::InvalidArgument("empty eps schedule".into()));
    }
    if eps_schedule.windows(2).any(|w| !(w[1] < w[0])) || eps_schedule.iter().any(|e| !(*e >= 0.0)) {
        return Err(Error::InvalidArgument("eps schedule must be non-negative and strictly decreasing".into()));
    }
    let probes = probe_family(noise, metric, alpha, eps_schedule)?;
    let rows: Vec<Result<(f64, f64)>> = probes
        .par_iter()
        .map(|rho| Ok((rho.add_noise(noise)?.deviation_at_zero(metric, alpha), rho.deviation_at_zero(metric, alpha))))
        .collect();
    let mut values = Vec::with_capacity(rows.len());
    let mut probe_deviation = Vec::with_capacity(rows.len());
    for r in rows {
        let (v, d) = r?;
        values.push(v);
        probe_deviation.push(d);
    }
    let k = values.len();
    let last = values[k - 1];
    let (limit, error_bar) = if probe_deviation[k - 1] == 0.0 || k == 1 {
        (last, 0.0)
    } else {
        let u: Vec<f64> = probe_deviation.iter().map(|d| d.powf(alpha)).collect();
        let w: Vec<f64> = values.iter().map(|v| v.powf(alpha)).collect();
        let w0 = extrapolate((u[k - 2], u[k - 1]), (w[k - 2], w[k - 1])).max(0.0);
        let limit = w0.powf(1.0 / alpha);
        let mut bar = (limit - last).abs();
        if k >= 3 {
            let prev = extrapolate((u[k - 3], u[k - 2]), (w[k - 3], w[k - 2])).max(0.0).powf(1.0 / alpha);
            bar = bar.max((limit - prev).abs());
        }
        (limit, bar)
    };
    Ok(CalibrationEstimate { eps: eps_schedule.to_vec(), values, probe_deviation, limit, error_bar })
}

/// Default decreasing schedule for circle probes.
pub fn default_eps_schedule() -> Vec<f64> {
    vec![0.5, 0.25, 0.1, 0.05, 0.01, 0.001, 1e-4]
}

/// Errors of the covariant observable generated by `noise`, both margins.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub deviation_theta: f64,
    pub deviation_n: f64,
    pub metric_error_theta: f64,
    pub metric_error_n: f64,
    pub calibration_theta: CalibrationEstimate,
    pub calibration_n: CalibrationEstimate,
}

/// Metric and calibration errors of both margins, probes from `eps_schedule`
/// (a trailing `0` gives sharp probes).
pub fn error_report(noise: &NoiseMargins, spec: &MetricSpec, eps_schedule: &[f64]) -> Result<ErrorReport> {
    spec.validate()?;
    let (mt, mz) = (spec.metric_t, spec.metric_z);
    let probes_t = probe_family(&noise.sigma_theta, mt, spec.alpha, eps_schedule)?;
    let probes_n: Vec<IntDist> = (-2..=2).map(IntDist::point).collect();
    Ok(ErrorReport {
        deviation_theta: noise.sigma_theta.deviation_at_zero(mt, spec.alpha),
        deviation_n: noise.sigma_n.deviation_at_zero(mz, spec.beta),
        metric_error_theta: metric_error_estimate(&noise.sigma_theta, mt, spec.alpha, &probes_t)?,
        metric_error_n: metric_error_estimate(&noise.sigma_n, mz, spec.beta, &probes_n)?,
        calibration_theta: calibration_error_estimate(&noise.sigma_theta, mt, spec.alpha, eps_schedule)?,
        calibration_n: calibration_error_estimate(&noise.sigma_n, mz, spec.beta, &[0.5, 0.25, 0.0])?,
    })
}
