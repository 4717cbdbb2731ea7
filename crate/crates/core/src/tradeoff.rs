//! Tradeoff curves from ground states of `H(t)`.
//!
//! For slope `-t` the ground state `psi_t` gives the curve point
//! `x = <psi|d_T^alpha|psi>`, `y = <psi|d_Z^beta|psi>` with `y + t x = E0(t)`,
//! and `y >= sup_t (E0(t) - t x)` bounds every state.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::MetricSpec;
use crate::spectral::{self, SolveOptions, SpectralResult};

/// One sample of the lower boundary.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub t: f64,
    /// Angle deviation `d_alpha(sigma_Theta, 0)^alpha`.
    pub x: f64,
    /// Number deviation `d_beta(sigma_N, 0)^beta`.
    pub y: f64,
    #[serde(rename = "E0")]
    pub e0: f64,
    #[serde(rename = "E1")]
    pub e1: f64,
    pub n_max: usize,
    pub tail: f64,
    /// `(x, y)` of the first excited state at the same `t`.
    pub x1: f64,
    pub y1: f64,
}

impl CurvePoint {
    pub fn gap(&self) -> f64 {
        self.e1 - self.e0
    }
}

/// Samples of the tradeoff curve, ordered by increasing `t`, with the
/// ground states that attain them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TradeoffCurve {
    pub spec: MetricSpec,
    pub points: Vec<CurvePoint>,
    /// Ground-state coefficients per point, index `n + n_max`.
    pub states: Vec<Vec<f64>>,
}

/// `(x, y)` of a state given by its Fourier coefficients (index `n + n_max`).
pub fn state_pair(psi_hat: &[f64], spec: &MetricSpec) -> Result<(f64, f64)> {
    if psi_hat.len() % 2 != 1 {
        return Err(Error::InvalidArgument("coefficient vector must have odd length".into()));
    }
    let n_max = psi_hat.len() / 2;
    let v = spec.metric_t.fourier_coeffs(spec.alpha, (2 * n_max).max(1))?;
    let band = v.iter().rposition(|&c| c != 0.0).unwrap_or(0);
    let dim = psi_hat.len();
    let mut x = 0.0;
    for (i, a) in psi_hat.iter().enumerate() {
        if *a == 0.0 {
            continue;
        }
        let (lo, hi) = (i.saturating_sub(band), (i + band).min(dim - 1));
        let row: f64 = (lo..=hi).map(|j| v[i.abs_diff(j)] * psi_hat[j]).sum();
        x += a * row;
    }
    let y = psi_hat
        .iter()
        .enumerate()
        .map(|(i, c)| c * c * spec.metric_z.potential(i as f64 - n_max as f64, spec.beta))
        .sum();
    Ok((x, y))
}

/// `(x, y)` for a solved ground state.
pub fn variance_pair(r: &SpectralResult, spec: &MetricSpec) -> Result<(f64, f64)> {
    state_pair(&r.psi_hat, spec)
}

/// `points` values log-spaced over `[tmin, tmax]`.
pub fn log_grid(tmin: f64, tmax: f64, points: usize) -> Result<Vec<f64>> {
    if !(tmin > 0.0) || !(tmax >= tmin) || points == 0 {
        return Err(Error::InvalidArgument(format!("bad t-grid [{tmin}, {tmax}] with {points} points")));
    }
    if points == 1 {
        return Ok(vec![tmin]);
    }
    let (a, b) = (tmin.ln(), tmax.ln());
    Ok((0..points)
        .map(|i| {
            if i == 0 {
                tmin
            } else if i + 1 == points {
                tmax
            } else {
                (a + (b - a) * i as f64 / (points - 1) as f64).exp()
            }
        })
        .collect())
}

/// Default sweep grid: 200 log-spaced values of `t` in `[1e-3, 1e3]`.
pub fn default_grid() -> Vec<f64> {
    log_grid(1e-3, 1e3, 200).expect("valid default grid")
}

/// Solve at every `t` (in parallel) and collect the curve.
pub fn sweep(spec: MetricSpec, t_grid: &[f64], opts: &SolveOptions) -> Result<TradeoffCurve> {
    spec.validate()?;
    if t_grid.iter().any(|&t| !(t > 0.0)) {
        return Err(Error::InvalidArgument("t-grid must be positive".into()));
    }
    if t_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidArgument("t-grid must be sorted".into()));
    }
    let solved: Vec<Result<(CurvePoint, Vec<f64>)>> = t_grid
        .par_iter()
        .map(|&t| {
            let r = spectral::solve(spec, t, opts)?;
            let (x, y) = variance_pair(&r, &spec)?;
            let (x1, y1) = state_pair(&r.psi1_hat, &spec)?;
            let p = CurvePoint { t, x, y, e0: r.e0, e1: r.e1, n_max: r.n_max, tail: r.tail, x1, y1 };
            Ok((p, r.psi_hat))
        })
        .collect();
    let mut points = Vec::with_capacity(t_grid.len());
    let mut states = Vec::with_capacity(t_grid.len());
    for s in solved {
        let (p, psi) = s?;
        points.push(p);
        states.push(psi);
    }
    Ok(TradeoffCurve { spec, points, states })
}

impl TradeoffCurve {
    /// Largest `|y + t x - E0|` over the points.
    pub fn identity_defect(&self) -> f64 {
        self.points.iter().map(|p| (p.y + p.t * p.x - p.e0).abs()).fold(0.0, f64::max)
    }

    /// Largest violation of `x` non-increasing, `y` non-decreasing in `t`.
    pub fn monotonicity_defect(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| (w[1].x - w[0].x).max(w[0].y - w[1].y).max(0.0))
            .fold(0.0, f64::max)
    }

    /// Largest decrease of the chord slopes `dy/dx` when walking along
    /// increasing `x` (zero for a convex curve).
    pub fn convexity_defect(&self) -> f64 {
        let mut pts: Vec<(f64, f64)> = self.points.iter().map(|p| (p.x, p.y)).collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        pts.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-13);
        let slopes: Vec<f64> = pts.windows(2).map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0)).collect();
        slopes.windows(2).map(|s| (s[0] - s[1]).max(0.0)).fold(0.0, f64::max)
    }

    /// Range of sampled `x`.
    pub fn x_range(&self) -> (f64, f64) {
        let lo = self.points.iter().map(|p| p.x).fold(f64::INFINITY, f64::min);
        let hi = self.points.iter().map(|p| p.x).fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }

    /// Piecewise-linear interpolation of `y` at `x` inside the sampled range.
    /// On a convex curve the chords lie above the curve.
    pub fn interpolate_y(&self, x: f64) -> Option<f64> {
        let mut pts: Vec<(f64, f64)> = self.points.iter().map(|p| (p.x, p.y)).collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (lo, hi) = (pts.first()?.0, pts.last()?.0);
        if x < lo || x > hi {
            return None;
        }
        let k = pts.partition_point(|p| p.0 < x);
        if k == 0 {
            return Some(pts[0].1);
        }
        let (a, b) = (pts[k - 1], pts[k.min(pts.len() - 1)]);
        if b.0 == a.0 {
            return Some(a.1.min(b.1));
        }
        Some(a.1 + (b.1 - a.1) * (x - a.0) / (b.0 - a.0))
    }

    /// Ground-state overlap `<psi_i|phi>` with zero padding across truncations.
    pub fn overlap_with(&self, i: usize, other: &[f64]) -> f64 {
        overlap(&self.states[i], other)
    }
}

/// `max(0, max_t (E0(t) - t x))`, a lower bound for `y` at abscissa `x`.
pub fn legendre_lower_bound(curve: &TradeoffCurve, x: f64) -> Result<f64> {
    let v0 = curve.spec.x_max()?;
    if !(x >= 0.0 && x <= v0 * (1.0 + 1e-15)) {
        return Err(Error::OutOfRange { what: "x", value: x, lo: 0.0, hi: v0 });
    }
    Ok(curve.points.iter().map(|p| p.e0 - p.t * x).fold(0.0, f64::max))
}

/// Inner product of two coefficient vectors centred on `n = 0`.
pub fn overlap(a: &[f64], b: &[f64]) -> f64 {
    let (na, nb) = (a.len() / 2, b.len() / 2);
    let n = na.min(nb);
    (0..=2 * n).map(|k| a[na - n + k] * b[nb - n + k]).sum()
}

/// `||a - b||` with zero padding.
pub fn norm_distance(a: &[f64], b: &[f64]) -> f64 {
    let na2: f64 = a.iter().map(|v| v * v).sum();
    let nb2: f64 = b.iter().map(|v| v * v).sum();
    (na2 + nb2 - 2.0 * overlap(a, b)).max(0.0).sqrt()
}

/// Distance between the phase orbits of two unit vectors.
pub fn orbit_distance(a: &[f64], b: &[f64]) -> f64 {
    (2.0 - 2.0 * overlap(a, b).abs()).max(0.0).sqrt()
}

fn check_same_grid(a: &TradeoffCurve, b: &TradeoffCurve) -> Result<()> {
    if a.points.len() != b.points.len() {
        return Err(Error::GridMismatch { left: a.points.len(), right: b.points.len() });
    }
    for (p, q) in a.points.iter().zip(&b.points) {
        if (p.t - q.t).abs() > 1e-12 * p.t.abs() {
            return Err(Error::InvalidArgument(format!("t-grids differ: {} vs {}", p.t, q.t)));
        }
    }
    Ok(())
}

/// Pointwise comparison of two state families on the same `t`-grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyComparison {
    /// `max_t ||psi_a(t) - psi_b(t)||`.
    pub max_norm_distance: f64,
    pub argmax_t: f64,
    /// `min_t |<psi_a(t)|psi_b(t)>|`.
    pub min_overlap: f64,
    /// `min_t |<psi_a(t)|psi_b(t)>|^2`.
    pub min_fidelity: f64,
}

pub fn compare_families(a: &TradeoffCurve, b: &TradeoffCurve) -> Result<FamilyComparison> {
    check_same_grid(a, b)?;
    let mut out =
        FamilyComparison { max_norm_distance: 0.0, argmax_t: f64::NAN, min_overlap: 1.0, min_fidelity: 1.0 };
    for (i, p) in a.points.iter().enumerate() {
        let d = norm_distance(&a.states[i], &b.states[i]);
        if d > out.max_norm_distance || out.argmax_t.is_nan() {
            out.max_norm_distance = d;
            out.argmax_t = p.t;
        }
        let o = overlap(&a.states[i], &b.states[i]).abs();
        out.min_overlap = out.min_overlap.min(o);
        out.min_fidelity = out.min_fidelity.min(o * o);
    }
    Ok(out)
}

/// `max_t ||psi_a(t) - psi_b(t)||` under the positive-sum sign convention.
pub fn family_norm_distance(a: &TradeoffCurve, b: &TradeoffCurve) -> Result<f64> {
    Ok(compare_families(a, b)?.max_norm_distance)
}

/// Symmetric Hausdorff distance between the sampled state sets, each state
/// taken up to a phase.
pub fn hausdorff_orbit_distance(a: &TradeoffCurve, b: &TradeoffCurve) -> f64 {
    let one_sided = |p: &TradeoffCurve, q: &TradeoffCurve| -> f64 {
        p.states
            .par_iter()
            .map(|s| q.states.iter().map(|r| orbit_distance(s, r)).fold(f64::INFINITY, f64::min))
            .reduce(|| 0.0, f64::max)
    };
    one_sided(a, b).max(one_sided(b, a))
}

/// Hausdorff distance at the finest grid with the change from the previous
/// (nested) grid as error bar.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HausdorffEstimate {
    pub value: f64,
    pub coarse_value: f64,
    pub error_bar: f64,
    pub points: usize,
}

/// Hausdorff distance between two families swept over a log grid of `points`
/// values, refined once by inserting midpoints.
pub fn hausdorff_with_refinement(
    spec_a: MetricSpec,
    spec_b: MetricSpec,
    tmin: f64,
    tmax: f64,
    points: usize,
    opts: &SolveOptions,
) -> Result<HausdorffEstimate> {
    let coarse = log_grid(tmin, tmax, points)?;
    let fine = log_grid(tmin, tmax, 2 * points - 1)?;
    let (ca, cb) = (sweep(spec_a, &coarse, opts)?, sweep(spec_b, &coarse, opts)?);
    let (fa, fb) = (sweep(spec_a, &fine, opts)?, sweep(spec_b, &fine, opts)?);
    let coarse_value = hausdorff_orbit_distance(&ca, &cb);
    let value = hausdorff_orbit_distance(&fa, &fb);
    Ok(HausdorffEstimate { value, coarse_value, error_bar: (coarse_value - value).abs(), points: fine.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{MetricT, MetricZ};
    use std::f64::consts::PI;

    const STD_CHO: MetricSpec = MetricSpec::new(MetricZ::Std, MetricT::Cho);
    const DISC_CHO: MetricSpec = MetricSpec::new(MetricZ::Disc, MetricT::Cho);

    #[test]
    fn log_grid_endpoints() {
        let g = log_grid(1e-3, 1e3, 7).unwrap();
        assert_eq!(g.len(), 7);
        assert_eq!(g[0], 1e-3);
        assert_eq!(g[6], 1e3);
        assert!((g[3] - 1.0).abs() < 1e-14);
        assert_eq!(log_grid(2.0, 5.0, 1).unwrap(), vec![2.0]);
        assert!(log_grid(0.0, 1.0, 3).is_err());
    }

    #[test]
    fn singleton_sweep_identity() {
        let c = sweep(STD_CHO, &[1.0], &SolveOptions::default()).unwrap();
        let p = c.points[0];
        assert!((p.y + p.x - p.e0).abs() < 1e-12);
    }

    #[test]
    fn sweep_shape() {
        let grid = log_grid(1e-2, 1e2, 25).unwrap();
        let c = sweep(STD_CHO, &grid, &SolveOptions::default()).unwrap();
        assert!(c.identity_defect() < 1e-9);
        assert!(c.monotonicity_defect() == 0.0);
        assert!(c.convexity_defect() < 1e-9);
        assert!(sweep(STD_CHO, &[2.0, 1.0], &SolveOptions::default()).is_err());
    }

    #[test]
    fn legendre_bound_examples() {
        let grid = log_grid(1e-3, 1e3, 60).unwrap();
        let c = sweep(DISC_CHO, &grid, &SolveOptions::default()).unwrap();
        assert_eq!(legendre_lower_bound(&c, 2.0).unwrap(), 0.0);
        let x = 2.0 - 2f64.sqrt();
        let lb = legendre_lower_bound(&c, x).unwrap();
        let exact = 1.0 - 2f64.sqrt() / 2.0;
        assert!(lb <= exact + 1e-12 && lb > exact - 5e-3, "{lb}");
        assert!(legendre_lower_bound(&c, 2.5).is_err());
        // below the chord through neighbouring samples
        let (p, q) = (c.points[30], c.points[31]);
        let xm = 0.5 * (p.x + q.x);
        assert!(legendre_lower_bound(&c, xm).unwrap() <= 0.5 * (p.y + q.y));
    }

    #[test]
    fn family_distance_of_identical_curves() {
        let grid = log_grid(0.1, 10.0, 5).unwrap();
        let c = sweep(STD_CHO, &grid, &SolveOptions::default()).unwrap();
        assert_eq!(family_norm_distance(&c, &c).unwrap(), 0.0);
        assert!(hausdorff_orbit_distance(&c, &c) < 1e-7);
    }

    #[test]
    fn padding_across_truncations() {
        let a = vec![0.0, 1.0, 0.0];
        let b = vec![0.0, 0.0, 0.6, 0.8, 0.0];
        assert!((overlap(&a, &b) - 0.6).abs() < 1e-15);
        assert!((norm_distance(&a, &b) - (0.8f64.powi(2) + 0.4f64.powi(2)).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn small_t_endpoint_is_equidistribution() {
        // x = pi^2/3 - 2t sum_{n != 0} v_n^2/n^2 + O(t^2), the sum being 8 zeta(6)
        let t = 1e-5;
        let c = sweep(MetricSpec::new(MetricZ::Std, MetricT::Arc), &[t], &SolveOptions::default()).unwrap();
        let zeta6 = PI.powi(6) / 945.0;
        assert!((c.points[0].x - (PI * PI / 3.0 - 16.0 * zeta6 * t)).abs() < 1e-7);
        assert!(c.points[0].y < 1e-8);
    }
}
