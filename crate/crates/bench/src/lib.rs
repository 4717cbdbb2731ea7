//! Fixed inputs shared by the benchmarks.

use uncert_core::{CircleDist, IntDist, MetricSpec, MetricT, MetricZ};

pub const STD_ARC: MetricSpec = MetricSpec::new(MetricZ::Std, MetricT::Arc);
pub const STD_CHO: MetricSpec = MetricSpec::new(MetricZ::Std, MetricT::Cho);
pub const DISC_CHO: MetricSpec = MetricSpec::new(MetricZ::Disc, MetricT::Cho);

/// Discretised Gaussian on `-n..=n` centred at `c` with width `w`.
pub fn gaussian_int(n: i64, c: f64, w: f64) -> IntDist {
    IntDist::normalized((-n..=n).map(|k| (k, (-((k as f64 - c) / w).powi(2)).exp() + 1e-3))).unwrap()
}

/// Von Mises-like density on a `g`-point circle grid.
pub fn von_mises(g: usize, mean: f64, kappa: f64) -> CircleDist {
    CircleDist::from_density(g, |th| (kappa * (th - mean).cos()).exp()).unwrap()
}
