//! Variational lower bounds on the ground energy and the analytic bound
//! curves they produce.
//!
//! For a positive periodic `phi = e^f` the ground energy of `-psi'' + V psi`
//! is at least `min_theta (V - f'' - f'^2)`. Since `y + t x >= E0(t)` on the
//! uncertainty region, every such trial gives a linear lower bound, and
//! families of trials give the curves below.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::dist::golden_section;
use crate::error::{Error, Result};
use crate::metrics::{reduce_angle, MetricSpec, MetricT, MetricZ};

/// Grid used by [`lemma_energy_bound`] unless a caller picks another.
pub const DEFAULT_LEMMA_GRID: usize = 1 << 14;

/// Log-profile `f` of a trial function `phi = e^f`, with its derivatives.
pub trait TrialFunction: Sync {
    fn f(&self, theta: f64) -> f64;
    fn df(&self, theta: f64) -> f64;
    fn d2f(&self, theta: f64) -> f64;

    /// `f(-pi) = f(pi)` and `f'(-pi) = f'(pi)` up to rounding.
    fn check_periodic(&self) -> Result<()> {
        let scale = 1.0 + self.f(PI).abs() + self.df(PI).abs();
        let df = (self.f(-PI) - self.f(PI)).abs();
        let dd = (self.df(-PI) - self.df(PI)).abs();
        if df > 1e-10 * scale || dd > 1e-10 * scale {
            return Err(Error::InvalidArgument(format!(
                "trial function is not periodic: jumps {df:e} in f, {dd:e} in f'"
            )));
        }
        Ok(())
    }
}

/// `f = -(a/2) theta^2 (1 - theta^2/(2 pi^2))` on `[-pi, pi]`, extended
/// periodically. Tuned to `V = t theta^2` with `t = a^2 + 3a/pi^2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArcQuartic {
    pub a: f64,
}

impl ArcQuartic {
    /// The slope `t` at which the bound equals `a`.
    pub fn matched_t(&self) -> f64 {
        self.a * self.a + 3.0 * self.a / (PI * PI)
    }
}

impl TrialFunction for ArcQuartic {
    fn f(&self, theta: f64) -> f64 {
        let th = reduce_angle(theta);
        let s = th * th;
        -0.5 * self.a * s * (1.0 - s / (2.0 * PI * PI))
    }
    fn df(&self, theta: f64) -> f64 {
        let th = reduce_angle(theta);
        -self.a * th * (1.0 - th * th / (PI * PI))
    }
    fn d2f(&self, theta: f64) -> f64 {
        let th = reduce_angle(theta);
        -self.a * (1.0 - 3.0 * th * th / (PI * PI))
    }
}

/// `f = a cos theta`. Tuned to `V = t (2 - 2 cos theta)` with `t = a/2 + a^2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CosineTrial {
    pub a: f64,
}

impl CosineTrial {
    pub fn matched_t(&self) -> f64 {
        0.5 * self.a + self.a * self.a
    }
}

impl TrialFunction for CosineTrial {
    fn f(&self, theta: f64) -> f64 {
        self.a * theta.cos()
    }
    fn df(&self, theta: f64) -> f64 {
        -self.a * theta.sin()
    }
    fn d2f(&self, theta: f64) -> f64 {
        -self.a * theta.cos()
    }
}

/// `f = p cos theta + b cos^2 theta` with `b = -a^2/(8a + 4)` and
/// `p = a - 2b`, chosen so that at `t = g(a)` the lemma expression is
/// `a` plus a polynomial in `V` with no linear or quadratic term.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SecondOrderCosine {
    pub a: f64,
}

impl SecondOrderCosine {
    pub fn b(&self) -> f64 {
        -self.a * self.a / (8.0 * self.a + 4.0)
    }
    pub fn p(&self) -> f64 {
        self.a - 2.0 * self.b()
    }
    pub fn matched_t(&self) -> f64 {
        second_order_g(self.a)
    }
}

impl TrialFunction for SecondOrderCosine {
    fn f(&self, theta: f64) -> f64 {
        let c = theta.cos();
        self.p() * c + self.b() * c * c
    }
    fn df(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        -s * (self.p() + 2.0 * self.b() * c)
    }
    fn d2f(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        -self.p() * c + 2.0 * self.b() * (s * s - c * c)
    }
}

/// `f = sum_k (c_k cos k theta + s_k sin k theta)`, `k = 1, 2, ...`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrigPolynomial {
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

impl TrigPolynomial {
    fn terms(&self, theta: f64, deriv: u32) -> f64 {
        let mut out = 0.0;
        let n = self.cos.len().max(self.sin.len());
        for k in 1..=n {
            let kf = k as f64;
            let (s, c) = (kf * theta).sin_cos();
            let ck = self.cos.get(k - 1).copied().unwrap_or(0.0);
            let sk = self.sin.get(k - 1).copied().unwrap_or(0.0);
            out += match deriv {
                0 => ck * c + sk * s,
                1 => kf * (-ck * s + sk * c),
                _ => -kf * kf * (ck * c + sk * s),
            };
        }
        out
    }
}

impl TrialFunction for TrigPolynomial {
    fn f(&self, theta: f64) -> f64 {
        self.terms(theta, 0)
    }
    fn df(&self, theta: f64) -> f64 {
        self.terms(theta, 1)
    }
    fn d2f(&self, theta: f64) -> f64 {
        self.terms(theta, 2)
    }
}

/// `min_theta (V - f'' - f'^2)`: a lower bound on the ground energy of
/// `-psi'' + V psi`.
///
/// The minimum is taken over `grid_size` equispaced angles, then refined by
/// golden section around the three lowest grid values.
pub fn lemma_energy_bound(
    v: &(impl Fn(f64) -> f64 + ?Sized),
    trial: &(impl TrialFunction + ?Sized),
    grid_size: usize,
) -> Result<f64> {
    if grid_size < 8 {
        return Err(Error::InvalidArgument(format!("grid_size must be at least 8, got {grid_size}")));
    }
    trial.check_periodic()?;
    let e = |th: f64| {
        let d = trial.df(th);
        v(th) - trial.d2f(th) - d * d
    };
    let h = 2.0 * PI / grid_size as f64;
    let values: Vec<f64> = (0..grid_size).map(|j| e(-PI + h * j as f64)).collect();
    let mut order: Vec<usize> = (0..grid_size).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut best = values[order[0]];
    for &j in order.iter().take(3) {
        let c = -PI + h * j as f64;
        let (_, val) = golden_section(&e, c - h, c + h);
        best = best.min(val);
    }
    Ok(best)
}

/// `t V_T(theta)` for the quadratic angle deviation of `metric_t`.
pub fn angle_potential(metric_t: MetricT, t: f64) -> impl Fn(f64) -> f64 {
    move |th| t * metric_t.potential(th, 2.0)
}

fn check_x(x: f64, hi: f64, closed: bool) -> Result<()> {
    let ok = x > 0.0 && if closed { x <= hi } else { x < hi };
    if ok {
        Ok(())
    } else {
        Err(Error::OutOfRange { what: "x", value: x, lo: 0.0, hi })
    }
}

/// Judge's bound with the optimal constant, `(1 - 3x/pi^2)^2/(4x)`, for the
/// standard number / arc angle pair, `0 < x <= pi^2/3`.
pub fn judge_arc(x: f64) -> Result<f64> {
    check_x(x, PI * PI / 3.0, true)?;
    let u = 1.0 - 3.0 * x / (PI * PI);
    Ok(u * u / (4.0 * x))
}

/// Judge-type bound for the chordal angle metric, `(2 - x)^2/(16x)`, `0 < x <= 2`.
pub fn judge_cho(x: f64) -> Result<f64> {
    check_x(x, 2.0, true)?;
    Ok((2.0 - x).powi(2) / (16.0 * x))
}

/// Carruthers-Nieto bound, `(1 - x/2)^2/(4x(1 - x/4))`, `0 < x < 2`.
pub fn cn_bound(x: f64) -> Result<f64> {
    check_x(x, 2.0, false)?;
    Ok((1.0 - 0.5 * x).powi(2) / (4.0 * x * (1.0 - 0.25 * x)))
}

/// `g(a) = a(8a^2 + 5a + 2)/(8a + 4)`, the slope attached to the
/// second-order cosine trial.
pub fn second_order_g(a: f64) -> f64 {
    a * (8.0 * a * a + 5.0 * a + 2.0) / (8.0 * a + 4.0)
}

/// `g'(a) = (16a^3 + 17a^2 + 5a + 1)/(2(2a + 1)^2)`.
pub fn second_order_g_prime(a: f64) -> f64 {
    (16.0 * a.powi(3) + 17.0 * a * a + 5.0 * a + 1.0) / (2.0 * (2.0 * a + 1.0).powi(2))
}

/// Point `(1/g'(a), a - g(a)/g'(a))` of the second-order chord bound.
pub fn second_order_cho(a: f64) -> Result<(f64, f64)> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidArgument(format!("a must be positive, got {a}")));
    }
    let gp = second_order_g_prime(a);
    if !(gp > 0.0) {
        return Err(Error::InvalidArgument(format!("g'({a}) = {gp} is not positive")));
    }
    Ok((1.0 / gp, a - second_order_g(a) / gp))
}

/// The second-order chord bound as a function of `x` in `(0, 2)`: the
/// parameter with `g'(a) = 1/x` is found by bisection (`g'` increases from
/// `1/2` at `a = 0`).
pub fn second_order_cho_at(x: f64) -> Result<f64> {
    check_x(x, 2.0, false)?;
    let target = 1.0 / x;
    let (mut lo, mut hi) = (0.0, 1.0);
    while second_order_g_prime(hi) < target {
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::NotConverged("second-order parameter search".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if second_order_g_prime(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let a = 0.5 * (lo + hi);
    Ok(a - second_order_g(a) * x)
}

/// Which bound a [`BoundCurve`] carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    JudgeArc,
    JudgeCho,
    Cn,
    SecondOrderCho,
    LemmaCustom,
}

impl BoundKind {
    /// Short name used in file names and the `source` column.
    pub fn name(self) -> &'static str {
        match self {
            BoundKind::JudgeArc => "judge_arc",
            BoundKind::JudgeCho => "judge_cho",
            BoundKind::Cn => "cn",
            BoundKind::SecondOrderCho => "second_order_cho",
            BoundKind::LemmaCustom => "lemma",
        }
    }

    /// The metric pair whose tradeoff curve the bound applies to.
    pub fn spec(self) -> MetricSpec {
        match self {
            BoundKind::JudgeArc => MetricSpec::new(MetricZ::Std, MetricT::Arc),
            _ => MetricSpec::new(MetricZ::Std, MetricT::Cho),
        }
    }
}

/// A lower bound `y >= bound(x)` on the tradeoff curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCurve {
    pub kind: BoundKind,
    pub spec: MetricSpec,
    /// For [`BoundKind::LemmaCustom`]: lines `y >= e - t x` from lemma values `(t, e)`.
    pub tangents: Vec<(f64, f64)>,
}

impl BoundCurve {
    pub fn named(kind: BoundKind) -> Result<Self> {
        if kind == BoundKind::LemmaCustom {
            return Err(Error::InvalidArgument("lemma curves are built with BoundCurve::from_lemma".into()));
        }
        Ok(BoundCurve { kind, spec: kind.spec(), tangents: Vec::new() })
    }

    /// The envelope `max(0, max_i (e_i - t_i x))` of lemma bounds `e_i` at slopes `t_i`.
    pub fn from_lemma(spec: MetricSpec, tangents: Vec<(f64, f64)>) -> Result<Self> {
        spec.validate()?;
        if tangents.iter().any(|&(t, e)| !(t > 0.0) || !e.is_finite()) {
            return Err(Error::InvalidArgument("lemma tangents need t > 0 and finite energies".into()));
        }
        Ok(BoundCurve { kind: BoundKind::LemmaCustom, spec, tangents })
    }

    pub fn x_max(&self) -> Result<f64> {
        self.spec.x_max()
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        match self.kind {
            BoundKind::JudgeArc => judge_arc(x),
            BoundKind::JudgeCho => judge_cho(x),
            BoundKind::Cn => cn_bound(x),
            BoundKind::SecondOrderCho => second_order_cho_at(x),
            BoundKind::LemmaCustom => {
                check_x(x, self.x_max()?, true)?;
                Ok(self.tangents.iter().map(|&(t, e)| e - t * x).fold(0.0, f64::max))
            }
        }
    }

    /// `(x, bound(x))` at each `x` inside the domain; other abscissae are skipped.
    pub fn sample(&self, xs: &[f64]) -> Vec<(f64, f64)> {
        xs.iter().filter_map(|&x| self.eval(x).ok().map(|y| (x, y))).collect()
    }
}

/// Lemma tangents for the arc pair from the quartic trial, one per `a`.
pub fn arc_quartic_tangents(a_values: &[f64], grid_size: usize) -> Result<Vec<(f64, f64)>> {
    a_values
        .iter()
        .map(|&a| {
            let trial = ArcQuartic { a };
            let t = trial.matched_t();
            Ok((t, lemma_energy_bound(&angle_potential(MetricT::Arc, t), &trial, grid_size)?))
        })
        .collect()
}

/// One abscissa of a pairwise comparison `lower(x) <= upper(x)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DominanceRow {
    pub x: f64,
    pub lower: f64,
    pub upper: f64,
}

impl DominanceRow {
    pub fn margin(&self) -> f64 {
        self.upper - self.lower
    }
    pub fn holds(&self, slack: f64) -> bool {
        self.margin() >= -slack
    }
}

/// Compare two curves on the abscissae where both are defined.
pub fn dominance(
    lower: impl Fn(f64) -> Result<f64>,
    upper: impl Fn(f64) -> Result<f64>,
    xs: &[f64],
) -> Vec<DominanceRow> {
    xs.iter()
        .filter_map(|&x| match (lower(x), upper(x)) {
            (Ok(l), Ok(u)) => Some(DominanceRow { x, lower: l, upper: u }),
            _ => None,
        })
        .collect()
}

/// Maximal intervals of consecutive rows where `lower < upper` strictly.
pub fn dominance_regions(rows: &[DominanceRow]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut start: Option<f64> = None;
    let mut last = 0.0;
    for r in rows {
        if r.margin() > 0.0 {
            if start.is_none() {
                start = Some(r.x);
            }
            last = r.x;
        } else if let Some(s) = start.take() {
            out.push((s, last));
        }
    }
    if let Some(s) = start {
        out.push((s, last));
    }
    out
}

/// `n` equispaced abscissae strictly inside `(lo, hi)`.
pub fn interior_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (1..=n).map(|i| lo + (hi - lo) * i as f64 / (n + 1) as f64).collect()
}
