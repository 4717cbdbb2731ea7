//! The truncated Hamiltonian `H(t) = d_Z(N)^beta + t d_T(Theta)^alpha` in the
//! number basis `n in [-n_max, n_max]`, and its two lowest eigenpairs.
//!
//! Both potentials are even, so `H` commutes with `n -> -n` and splits into an
//! even block (basis `e_0`, `(e_n + e_-n)/sqrt 2`) and an odd block
//! (`(e_n - e_-n)/sqrt 2`). When the angle potential has only `v_0, v_1`
//! (chordal metric, `alpha = 2`) the blocks are tridiagonal and are solved
//! directly; otherwise each block is reduced by Householder reflections.
//! Eigenvalues come from Sturm-count bisection, vectors from inverse
//! iteration, and the ground energy is refined by the Rayleigh quotient of
//! the full matrix.

mod householder;
mod tridiag;

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::dist::{CircleDist, IntDist};
use crate::error::{Error, Result};
use crate::metrics::MetricSpec;

use householder::Tridiagonalization;
use tridiag::SymTridiag;

/// Default truncation, enough for most of the standard-metric sweeps.
pub const DEFAULT_N_MAX: usize = 80;
/// Escalation cap for dense blocks.
pub const DEFAULT_CAP: usize = 1280;
/// Escalation cap when the blocks are tridiagonal.
pub const DEFAULT_BANDED_CAP: usize = 81920;
/// Default bound on the tail of the ground vector.
pub const DEFAULT_TAIL_TOL: f64 = 1e-10;
/// Gap below which the ground state is reported as near-degenerate.
pub const DEGENERACY_GAP: f64 = 1e-10;
/// Grid used for the position-space positivity diagnostic.
pub const POSITIVITY_GRID: usize = 512;

/// `H(t)` restricted to `|n| <= n_max`.
#[derive(Clone, Debug)]
pub struct TruncatedHamiltonian {
    pub n_max: usize,
    pub t: f64,
    pub spec: MetricSpec,
    /// `d_Z(n, 0)^beta` for `n = -n_max..=n_max`.
    pub number_potential: Vec<f64>,
    /// `v_0..=v_{2 n_max}`.
    pub angle_coeffs: Vec<f64>,
}

/// Build `H(t)` for `|n| <= n_max`.
pub fn build_hamiltonian(spec: MetricSpec, t: f64, n_max: usize) -> Result<TruncatedHamiltonian> {
    spec.validate()?;
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidArgument(format!("t must be positive, got {t}")));
    }
    if n_max < 8 {
        return Err(Error::InvalidArgument(format!("n_max must be at least 8, got {n_max}")));
    }
    let n = n_max as i64;
    let number_potential = (-n..=n).map(|k| spec.metric_z.potential(k as f64, spec.beta)).collect();
    let angle_coeffs = spec.metric_t.fourier_coeffs(spec.alpha, 2 * n_max)?;
    Ok(TruncatedHamiltonian { n_max, t, spec, number_potential, angle_coeffs })
}

impl TruncatedHamiltonian {
    pub fn dim(&self) -> usize {
        2 * self.n_max + 1
    }

    /// `H_{mn}` for `m, n in [-n_max, n_max]`.
    pub fn entry(&self, m: i64, n: i64) -> f64 {
        let k = (m - n).unsigned_abs() as usize;
        let d = if m == n { self.number_potential[(n + self.n_max as i64) as usize] } else { 0.0 };
        d + self.t * self.angle_coeffs[k]
    }

    /// Dense row-major matrix, rows and columns ordered `-n_max..=n_max`.
    pub fn matrix(&self) -> Vec<f64> {
        let dim = self.dim();
        let n = self.n_max as i64;
        let mut a = vec![0.0; dim * dim];
        for (i, m) in (-n..=n).enumerate() {
            for (j, k) in (-n..=n).enumerate() {
                a[i * dim + j] = self.entry(m, k);
            }
        }
        a
    }

    /// `true` when `v_k = 0` for all `k >= 2`.
    pub fn is_tridiagonal(&self) -> bool {
        self.angle_coeffs[2..].iter().all(|&v| v == 0.0)
    }

    /// `H psi` for a vector indexed `-n_max..=n_max`.
    pub fn apply(&self, psi: &[f64]) -> Vec<f64> {
        let dim = self.dim();
        let t = self.t;
        let v = &self.angle_coeffs;
        let mut out: Vec<f64> = (0..dim).map(|i| self.number_potential[i] * psi[i]).collect();
        if self.is_tridiagonal() {
            for i in 0..dim {
                let mut s = v[0] * psi[i];
                if i > 0 {
                    s += v[1] * psi[i - 1];
                }
                if i + 1 < dim {
                    s += v[1] * psi[i + 1];
                }
                out[i] += t * s;
            }
        } else {
            for (i, o) in out.iter_mut().enumerate() {
                let s: f64 = psi.iter().enumerate().map(|(j, p)| v[i.abs_diff(j)] * p).sum();
                *o += t * s;
            }
        }
        out
    }

    fn diag(&self, n: usize) -> f64 {
        self.number_potential[self.n_max + n]
    }

    /// Even-parity block, size `n_max + 1`.
    fn even_block(&self) -> Vec<f64> {
        let nn = self.n_max + 1;
        let v = &self.angle_coeffs;
        let t = self.t;
        let mut a = vec![0.0; nn * nn];
        a[0] = self.diag(0) + t * v[0];
        for n in 1..nn {
            a[n] = SQRT_2 * t * v[n];
            a[n * nn] = a[n];
        }
        for m in 1..nn {
            for n in 1..nn {
                let mut h = t * (v[m.abs_diff(n)] + v[m + n]);
                if m == n {
                    h += self.diag(n);
                }
                a[m * nn + n] = h;
            }
        }
        a
    }

    /// Odd-parity block, size `n_max`; row `i` is `n = i + 1`.
    fn odd_block(&self) -> Vec<f64> {
        let nn = self.n_max;
        let v = &self.angle_coeffs;
        let t = self.t;
        let mut a = vec![0.0; nn * nn];
        for i in 0..nn {
            for j in 0..nn {
                let (m, n) = (i + 1, j + 1);
                let mut h = t * (v[m.abs_diff(n)] - v[m + n]);
                if m == n {
                    h += self.diag(n);
                }
                a[i * nn + j] = h;
            }
        }
        a
    }

    fn even_tridiag(&self) -> SymTridiag {
        let nn = self.n_max + 1;
        let (v0, v1, t) = (self.angle_coeffs[0], self.angle_coeffs[1], self.t);
        let diag = (0..nn).map(|n| self.diag(n) + t * v0).collect();
        let mut off = vec![t * v1; nn - 1];
        off[0] = SQRT_2 * t * v1;
        SymTridiag { diag, off }
    }

    fn odd_tridiag(&self) -> SymTridiag {
        let nn = self.n_max;
        let (v0, v1, t) = (self.angle_coeffs[0], self.angle_coeffs[1], self.t);
        SymTridiag { diag: (1..=nn).map(|n| self.diag(n) + t * v0).collect(), off: vec![t * v1; nn - 1] }
    }
}

/// One parity block ready for eigenvalue extraction.
enum Block {
    Tridiagonal(SymTridiag),
    Reduced(Tridiagonalization),
}

impl Block {
    fn tridiag(&self) -> &SymTridiag {
        match self {
            Block::Tridiagonal(t) => t,
            Block::Reduced(r) => &r.t,
        }
    }

    fn vector(&self, lambda: f64) -> Vec<f64> {
        let z = self.tridiag().eigenvector(lambda);
        match self {
            Block::Tridiagonal(_) => z,
            Block::Reduced(r) => r.back_transform(z),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Parity {
    Even,
    Odd,
}

/// Ground and first excited states of a truncated Hamiltonian.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralResult {
    #[serde(rename = "E0")]
    pub e0: f64,
    #[serde(rename = "E1")]
    pub e1: f64,
    /// Ground-state Fourier coefficients, index `n + n_max`; real, unit norm,
    /// positive sum.
    pub psi_hat: Vec<f64>,
    /// First excited state, same layout; sign fixed by its largest component.
    pub psi1_hat: Vec<f64>,
    /// `max |psi_hat_n|` over `|n| >= n_max - 2`.
    pub tail: f64,
    pub n_max: usize,
    pub t: f64,
    pub spec: MetricSpec,
    /// `||H psi - E0 psi||`.
    pub residual: f64,
    /// `min_theta sqrt(2 pi) psi(theta)` on the positivity grid.
    pub position_min: f64,
}

impl SpectralResult {
    pub fn gap(&self) -> f64 {
        self.e1 - self.e0
    }

    /// `psi_hat_n`; zero outside the truncation.
    pub fn coeff(&self, n: i64) -> f64 {
        if n.unsigned_abs() as usize > self.n_max {
            0.0
        } else {
            self.psi_hat[(n + self.n_max as i64) as usize]
        }
    }

    pub fn truncation_adequate(&self, tail_tol: f64) -> bool {
        truncation_adequate(self, tail_tol)
    }

    /// `sqrt(2 pi) psi(theta)` for the even ground state.
    pub fn position_value(&self, theta: f64) -> f64 {
        position_value(&self.psi_hat, self.n_max, theta)
    }

    /// Number distribution `|psi_hat_n|^2`.
    pub fn number_distribution(&self) -> Result<IntDist> {
        let n = self.n_max as i64;
        IntDist::normalized((-n..=n).zip(self.psi_hat.iter().map(|c| c * c)))
    }

    /// Angle distribution `|psi(theta)|^2` sampled on a grid.
    pub fn angle_distribution(&self, grid_size: usize) -> Result<CircleDist> {
        CircleDist::from_density(grid_size, |th| self.position_value(th).powi(2))
    }
}

/// `sum_n c_n e^{i n theta}` for real coefficients with `c_n = c_{-n}`.
pub(crate) fn position_value(c: &[f64], n_max: usize, theta: f64) -> f64 {
    // cos(n theta) by complex rotation, resynchronised every 64 steps
    let (s1, c1) = theta.sin_cos();
    let (mut sn, mut cn) = (0.0f64, 1.0f64);
    let mut s = c[n_max];
    for n in 1..=n_max {
        if n % 64 == 0 {
            (sn, cn) = (n as f64 * theta).sin_cos();
        } else {
            (sn, cn) = (sn * c1 + cn * s1, cn * c1 - sn * s1);
        }
        s += (c[n_max + n] + c[n_max - n]) * cn;
    }
    s
}

/// True iff the tail of the ground vector is at most `tail_tol`.
pub fn truncation_adequate(r: &SpectralResult, tail_tol: f64) -> bool {
    r.tail <= tail_tol
}

/// Lower bound `(E1 - E_phi)/(E1 - E0)` on the ground-state fidelity
/// `|<phi|psi>|^2` of any unit vector with energy `E_phi`.
pub fn fidelity_floor(e0: f64, e1: f64, e_phi: f64) -> Result<f64> {
    if !(e1 > e0) {
        return Err(Error::InvalidArgument(format!("need E0 < E1, got {e0} and {e1}")));
    }
    if !(e_phi >= e0 && e_phi < e1) {
        return Err(Error::OutOfRange { what: "E_phi", value: e_phi, lo: e0, hi: e1 });
    }
    Ok((e1 - e_phi) / (e1 - e0))
}

/// Two lowest eigenpairs of `h`; the residual of the ground pair must be at
/// most `tol`.
pub fn ground_and_first(h: &TruncatedHamiltonian, tol: f64) -> Result<SpectralResult> {
    let (even, odd) = if h.is_tridiagonal() {
        (Block::Tridiagonal(h.even_tridiag()), Block::Tridiagonal(h.odd_tridiag()))
    } else {
        (
            Block::Reduced(Tridiagonalization::new(h.even_block(), h.n_max + 1)),
            Block::Reduced(Tridiagonalization::new(h.odd_block(), h.n_max)),
        )
    };
    let mut cands = [
        (even.tridiag().eigenvalue(0), Parity::Even),
        (even.tridiag().eigenvalue(1), Parity::Even),
        (odd.tridiag().eigenvalue(0), Parity::Odd),
    ];
    cands.sort_by(|a, b| a.0.total_cmp(&b.0));
    let ((l0, p0), (l1, p1)) = (cands[0], cands[1]);
    let gap = l1 - l0;
    if !(gap >= DEGENERACY_GAP) {
        return Err(Error::NearDegenerate { gap });
    }

    let expand = |lambda: f64, parity: Parity| -> Vec<f64> {
        let block = if parity == Parity::Even { &even } else { &odd };
        let y = block.vector(lambda);
        let nm = h.n_max;
        let mut full = vec![0.0; 2 * nm + 1];
        match parity {
            Parity::Even => {
                full[nm] = y[0];
                for n in 1..=nm {
                    full[nm + n] = y[n] / SQRT_2;
                    full[nm - n] = y[n] / SQRT_2;
                }
            }
            Parity::Odd => {
                for n in 1..=nm {
                    full[nm + n] = y[n - 1] / SQRT_2;
                    full[nm - n] = -y[n - 1] / SQRT_2;
                }
            }
        }
        normalize(&mut full);
        full
    };

    let mut psi = expand(l0, p0);
    let sum: f64 = psi.iter().sum();
    if sum < 0.0 {
        psi.iter_mut().for_each(|c| *c = -*c);
    }
    let mut psi1 = expand(l1, p1);
    let lead = psi1.iter().copied().fold(0.0f64, |a, c| if c.abs() > a.abs() { c } else { a });
    if lead < 0.0 {
        psi1.iter_mut().for_each(|c| *c = -*c);
    }

    let hpsi = h.apply(&psi);
    let e0 = dot(&psi, &hpsi);
    let residual = hpsi.iter().zip(&psi).map(|(a, b)| (a - e0 * b).powi(2)).sum::<f64>().sqrt();
    if !(residual <= tol) {
        return Err(Error::NotConverged(format!(
            "ground-state residual {residual:e} exceeds {tol:e} at t = {}, n_max = {}",
            h.t, h.n_max
        )));
    }
    let hpsi1 = h.apply(&psi1);
    let e1 = dot(&psi1, &hpsi1);

    let nm = h.n_max;
    let tail = psi
        .iter()
        .enumerate()
        .filter(|(i, _)| i.abs_diff(nm) + 2 >= nm)
        .map(|(_, c)| c.abs())
        .fold(0.0, f64::max);
    let position_min = (0..POSITIVITY_GRID)
        .map(|j| position_value(&psi, nm, -PI + 2.0 * PI * j as f64 / POSITIVITY_GRID as f64))
        .fold(f64::INFINITY, f64::min);

    Ok(SpectralResult {
        e0,
        e1,
        psi_hat: psi,
        psi1_hat: psi1,
        tail,
        n_max: nm,
        t: h.t,
        spec: h.spec,
        residual,
        position_min,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) {
    let n = dot(v, v).sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
}

/// Truncation and tolerance settings for [`solve`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    /// Starting truncation.
    pub n_max: usize,
    /// Escalation cap for dense (Householder) blocks.
    pub cap: usize,
    /// Escalation cap for tridiagonal blocks.
    pub banded_cap: usize,
    pub tail_tol: f64,
    /// Absolute bound on the ground-state residual.
    pub residual_tol: f64,
    /// Keep doubling `n_max` until the tail is below `tail_tol`.
    pub escalate: bool,
    /// Fail when the cap is reached without an adequate tail; otherwise the
    /// result at the cap is returned with its tail.
    pub require_certificate: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            n_max: DEFAULT_N_MAX,
            cap: DEFAULT_CAP,
            banded_cap: DEFAULT_BANDED_CAP,
            tail_tol: DEFAULT_TAIL_TOL,
            residual_tol: 1e-8,
            escalate: true,
            require_certificate: true,
        }
    }
}

impl SolveOptions {
    /// Single solve at a fixed truncation, no certificate required.
    pub fn fixed(n_max: usize) -> Self {
        SolveOptions { n_max, escalate: false, require_certificate: false, ..Self::default() }
    }
}

/// Solve at `t`, doubling `n_max` until the truncation is adequate.
pub fn solve(spec: MetricSpec, t: f64, opts: &SolveOptions) -> Result<SpectralResult> {
    let mut n = opts.n_max;
    loop {
        let h = build_hamiltonian(spec, t, n)?;
        let cap = if h.is_tridiagonal() { opts.banded_cap.max(opts.cap) } else { opts.cap };
        let r = ground_and_first(&h, opts.residual_tol)?;
        if r.truncation_adequate(opts.tail_tol) {
            return Ok(r);
        }
        if !opts.escalate || 2 * n > cap {
            if opts.require_certificate {
                return Err(Error::TruncationCapExceeded { t, n_max: n, tail: r.tail });
            }
            return Ok(r);
        }
        n *= 2;
    }
}
