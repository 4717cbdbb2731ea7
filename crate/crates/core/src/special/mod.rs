//! Special-function solutions of `-psi'' + t V psi = lambda psi` for the
//! standard number metric, used as independent checks of the spectral solver.
//!
//! Arc metric (`V = theta^2`): the even solution is
//! `e^{-sqrt(t) theta^2 / 2} 1F1((1 - lambda/sqrt t)/4; 1/2; sqrt(t) theta^2)`
//! and `psi'(pi) = 0` selects the eigenvalues. Chord metric
//! (`V = 2 - 2 cos theta`): Mathieu's equation after `theta = 2x`, with
//! `c(t) = 2t + a_0(-4t)/4`.

mod hyp1f1;
mod mathieu;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use hyp1f1::hyp1f1;
pub use mathieu::{cho_ground_energy, mathieu_a0};

/// Validated range of `t` for the hypergeometric solution.
pub const ARC_T_MIN: f64 = 1e-3;
pub const ARC_T_MAX: f64 = 50.0;
/// Number of scan steps used to bracket the lowest root.
pub const ARC_SCAN_STEPS: usize = 512;

/// `(1 - l) 1F1(1 + l'/4; 3/2; z) - 1F1(l'/4; 1/2; z)` with `l = lambda/sqrt t`,
/// `l' = 1 - l`, `z = pi^2 sqrt t`, divided by the sum of the magnitudes of
/// the two sides. Vanishes exactly where `psi'(pi) = 0`.
pub fn arc_boundary_residual(t: f64, lambda: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("t must be positive, got {t}")));
    }
    let s = t.sqrt();
    let w = 1.0 - lambda / s;
    let a = 0.25 * w;
    let z = PI * PI * s;
    let lhs = w * hyp1f1(1.0 + a, 1.5, z)?;
    let rhs = hyp1f1(a, 0.5, z)?;
    let scale = lhs.abs() + rhs.abs();
    Ok(if scale > 0.0 { (lhs - rhs) / scale } else { 0.0 })
}

/// Bracketing data for the lowest root.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryProblem {
    pub t: f64,
    pub lambda_bracket: (f64, f64),
    pub lambda: f64,
}

fn check_arc_t(t: f64) -> Result<()> {
    if (ARC_T_MIN..=ARC_T_MAX).contains(&t) {
        Ok(())
    } else {
        Err(Error::OutOfRange { what: "t", value: t, lo: ARC_T_MIN, hi: ARC_T_MAX })
    }
}

/// Root of the boundary residual in `[lo, hi]` by bisection; the residual
/// must change sign on the bracket.
pub fn arc_root_in_bracket(t: f64, lo: f64, hi: f64) -> Result<BoundaryProblem> {
    check_arc_t(t)?;
    let (mut a, mut b) = (lo, hi);
    let fa = arc_boundary_residual(t, a)?;
    let fb = arc_boundary_residual(t, b)?;
    if fa == 0.0 {
        return Ok(BoundaryProblem { t, lambda_bracket: (lo, hi), lambda: a });
    }
    if fb == 0.0 {
        return Ok(BoundaryProblem { t, lambda_bracket: (lo, hi), lambda: b });
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoSignChange { lo, hi });
    }
    let sa = fa.signum();
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = arc_boundary_residual(t, mid)?;
        if fm == 0.0 {
            a = mid;
            b = mid;
            break;
        }
        if fm.signum() == sa {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(BoundaryProblem { t, lambda_bracket: (lo, hi), lambda: 0.5 * (a + b) })
}

/// Lowest eigenvalue for the arc metric, `t` in `[1e-3, 50]`.
///
/// The constant state gives `c(t) <= t pi^2/3`, so `[0, t pi^2/3]` is scanned
/// for the first sign change of the residual, which is then bisected.
pub fn arc_ground_energy(t: f64) -> Result<f64> {
    Ok(arc_ground_problem(t)?.lambda)
}

/// As [`arc_ground_energy`], with the bracket that was used.
pub fn arc_ground_problem(t: f64) -> Result<BoundaryProblem> {
    check_arc_t(t)?;
    let top = t * PI * PI / 3.0;
    let h = top / ARC_SCAN_STEPS as f64;
    let mut prev = arc_boundary_residual(t, 0.0)?;
    for k in 1..=ARC_SCAN_STEPS {
        let lam = if k == ARC_SCAN_STEPS { top } else { k as f64 * h };
        let r = arc_boundary_residual(t, lam)?;
        if r == 0.0 || r.signum() != prev.signum() {
            return arc_root_in_bracket(t, lam - h, lam);
        }
        prev = r;
    }
    Err(Error::NoSignChange { lo: 0.0, hi: top })
}
