//! Lowest characteristic value `a_0(q)` of the Mathieu equation
//! `y'' + (a - 2q cos 2x) y = 0` with even, period-pi solutions.
//!
//! With `ce_0(x) = sum_r A_{2r} cos(2rx)` the Fourier recurrence is
//!
//! ```text
//! a A_0 - q A_2 = 0
//! (a - 4) A_2 - q (2 A_0 + A_4) = 0
//! (a - 4r^2) A_{2r} - q (A_{2r-2} + A_{2r+2}) = 0,   r >= 2
//! ```
//!
//! Truncated at depth `R` this is a symmetric tridiagonal system. The
//! continued-fraction pivots `D_R = a - 4R^2`,
//! `D_r = a - 4r^2 - q^2 / D_{r+1}`, `F = a - 2q^2 / D_1` change sign once
//! for every characteristic value below `a`, which gives a bisection
//! predicate for `a_0`. The depth is doubled until two depths agree.

use crate::error::{Error, Result};

pub const Q_MIN: f64 = -400.0;
const MAX_DEPTH: usize = 1 << 14;

/// True when the truncated system at depth `depth` has a characteristic
/// value at or below `a`.
fn at_or_above_lowest(a: f64, q: f64, depth: usize) -> bool {
    let q2 = q * q;
    let mut d = a - 4.0 * (depth * depth) as f64;
    if d >= 0.0 {
        return true;
    }
    for r in (1..depth).rev() {
        d = a - 4.0 * (r * r) as f64 - q2 / d;
        if d >= 0.0 {
            return true;
        }
    }
    a - 2.0 * q2 / d >= 0.0
}

fn lowest_at_depth(q: f64, depth: usize) -> f64 {
    let mut lo = -2.0 * q.abs() - 1.0;
    let mut hi = 1.0;
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if at_or_above_lowest(mid, q, depth) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// `a_0(q)` for `q` in `[-400, 0]`.
pub fn mathieu_a0(q: f64) -> Result<f64> {
    if !(Q_MIN..=0.0).contains(&q) {
        return Err(Error::OutOfRange { what: "q", value: q, lo: Q_MIN, hi: 0.0 });
    }
    if q == 0.0 {
        return Ok(0.0);
    }
    let mut depth = 16 + 2 * q.abs().sqrt().ceil() as usize;
    let mut prev = lowest_at_depth(q, depth);
    while depth < MAX_DEPTH {
        depth *= 2;
        let next = lowest_at_depth(q, depth);
        if (next - prev).abs() <= 4.0 * f64::EPSILON * next.abs().max(1.0) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NotConverged(format!("Mathieu recurrence at q = {q} did not settle by depth {depth}")))
}

/// Ground energy `2t + a_0(-4t)/4` of `-psi'' + t(2 - 2cos theta)`.
pub fn cho_ground_energy(t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::InvalidArgument(format!("t must be non-negative, got {t}")));
    }
    Ok(2.0 * t + mathieu_a0(-4.0 * t)? / 4.0)
}
