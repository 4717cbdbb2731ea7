//! Confluent hypergeometric function `1F1(a; b; z)` by its power series.

use crate::error::{Error, Result};

/// Largest `|z|` accepted.
pub const Z_MAX: f64 = 200.0;
const MAX_TERMS: usize = 5000;

/// Neumaier's compensated sum.
#[derive(Default)]
struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// `sum_k (a)_k z^k / ((b)_k k!)`, compensated summation. Negative `z` goes
/// through Kummer's transformation `M(a, b, z) = e^z M(b - a, b, -z)` so the
/// summed series has non-alternating tail terms.
pub fn hyp1f1(a: f64, b: f64, z: f64) -> Result<f64> {
    if b <= 0.0 && b == b.floor() {
        return Err(Error::InvalidArgument(format!("b = {b} is a non-positive integer")));
    }
    if !(z.abs() <= Z_MAX) {
        return Err(Error::OutOfRange { what: "z", value: z, lo: -Z_MAX, hi: Z_MAX });
    }
    if z < 0.0 {
        return Ok(z.exp() * series(b - a, b, -z)?);
    }
    series(a, b, z)
}

fn series(a: f64, b: f64, z: f64) -> Result<f64> {
    let mut acc = Compensated::default();
    let mut term = 1.0;
    acc.add(term);
    if z == 0.0 {
        return Ok(1.0);
    }
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) / (b + kf) * z / (kf + 1.0);
        acc.add(term);
        if term == 0.0 {
            return Ok(acc.value());
        }
        // past the largest term and (for negative a) past the sign changes
        if kf > z && kf > -a && term.abs() <= 1e-17 * acc.value().abs() {
            return Ok(acc.value());
        }
    }
    Err(Error::SeriesNotConverged { a, b, z })
}
