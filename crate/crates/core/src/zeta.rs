//! `ζ(s)` at integer arguments and the density predictions built on it.

use alloc::vec::Vec;

use crate::arith::Exponent;
use crate::visibility::{density_report, DensityReport, Method, SieveConfig};
use crate::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-12;

const DEFAULT_TERMS: u64 = 10_000;

/// Per-term `pow` error plus compensated summation, relative to the sum.
/// The sum itself is below 2 for every `s ≥ 2`.
const ROUNDING_BOUND: f64 = 4.0 * f64::EPSILON * 2.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaValue {
    pub s: u32,
    pub value: f64,
    pub abs_error_bound: f64,
}

/// `ζ(s)` for integer `s ≥ 2`, within `tol` of the true value.
///
/// Sums `n^{-s}` for `n ≤ M` and closes the tail with three Euler–Maclaurin
/// terms, `M^{1-s}/(s-1) − M^{-s}/2 + s·M^{-s-1}/12`. The neglected remainder
/// is bounded by `s(s+1)·M^{-s-2}`; `M` starts at 10⁴ and doubles until that
/// bound fits in `tol`.
pub fn zeta_int(s: u32, tol: f64) -> Result<ZetaValue> {
    if s < 2 {
        return Err(Error::Divergent(s));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(alloc::format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if tol <= ROUNDING_BOUND {
        return Err(Error::ToleranceUnattainable(tol));
    }
    let sf = s as f64;
    let remainder = |m: f64| sf * (sf + 1.0) * libm::pow(m, -(sf + 2.0));
    let mut terms = DEFAULT_TERMS;
    while remainder(terms as f64) > tol - ROUNDING_BOUND {
        terms *= 2;
    }
    let m = terms as f64;

    let mut sum = Neumaier::default();
    // smallest terms first
    for n in (1..=terms).rev() {
        sum.add(libm::pow(n as f64, -sf));
    }
    sum.add(libm::pow(m, 1.0 - sf) / (sf - 1.0));
    sum.add(-0.5 * libm::pow(m, -sf));
    sum.add(sf * libm::pow(m, -sf - 1.0) / 12.0);

    Ok(ZetaValue {
        s,
        value: sum.total(),
        abs_error_bound: remainder(m) + ROUNDING_BOUND,
    })
}

#[derive(Default)]
struct Neumaier {
    sum: f64,
    compensation: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if libm::fabs(self.sum) >= libm::fabs(x) {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Limiting proportions `(1/ζ(b+1), 1 − 1/ζ(b+1))` of b-visible and
/// b-invisible points.
pub fn predicted_proportions(b: Exponent) -> (f64, f64) {
    let zeta = zeta_int(b.succ(), DEFAULT_TOLERANCE)
        .expect("b + 1 ≥ 2 and the default tolerance is attainable");
    let visible = 1.0 / zeta.value;
    (visible, 1.0 - visible)
}

/// One density report per exponent, all over the same `n×n` grid.
pub fn table_rows(
    bs: &[Exponent],
    n: u64,
    method: Method,
    config: &SieveConfig,
) -> Result<Vec<DensityReport>> {
    bs.iter()
        .map(|&b| density_report(b, n, method, config))
        .collect()
}
