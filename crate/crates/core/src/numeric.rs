//! Scalar helpers: binomial coefficients and bracketing root finding.

use crate::error::{Error, Result};

/// `C(n, k)` by multiplicative recurrence in floating point.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round_if_small()
}

trait RoundIfSmall {
    fn round_if_small(self) -> Self;
}

impl RoundIfSmall for f64 {
    // Below 2^53 the true value is an integer that f64 represents exactly.
    fn round_if_small(self) -> f64 {
        if self < 9.0e15 {
            self.round()
        } else {
            self
        }
    }
}

/// Exact `C(n, k)`; `None` on overflow.
pub fn binomial_exact(n: u32, k: u32) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i + 1) as u128;
    }
    Some(acc)
}

/// Bisection for a sign change of `f` on `[lo, hi]`, stopping when the
/// bracket is narrower than `tol`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || flo.is_nan() || fhi.is_nan() {
        return Err(Error::NoSignChange { lo, hi });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Bisection on the highest sign change of `f` found by scanning
/// `[lo, hi]` on a uniform grid of `samples` cells from the top down.
pub fn largest_root<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    samples: usize,
    tol: f64,
) -> Result<f64> {
    let step = (hi - lo) / samples as f64;
    let mut b = hi;
    let mut fb = f(b);
    for i in (0..samples).rev() {
        let a = lo + step * i as f64;
        let fa = f(a);
        if fa == 0.0 || fa.signum() != fb.signum() {
            return bisect(&f, a, b, tol);
        }
        b = a;
        fb = fa;
    }
    Err(Error::NoSignChange { lo, hi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_binomials() {
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(9, 0), 1.0);
        assert_eq!(binomial(9, 9), 1.0);
        assert_eq!(binomial(3, 4), 0.0);
        assert_eq!(binomial_exact(20, 10), Some(184_756));
    }

    proptest! {
        #[test]
        fn float_binomial_matches_exact_up_to_20(n in 0u32..=20, k in 0u32..=20) {
            let exact = binomial_exact(n, k).unwrap() as f64;
            prop_assert_eq!(binomial(n as usize, k as usize), exact);
        }
    }

    #[test]
    fn row_sums_are_powers_of_two() {
        for n in 0..60usize {
            let s: f64 = (0..=n).map(|k| binomial(n, k)).sum();
            assert!((s / 2f64.powi(n as i32) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn bisection_finds_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-12).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-11);
        assert!(bisect(|x| x * x + 1.0, 0.0, 2.0, 1e-12).is_err());
    }

    #[test]
    fn largest_root_picks_top() {
        // roots at 0.2 and 0.7
        let r = largest_root(|x| (x - 0.2) * (x - 0.7), 0.0, 1.0, 100, 1e-12).unwrap();
        assert!((r - 0.7).abs() < 1e-10);
    }
}
