//! Numeric helpers: `W(x) = x lg x` and its inverse, and the exact round
//! bound for the budget algorithm on overlapping sets.
//!
//! `w` and `w_inverse` are the only floating-point code in the crate; they
//! feed reports, never decisions.

use num_bigint::BigInt;
use num_traits::One;

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum MathError {
    #[error("W^-1 is undefined at {0}")]
    Domain(f64),
}

pub fn w(x: f64) -> f64 {
    x * x.log2()
}

/// Inverse of `W` on its increasing branch `y > 1`, by bisection down to
/// float resolution.
pub fn w_inverse(x: f64) -> Result<f64, MathError> {
    if !(x.is_finite() && x > 0.0) {
        return Err(MathError::Domain(x));
    }
    let (mut lo, mut hi) = (1.0f64, x.max(2.0));
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if w(mid) < x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(if x - w(lo) <= w(hi) - x { lo } else { hi })
}

/// Rationals `lo <= sqrt(q) <= hi` at least `2^-bits` apart relative to the
/// denominator; `lo == hi` when the root is exact.
pub fn sqrt_bounds(q: &Rational, bits: u32) -> (Rational, Rational) {
    assert!(!q.is_negative(), "square root of a negative number");
    let scale = BigInt::one() << bits;
    let d = q.denom().clone();
    let target = q.numer() * &d * &scale * &scale;
    let s = target.sqrt();
    let den = &d * &scale;
    let lo = Rational::from_bigints(s.clone(), den.clone());
    if &s * &s == target {
        return (lo.clone(), lo);
    }
    (lo, Rational::from_bigints(s + 1, den))
}

/// Bounds on `r = (2(1+e) + sqrt(2e^2 + 4e + 4)) / e`.
pub fn r_bounds(eps: &Rational, bits: u32) -> (Rational, Rational) {
    assert!(!eps.is_negative() && !eps.is_zero(), "eps must be positive");
    let two = Rational::from(2);
    let rad = &two * eps * eps + Rational::from(4) * eps + Rational::from(4);
    let (s_lo, s_hi) = sqrt_bounds(&rad, bits);
    let base = &two * &(Rational::one() + eps);
    ((&base + &s_lo) / eps, (&base + &s_hi) / eps)
}

/// Smallest `t` with `base^t >= m`, for `base > 1`, on fixed-point powers
/// rounded down (`up = false`) or up. Rounding down can only raise `t`,
/// rounding up only lower it.
fn min_power_reaching(base: &Rational, m: u64, bits: u32, up: bool) -> u64 {
    let (num, den) = (base.numer(), base.denom());
    let target = BigInt::from(m) << bits;
    let mut acc = BigInt::one() << bits;
    let mut t = 0;
    while acc < target {
        acc *= num;
        acc = if up { (&acc + den - 1u32) / den } else { &acc / den };
        t += 1;
    }
    t
}

/// `ceil(log_{r/(r-1)} m)`, exactly.
pub fn log_ceil(m: u64, eps: &Rational) -> u64 {
    if m <= 1 {
        return 0;
    }
    let mut bits = 64;
    loop {
        let (r_lo, r_hi) = r_bounds(eps, bits);
        // r/(r-1) decreases in r
        let q_hi = &r_lo / &(&r_lo - &Rational::one());
        let q_lo = &r_hi / &(&r_hi - &Rational::one());
        let t_hi = min_power_reaching(&q_lo, m, bits, false);
        let t_lo = min_power_reaching(&q_hi, m, bits, true);
        if t_lo == t_hi || bits >= 4096 {
            return t_hi;
        }
        bits *= 2;
    }
}

/// `(2+e) opt_k + (5/e) ceil(log_{r/(r-1)} m)`.
pub fn budget_bound(opt_k: u64, m: u64, eps: &Rational) -> Rational {
    let two = Rational::from(2);
    (&two + eps) * Rational::from(opt_k) + Rational::from(5) / eps * Rational::from(log_ceil(m, eps))
}

/// The grid `e = 1/10, ..., 9/10`.
pub fn eps_grid() -> Vec<Rational> {
    (1..=9).map(|j| Rational::new(j, 10)).collect()
}

/// Minimum of [`budget_bound`] over [`eps_grid`], with the minimizing `e`.
pub fn budget_bound_min(opt_k: u64, m: u64) -> (Rational, Rational) {
    eps_grid()
        .into_iter()
        .map(|e| (budget_bound(opt_k, m, &e), e))
        .min()
        .unwrap()
}

/// A round is good if at least half its `k` queries are useful or at least
/// `active / r` of the active sets are solved in it.
pub fn is_eps_good(k: usize, useful: usize, active: usize, solved: usize, eps: &Rational) -> bool {
    if 2 * useful >= k {
        return true;
    }
    let (solved, active) = (Rational::from(solved), Rational::from(active));
    let mut bits = 64;
    loop {
        let (lo, hi) = r_bounds(eps, bits);
        if &solved * &lo >= active {
            return true;
        }
        if &solved * &hi < active || lo == hi {
            return false;
        }
        bits *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn inverse_at_two() {
        assert!((w_inverse(2.0).unwrap() - 2.0).abs() <= 1e-9);
        assert!(w_inverse(0.0).is_err());
        assert!(w_inverse(f64::NAN).is_err());
    }

    #[test]
    fn inverse_below_two_stays_on_branch() {
        let y = w_inverse(0.5).unwrap();
        assert!(y > 1.0 && (w(y) - 0.5).abs() < 1e-9);
    }

    #[test]
    fn sqrt_bounds_bracket() {
        let (lo, hi) = sqrt_bounds(&Rational::from(2), 32);
        assert!(&lo * &lo <= Rational::from(2) && Rational::from(2) <= &hi * &hi);
        assert!(&hi - &lo <= Rational::new(1, 1 << 31));
        let (lo, hi) = sqrt_bounds(&Rational::new(9, 4), 8);
        assert_eq!((lo.clone(), hi), (Rational::new(3, 2), Rational::new(3, 2)));
    }

    #[test]
    fn r_at_one() {
        // e = 1: r = 4 + sqrt(10)
        let (lo, hi) = r_bounds(&Rational::one(), 40);
        assert!(lo.to_f64() <= 4.0 + 10f64.sqrt() + 1e-9);
        assert!(hi.to_f64() >= 4.0 + 10f64.sqrt() - 1e-9);
    }

    #[test]
    fn log_ceil_frozen() {
        // e = 1/2: r = 2(3 + sqrt(6.5)) ~ 11.099, base ~ 1.0990
        assert_eq!(log_ceil(1, &Rational::new(1, 2)), 0);
        assert_eq!(log_ceil(2, &Rational::new(1, 2)), 8);
        assert_eq!(log_ceil(10, &Rational::new(1, 2)), 25);
        let f = |m: f64, e: f64| {
            let r = (2.0 * (1.0 + e) + (2.0 * e * e + 4.0 * e + 4.0).sqrt()) / e;
            (m.ln() / (r / (r - 1.0)).ln()).ceil() as u64
        };
        for m in [2u64, 3, 7, 30, 100] {
            for e in eps_grid() {
                assert_eq!(log_ceil(m, &e), f(m as f64, e.to_f64()), "m={m} e={e}");
            }
        }
    }

    #[test]
    fn bound_for_single_set_is_linear() {
        let (b, e) = budget_bound_min(3, 1);
        assert_eq!(e, Rational::new(1, 10));
        assert_eq!(b, Rational::new(63, 10));
    }

    #[test]
    fn eps_good_rounds() {
        let e = Rational::new(1, 2);
        assert!(is_eps_good(4, 2, 100, 0, &e));
        assert!(!is_eps_good(4, 1, 100, 9, &e));
        assert!(is_eps_good(4, 1, 100, 10, &e));
    }

    proptest! {
        #[test]
        fn inverse_is_inverse(x in 2.0f64..1_048_576.0) {
            let y = w_inverse(x).unwrap();
            prop_assert!((w(y) - x).abs() <= 1e-8);
            prop_assert!(x / x.log2() <= y + 1e-9);
            prop_assert!(y <= 2.0 * x / x.log2() + 1e-9);
        }
    }
}
