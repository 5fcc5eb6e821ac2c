use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::IntScalar;

/// `a·u + b·v = d` with `d = gcd(a, b) > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BezoutResult<T> {
    pub d: T,
    pub u: T,
    pub v: T,
}

/// Extended Euclid.
///
/// When `a` already divides `b` the trivial certificate `(|a|, ±1, 0)` is
/// returned, so `gcd_ext(1, n)` is always `(1, 1, 0)`.
pub fn gcd_ext<T: IntScalar>(a: &T, b: &T) -> Result<BezoutResult<T>> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::BothZero);
    }
    if !a.is_zero() && b.is_multiple_of(a) {
        return Ok(BezoutResult {
            d: a.abs(),
            u: a.signum(),
            v: T::zero(),
        });
    }

    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (T::one(), T::zero());
    let (mut t0, mut t1) = (T::zero(), T::one());
    while !r1.is_zero() {
        let q = r0.div_floor(&r1);
        let r2 = r0 - q.clone() * r1.clone();
        r0 = std::mem::replace(&mut r1, r2);
        let s2 = s0 - q.clone() * s1.clone();
        s0 = std::mem::replace(&mut s1, s2);
        let t2 = t0 - q * t1.clone();
        t0 = std::mem::replace(&mut t1, t2);
    }
    if r0.is_negative() {
        r0 = -r0;
        s0 = -s0;
        t0 = -t0;
    }
    Ok(BezoutResult {
        d: r0,
        u: s0,
        v: t0,
    })
}

/// Nonnegative least common multiple; `lcm(0, x) = 0`.
pub fn lcm<T: IntScalar>(a: &T, b: &T) -> T {
    if a.is_zero() || b.is_zero() {
        return T::zero();
    }
    let g = a.gcd(b);
    (a.clone() / g * b.clone()).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    #[test]
    fn small_cases() {
        let r = gcd_ext(&12i64, &18).unwrap();
        assert_eq!(r.d, 6);
        assert_eq!(12 * r.u + 18 * r.v, 6);

        for n in 1..50i64 {
            assert_eq!(gcd_ext(&1i64, &n).unwrap(), BezoutResult { d: 1, u: 1, v: 0 });
        }
        assert_eq!(gcd_ext(&4i64, &6).unwrap().d, 2);
        assert_eq!(gcd_ext(&0i64, &-5).unwrap().d, 5);
        assert_eq!(gcd_ext(&0i64, &0), Err(Error::BothZero));
    }

    #[test]
    fn gcd_matches_divisor_search() {
        for a in -30i64..=30 {
            for b in -30i64..=30 {
                if a == 0 && b == 0 {
                    continue;
                }
                let top = a.abs().max(b.abs());
                let brute = (1..=top).rev().find(|d| a % d == 0 && b % d == 0).unwrap();
                let r = gcd_ext(&a, &b).unwrap();
                assert_eq!(r.d, brute);
                assert_eq!(a * r.u + b * r.v, brute);
            }
        }
    }

    #[test]
    fn lcm_basics() {
        assert_eq!(lcm(&4i64, &6), 12);
        assert_eq!(lcm(&-4i64, &6), 12);
        assert_eq!(lcm(&0i64, &6), 0);
    }

    proptest! {
        #[test]
        fn identity_holds_for_bigints(a in any::<i128>(), b in any::<i128>(), sa in any::<bool>()) {
            prop_assume!(a != 0 || b != 0);
            // Widen past i128 so the inputs reach 2^128 in magnitude.
            let a = BigInt::from(a) * if sa { 2 } else { 1 };
            let b = BigInt::from(b);
            let r = gcd_ext(&a, &b).unwrap();
            prop_assert!(r.d > BigInt::from(0));
            prop_assert_eq!(&a * &r.u + &b * &r.v, r.d.clone());
            prop_assert!((&a % &r.d) == BigInt::from(0));
            prop_assert!((&b % &r.d) == BigInt::from(0));
        }
    }
}
