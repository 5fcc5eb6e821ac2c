use std::collections::BTreeMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Trial division never looks at primes above this bound.
pub const PRIME_LIMIT: u64 = 1_000_000;

// (sieve bound, primes up to it)
static PRIMES: OnceLock<RwLock<(u64, Vec<u64>)>> = OnceLock::new();

fn sieve(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// All primes `≤ limit` (capped at [`PRIME_LIMIT`]).
///
/// Backed by a shared table that only ever grows.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    let limit = limit.min(PRIME_LIMIT);
    let table = PRIMES.get_or_init(|| RwLock::new((1 << 12, sieve(1 << 12))));
    {
        let guard = table.read().unwrap();
        if guard.0 >= limit {
            return guard.1.iter().copied().take_while(|&p| p <= limit).collect();
        }
    }
    let mut guard = table.write().unwrap();
    if guard.0 < limit {
        let mut bound = guard.0;
        while bound < limit {
            bound = (bound * 4).min(PRIME_LIMIT);
        }
        *guard = (bound, sieve(bound));
    }
    guard.1.iter().copied().take_while(|&p| p <= limit).collect()
}

/// `sign · ∏ pᵉ` with nonzero exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredRational {
    pub sign: Sign,
    pub exponents: BTreeMap<u64, i64>,
}

impl FactoredRational {
    pub fn to_rational(&self) -> BigRational {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (&p, &e) in &self.exponents {
            let pe = num_traits::pow(BigInt::from(p), e.unsigned_abs() as usize);
            if e > 0 {
                num *= pe;
            } else {
                den *= pe;
            }
        }
        match self.sign {
            Sign::NoSign => BigRational::zero(),
            Sign::Plus => BigRational::new(num, den),
            Sign::Minus => -BigRational::new(num, den),
        }
    }

    /// Ρₙ by exponent divisibility.
    pub fn is_nth_power(&self, n: u64) -> bool {
        match self.sign {
            Sign::NoSign => true,
            Sign::Minus if n.is_multiple_of(2) => false,
            _ => self
                .exponents
                .values()
                .all(|&e| e.unsigned_abs() % n == 0),
        }
    }
}

fn factor_into(n: &BigInt, sign: i64, out: &mut BTreeMap<u64, i64>) -> Result<()> {
    let mut rest = n.abs();
    if rest.is_one() {
        return Ok(());
    }
    if let Some(small) = rest.to_u64() {
        return factor_u64(small, sign, out).map_err(|_| Error::FactorBudget(n.to_string()));
    }
    let mut limit = 1 << 12;
    loop {
        for p in primes_up_to(limit) {
            let bp = BigInt::from(p);
            let mut e = 0;
            loop {
                let (q, r) = rest.div_rem(&bp);
                if !r.is_zero() {
                    break;
                }
                rest = q;
                e += 1;
            }
            if e > 0 {
                *out.entry(p).or_insert(0) += sign * e;
            }
            if let Some(small) = rest.to_u64() {
                return factor_u64(small, sign, out)
                    .map_err(|_| Error::FactorBudget(n.to_string()));
            }
        }
        if limit >= PRIME_LIMIT {
            return Err(Error::FactorBudget(n.to_string()));
        }
        limit = (limit * 8).min(PRIME_LIMIT);
    }
}

fn factor_u64(mut n: u64, sign: i64, out: &mut BTreeMap<u64, i64>) -> std::result::Result<(), ()> {
    let mut limit: u64 = 1 << 12;
    'grow: loop {
        for p in primes_up_to(limit) {
            if p.saturating_mul(p) > n {
                break 'grow;
            }
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            if e > 0 {
                *out.entry(p).or_insert(0) += sign * e;
            }
        }
        if limit >= PRIME_LIMIT {
            // Every prime up to the limit is exhausted; what is left is
            // prime only if it is below limit².
            if (n as u128) < (PRIME_LIMIT as u128) * (PRIME_LIMIT as u128) {
                break;
            }
            return Err(());
        }
        limit = (limit * 8).min(PRIME_LIMIT);
    }
    if n > 1 {
        *out.entry(n).or_insert(0) += sign;
    }
    Ok(())
}

/// Prime factorization of a rational by trial division.
///
/// Fails with [`Error::FactorBudget`] when a cofactor survives every prime
/// below [`PRIME_LIMIT`] and is too large to be certified prime.
pub fn factor_rational(q: &BigRational) -> Result<FactoredRational> {
    let sign = q.numer().sign();
    let mut exponents = BTreeMap::new();
    if sign != Sign::NoSign {
        factor_into(q.numer(), 1, &mut exponents)?;
        factor_into(q.denom(), -1, &mut exponents)?;
    }
    exponents.retain(|_, e| *e != 0);
    Ok(FactoredRational { sign, exponents })
}

/// Whether `q = xⁿ` for some rational `x`.
///
/// A reduced fraction `a/b` is an n-th power exactly when `a` and `b` are,
/// so no factorization is needed and there is no size limit.
pub fn is_nth_power(q: &BigRational, n: u64) -> bool {
    assert!(n >= 1, "power index must be positive");
    if q.is_zero() || n == 1 {
        return true;
    }
    if q.is_negative() && n.is_multiple_of(2) {
        return false;
    }
    let exact = |m: &BigInt| {
        let m = m.abs();
        if m.is_one() {
            return true;
        }
        if n > m.bits() {
            return false;
        }
        let r = m.nth_root(n as u32);
        num_traits::pow(r, n as usize) == m
    };
    exact(q.numer()) && exact(q.denom())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn factor_examples() {
        let f = factor_rational(&r(4, 9)).unwrap();
        assert_eq!(f.sign, Sign::Plus);
        assert_eq!(f.exponents, BTreeMap::from([(2, 2), (3, -2)]));

        let f = factor_rational(&r(1, 1)).unwrap();
        assert_eq!((f.sign, f.exponents.len()), (Sign::Plus, 0));

        let f = factor_rational(&r(-12, 1)).unwrap();
        assert_eq!(f.sign, Sign::Minus);
        assert_eq!(f.exponents, BTreeMap::from([(2, 2), (3, 1)]));

        let f = factor_rational(&r(0, 1)).unwrap();
        assert_eq!((f.sign, f.exponents.len()), (Sign::NoSign, 0));
    }

    #[test]
    fn large_prime_cofactor() {
        // 999983 is the largest prime below 10^6; its square is still certified.
        let p = BigInt::from(999_983u64);
        let q = BigRational::from_integer(&p * &p * 6);
        let f = factor_rational(&q).unwrap();
        assert_eq!(f.exponents, BTreeMap::from([(2, 1), (3, 1), (999_983, 2)]));
        assert_eq!(f.to_rational(), q);
    }

    #[test]
    fn budget_exceeded() {
        // Product of two primes just above the table limit.
        let n = BigInt::from(1_000_003u64) * BigInt::from(1_000_033u64) * BigInt::from(1_000_037u64);
        let err = factor_rational(&BigRational::from_integer(n)).unwrap_err();
        assert!(matches!(err, Error::FactorBudget(_)));
    }

    #[test]
    fn prime_table() {
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(primes_up_to(PRIME_LIMIT).len(), 78_498);
        assert_eq!(primes_up_to(10).len(), 4);
    }

    #[test]
    fn nth_power_examples() {
        assert!(is_nth_power(&r(4, 9), 2));
        assert!(!is_nth_power(&r(8, 1), 2));
        assert!(is_nth_power(&r(64, 1), 6));
        assert!(is_nth_power(&r(0, 1), 4));
        assert!(!is_nth_power(&r(-4, 1), 2));
        assert!(is_nth_power(&r(-8, 27), 3));
        assert!(!is_nth_power(&r(-2, 1), 3));
    }

    proptest! {
        #[test]
        fn factorization_reconstructs(n in -1_000_000_000i64..1_000_000_000, d in 1i64..1_000_000) {
            let q = r(n, d);
            let f = factor_rational(&q).unwrap();
            prop_assert!(f.exponents.values().all(|&e| e != 0));
            prop_assert!(f.exponents.keys().all(|&p| primes_up_to(p).last() == Some(&p) || p > PRIME_LIMIT));
            prop_assert_eq!(f.to_rational(), q);
        }

        #[test]
        fn root_test_matches_exponents(n in -5000i64..5000, d in 1i64..5000, k in 1u64..12) {
            let q = r(n, d);
            let f = factor_rational(&q).unwrap();
            prop_assert_eq!(is_nth_power(&q, k), f.is_nth_power(k));
        }
    }
}
