//! Exact values for the oracle.
//!
//! Additive and order structures are evaluated in ℚ, which is an
//! elementary substructure of ℝ for every theory handled here. The
//! multiplicative structures use signed prime power products with rational
//! exponents: the positive ones form a divisible ordered group, hence an
//! elementary substructure of `⟨ℝ⁺;<,×⟩`, and the ones with integer
//! exponents are exactly ℚ.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::arith::factor_rational;
use crate::error::{Error, Result};

/// `±∏ pᵉ` with rational exponents, or zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PowerProduct {
    sign: i8,
    exps: BTreeMap<u64, BigRational>,
}

impl PowerProduct {
    pub fn zero() -> PowerProduct {
        PowerProduct {
            sign: 0,
            exps: BTreeMap::new(),
        }
    }

    pub fn one() -> PowerProduct {
        PowerProduct {
            sign: 1,
            exps: BTreeMap::new(),
        }
    }

    /// `sign · ∏ pᵉ`; zero exponents are dropped.
    pub fn new(sign: i8, exps: impl IntoIterator<Item = (u64, BigRational)>) -> PowerProduct {
        if sign == 0 {
            return PowerProduct::zero();
        }
        PowerProduct {
            sign: sign.signum(),
            exps: exps.into_iter().filter(|(_, e)| !e.is_zero()).collect(),
        }
    }

    pub fn from_rational(q: &BigRational) -> Result<PowerProduct> {
        let f = factor_rational(q)?;
        let sign = match f.sign {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        };
        Ok(PowerProduct::new(
            sign,
            f.exponents
                .into_iter()
                .map(|(p, e)| (p, BigRational::from_integer(e.into()))),
        ))
    }

    pub fn signum(&self) -> i8 {
        self.sign
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn exponents(&self) -> &BTreeMap<u64, BigRational> {
        &self.exps
    }

    /// True when every exponent is an integer, i.e. the value is rational.
    pub fn is_rational(&self) -> bool {
        self.exps.values().all(|e| e.is_integer())
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        if !self.is_rational() {
            return None;
        }
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (p, e) in &self.exps {
            let k = e.to_integer();
            let pk = num_traits::pow(BigInt::from(*p), k.abs().to_usize()?);
            if k.is_positive() {
                num *= pk;
            } else {
                den *= pk;
            }
        }
        Some(BigRational::new(num * BigInt::from(self.sign), den))
    }

    pub fn neg(&self) -> PowerProduct {
        PowerProduct {
            sign: -self.sign,
            exps: self.exps.clone(),
        }
    }

    pub fn abs(&self) -> PowerProduct {
        PowerProduct {
            sign: self.sign.abs(),
            exps: self.exps.clone(),
        }
    }

    pub fn mul(&self, o: &PowerProduct) -> PowerProduct {
        if self.is_zero() || o.is_zero() {
            return PowerProduct::zero();
        }
        let mut exps = self.exps.clone();
        for (p, e) in &o.exps {
            *exps.entry(*p).or_insert_with(BigRational::zero) += e;
        }
        PowerProduct::new(self.sign * o.sign, exps)
    }

    /// `0⁻¹ = 0`.
    pub fn inv(&self) -> PowerProduct {
        PowerProduct {
            sign: self.sign,
            exps: self.exps.iter().map(|(p, e)| (*p, -e)).collect(),
        }
    }

    /// Integer power; `0ᵏ = 0`.
    pub fn pow(&self, k: i64) -> PowerProduct {
        if self.is_zero() {
            return PowerProduct::zero();
        }
        let sign = if k % 2 == 0 { 1 } else { self.sign };
        let kq = BigRational::from_integer(k.into());
        PowerProduct::new(sign, self.exps.iter().map(|(p, e)| (*p, e * &kq)))
    }

    /// The positive `k`-th root of a positive value.
    pub fn root(&self, k: i64) -> PowerProduct {
        debug_assert!(self.sign > 0 && k != 0);
        let kq = BigRational::from_integer(k.into());
        PowerProduct::new(1, self.exps.iter().map(|(p, e)| (*p, e / &kq)))
    }

    /// Compares `|self|` with `1` exactly by clearing exponent denominators.
    fn cmp_abs_one(&self) -> Ordering {
        let d = self
            .exps
            .values()
            .fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (p, e) in &self.exps {
            let k = (e * BigRational::from_integer(d.clone())).to_integer();
            let pk = num_traits::pow(
                BigInt::from(*p),
                k.abs().to_usize().expect("exponent fits in usize"),
            );
            if k.is_positive() {
                num *= pk;
            } else {
                den *= pk;
            }
        }
        num.cmp(&den)
    }

    /// `Ρₙ(self)` in the reals with integer-exponent roots allowed, or in
    /// ℚ when `rational` is set.
    pub fn is_nth_power(&self, n: u64, rational: bool) -> bool {
        if self.is_zero() {
            return true;
        }
        if self.sign < 0 && n.is_multiple_of(2) {
            return false;
        }
        if !rational {
            return true;
        }
        let nq = BigInt::from(n);
        self.exps
            .values()
            .all(|e| e.is_integer() && e.to_integer().is_multiple_of(&nq))
    }
}

impl Ord for PowerProduct {
    fn cmp(&self, o: &PowerProduct) -> Ordering {
        match self.sign.cmp(&o.sign) {
            Ordering::Equal => {}
            other => return other,
        }
        if self.sign == 0 {
            return Ordering::Equal;
        }
        let ratio = self.abs().mul(&o.abs().inv()).cmp_abs_one();
        if self.sign > 0 {
            ratio
        } else {
            ratio.reverse()
        }
    }
}

impl PartialOrd for PowerProduct {
    fn partial_cmp(&self, o: &PowerProduct) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for PowerProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.to_rational() {
            return write!(f, "{q}");
        }
        if self.sign < 0 {
            write!(f, "-")?;
        }
        let mut first = true;
        for (p, e) in &self.exps {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e.is_one() {
                write!(f, "{p}")?;
            } else if e.is_integer() {
                write!(f, "{p}^{e}")?;
            } else {
                write!(f, "{p}^({e})")?;
            }
        }
        Ok(())
    }
}

/// A domain element: a rational for the order and additive theories, a
/// power product for the multiplicative ones.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Rat(BigRational),
    Mul(PowerProduct),
}

impl Value {
    pub fn int(n: i64) -> Value {
        Value::Rat(BigRational::from_integer(n.into()))
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            Value::Rat(q) => Some(q.clone()),
            Value::Mul(p) => p.to_rational(),
        }
    }

    pub fn as_power_product(&self) -> Result<PowerProduct> {
        match self {
            Value::Rat(q) => PowerProduct::from_rational(q),
            Value::Mul(p) => Ok(p.clone()),
        }
    }
}

impl From<BigRational> for Value {
    fn from(q: BigRational) -> Value {
        Value::Rat(q)
    }
}

impl From<PowerProduct> for Value {
    fn from(p: PowerProduct) -> Value {
        Value::Mul(p)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Rat(q) => write!(f, "{q}"),
            Value::Mul(p) => write!(f, "{p}"),
        }
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A rational strictly between `lo` and `hi` (`hi = None` is +∞); both
/// bounds positive, `lo` may be zero.
pub fn rational_between(lo: &PowerProduct, hi: Option<&PowerProduct>) -> BigRational {
    let two = BigRational::from_integer(2.into());
    let above = |q: &BigRational| {
        PowerProduct::from_rational(q).map(|p| p > *lo).unwrap_or(false)
    };
    let below = |q: &BigRational| match hi {
        None => true,
        Some(h) => PowerProduct::from_rational(q).map(|p| p < *h).unwrap_or(false),
    };
    let mut a = BigRational::zero();
    let mut b = BigRational::one();
    // Grow b past hi (or past lo when unbounded).
    loop {
        let pb = PowerProduct::from_rational(&b).expect("powers of two factor");
        let past = match hi {
            Some(h) => pb >= *h,
            None => pb > *lo,
        };
        if past {
            break;
        }
        a = b.clone();
        b *= &two;
    }
    if hi.is_none() {
        return b;
    }
    loop {
        let m = (&a + &b) / &two;
        if above(&m) && below(&m) {
            return m;
        }
        if above(&m) {
            b = m;
        } else {
            a = m;
        }
    }
}

/// Mostly for messages: `Error::Domain` with a rendered value.
pub(crate) fn domain_error(var: &str, value: &Value, theory: crate::TheoryId) -> Error {
    Error::Domain {
        var: var.to_string(),
        value: value.to_string(),
        theory,
    }
}
