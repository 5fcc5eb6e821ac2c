//! Counterexample structures for the non-finite-axiomatizability results.
//!
//! Each structure satisfies the finitely many schema instances below some
//! bound and fails a specific larger instance. Elements are encoded exactly:
//!
//! | structure        | carrier                                   | encoding              |
//! |------------------|-------------------------------------------|-----------------------|
//! | `QDivNFact(N)`   | `ℚ/N! = {m/(N!)ᵏ}` under `+`              | `5/36`                |
//! | `LexGroup(N)`    | `(ℚ/N!) × ℤ`, lexicographic, under `+`    | `(1/6, -2)`           |
//! | `PowTwoGroup(N)` | `{0} ∪ ±2^{m·(N!)⁻ᵏ}` under `×`           | `0`, `-2^(5/36)`      |
//! | `QModPStar(p)`   | `∏ ρᵢ^{rᵢ}`, `rᵢ ∈ ℚ/p`, under `×`        | `2^(3/5)*3^(-1/25)`   |
//!
//! `N!` is `2·3·…·N`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{factor_rational, primes_up_to};
use crate::error::{Error, Result};

use super::value::PowerProduct;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LabStructure {
    QDivNFact(u64),
    LexGroup(u64),
    PowTwoGroup(u64),
    QModPStar(u64),
}

/// An element in exact form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LabElement {
    Rat(BigRational),
    Pair(BigRational, BigInt),
    Mul(PowerProduct),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ClaimId {
    /// The group operation and inverses stay inside the carrier; the order
    /// is antisymmetric on samples.
    Closure,
    /// `∀x∃y x = n·y`, or `∀x∃y ⋁_{i<n} x = n·y + ī` in the discrete group.
    DivisibleBy(u64),
    /// `∀x,y (x < y ↔ x + 1 ≤ y)`.
    Discreteness,
    /// `∀x∃y x = yᵏ`.
    Roots(u64),
    /// `∀y Ρ_p(y)`.
    AllPthPowers,
    /// `∀x,z∃y (x < z → x < yⁿ < z)`.
    M10(u64),
    /// `∀x₀…x_{q-1} ∃y ∀z ⋀_{mⱼ∤n} yⁿ·xⱼ ≠ z^{mⱼ}`.
    M11 { n: u64, ms: Vec<u64> },
}

#[derive(Clone, Debug)]
pub struct ClaimParams {
    /// An encoded element to test instead of the canonical witness and the
    /// samples (only for the single-element claims).
    pub x: Option<String>,
    pub samples: usize,
    pub seed: u64,
}

impl Default for ClaimParams {
    fn default() -> Self {
        ClaimParams {
            x: None,
            samples: 200,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimResult {
    pub structure: String,
    pub claim: String,
    pub holds: bool,
    /// Instances examined before the verdict.
    pub checked: usize,
    /// The refuting element, when the claim fails.
    pub witness: Option<String>,
    pub reason: String,
}

/// `2·3·…·n`.
pub fn n_factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Whether `q ∈ ℚ/base`, i.e. every prime of the denominator divides `base`.
pub fn in_q_over(q: &BigRational, base: &BigInt) -> bool {
    let mut d = q.denom().clone();
    loop {
        let g = d.gcd(base);
        if g.is_one() {
            return d.is_one();
        }
        while d.is_multiple_of(&g) {
            d /= &g;
        }
    }
}

impl LabStructure {
    fn validate(self) -> Result<()> {
        match self {
            LabStructure::QDivNFact(n) | LabStructure::LexGroup(n) | LabStructure::PowTwoGroup(n) => {
                if n < 2 {
                    return Err(Error::Structure(format!("{self}: N must be at least 2")));
                }
            }
            LabStructure::QModPStar(p) => {
                if p < 2 || !primes_up_to(p).contains(&p) {
                    return Err(Error::Structure(format!("{self}: {p} is not a prime")));
                }
            }
        }
        Ok(())
    }

    /// The base `b` of the exponent or coordinate ring `ℚ/b`.
    fn base(self) -> BigInt {
        match self {
            LabStructure::QDivNFact(n) | LabStructure::LexGroup(n) | LabStructure::PowTwoGroup(n) => {
                n_factorial(n)
            }
            LabStructure::QModPStar(p) => BigInt::from(p),
        }
    }

    pub fn parse_element(self, s: &str) -> Result<LabElement> {
        let malformed = || Error::MalformedElement(format!("`{s}` for {self}"));
        let t: String = s
            .trim()
            .chars()
            .map(|c| match c {
                '−' => '-',
                '·' => '*',
                '{' => '(',
                '}' => ')',
                c => c,
            })
            .filter(|c| !c.is_whitespace())
            .collect();
        match self {
            LabStructure::QDivNFact(_) => t.parse().map(LabElement::Rat).map_err(|_| malformed()),
            LabStructure::LexGroup(_) => {
                let inner = t
                    .strip_prefix('(')
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(malformed)?;
                let (a, l) = inner.split_once(',').ok_or_else(malformed)?;
                Ok(LabElement::Pair(
                    a.parse().map_err(|_| malformed())?,
                    l.parse().map_err(|_| malformed())?,
                ))
            }
            _ => parse_power_product(&t).map(LabElement::Mul).ok_or_else(malformed),
        }
    }

    pub fn contains(self, x: &LabElement) -> bool {
        let base = self.base();
        match (self, x) {
            (LabStructure::QDivNFact(_), LabElement::Rat(q)) => in_q_over(q, &base),
            (LabStructure::LexGroup(_), LabElement::Pair(a, _)) => in_q_over(a, &base),
            (LabStructure::PowTwoGroup(_), LabElement::Mul(v)) => {
                v.is_zero()
                    || v
                        .exponents()
                        .iter()
                        .all(|(p, e)| *p == 2 && in_q_over(e, &base))
            }
            (LabStructure::QModPStar(_), LabElement::Mul(v)) => {
                v.signum() > 0 && v.exponents().values().all(|e| in_q_over(e, &base))
            }
            _ => false,
        }
    }

    /// The group operation: `+` or `×`.
    pub fn op(self, a: &LabElement, b: &LabElement) -> LabElement {
        match (a, b) {
            (LabElement::Rat(x), LabElement::Rat(y)) => LabElement::Rat(x + y),
            (LabElement::Pair(x, l), LabElement::Pair(y, m)) => LabElement::Pair(x + y, l + m),
            (LabElement::Mul(x), LabElement::Mul(y)) => LabElement::Mul(x.mul(y)),
            _ => panic!("elements of different structures"),
        }
    }

    /// The group inverse; `None` for `0` in the multiplicative structures.
    pub fn inverse(self, a: &LabElement) -> Option<LabElement> {
        Some(match a {
            LabElement::Rat(x) => LabElement::Rat(-x),
            LabElement::Pair(x, l) => LabElement::Pair(-x, -l),
            LabElement::Mul(x) if x.is_zero() => return None,
            LabElement::Mul(x) => LabElement::Mul(x.inv()),
        })
    }

    pub fn cmp(self, a: &LabElement, b: &LabElement) -> Ordering {
        match (a, b) {
            (LabElement::Rat(x), LabElement::Rat(y)) => x.cmp(y),
            (LabElement::Pair(x, l), LabElement::Pair(y, m)) => x.cmp(y).then(l.cmp(m)),
            (LabElement::Mul(x), LabElement::Mul(y)) => x.cmp(y),
            _ => panic!("elements of different structures"),
        }
    }

    /// The additive unit `1` (the least positive element of the discrete group).
    fn one(self) -> LabElement {
        match self {
            LabStructure::LexGroup(_) => LabElement::Pair(BigRational::zero(), BigInt::one()),
            _ => LabElement::Rat(BigRational::one()),
        }
    }

    /// The element the non-axiomatizability argument refutes the claim at.
    fn canonical_witness(self) -> LabElement {
        match self {
            LabStructure::QDivNFact(_) => LabElement::Rat(BigRational::one()),
            LabStructure::LexGroup(_) => LabElement::Pair(BigRational::one(), BigInt::zero()),
            _ => LabElement::Mul(PowerProduct::new(1, [(2, BigRational::one())])),
        }
    }

    pub fn sample(self, rng: &mut impl Rng) -> LabElement {
        let base = self.base();
        match self {
            LabStructure::QDivNFact(_) => LabElement::Rat(sample_q_over(rng, &base, 30, 2)),
            LabStructure::LexGroup(_) => {
                let a = sample_q_over(rng, &base, 12, 2);
                LabElement::Pair(a, rng.gen_range(-10i64..=10).into())
            }
            LabStructure::PowTwoGroup(_) => {
                if rng.gen_bool(0.125) {
                    return LabElement::Mul(PowerProduct::zero());
                }
                let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
                let e = sample_q_over(rng, &base, 12, 2);
                LabElement::Mul(PowerProduct::new(sign, [(2, e)]))
            }
            LabStructure::QModPStar(p) => {
                let kmax = if p > 11 { 1 } else { 2 };
                let mut exps = Vec::new();
                for q in [2u64, 3, 5, 7] {
                    if rng.gen_bool(0.5) {
                        exps.push((q, sample_q_over(rng, &base, 6, kmax)));
                    }
                }
                LabElement::Mul(PowerProduct::new(1, exps))
            }
        }
    }
}

/// `m / baseᵏ` with `|m| ≤ max` and `k ≤ kmax`.
fn sample_q_over(rng: &mut impl Rng, base: &BigInt, max: i64, kmax: u32) -> BigRational {
    let num = rng.gen_range(-max..=max);
    let k = rng.gen_range(0..=kmax);
    BigRational::new(num.into(), num_traits::pow(base.clone(), k as usize))
}

/// `0`, or `[-] f * f * …` with factors `b` or `b^e` (`e` optionally in
/// parentheses); bases are factored, so `4^(1/2)` reads as `2`.
fn parse_power_product(s: &str) -> Option<PowerProduct> {
    if s == "0" {
        return Some(PowerProduct::zero());
    }
    let (sign, body) = match s.strip_prefix('-') {
        Some(r) => (-1, r),
        None => (1, s.strip_prefix('+').unwrap_or(s)),
    };
    let mut out = PowerProduct::new(sign, []);
    for factor in body.split('*') {
        let (b, e) = match factor.split_once('^') {
            Some((b, e)) => {
                let e = e.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(e);
                (b, e.parse::<BigRational>().ok()?)
            }
            None => (factor, BigRational::one()),
        };
        let b: BigRational = b.parse().ok()?;
        if !b.is_positive() {
            return None;
        }
        let f = factor_rational(&b).ok()?;
        let v = PowerProduct::new(
            1,
            f.exponents
                .into_iter()
                .map(|(p, k)| (p, BigRational::from_integer(k.into()) * &e)),
        );
        out = out.mul(&v);
    }
    Some(out)
}

impl fmt::Display for LabStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabStructure::QDivNFact(n) => write!(f, "QDivNFact({n})"),
            LabStructure::LexGroup(n) => write!(f, "LexGroup({n})"),
            LabStructure::PowTwoGroup(n) => write!(f, "PowTwoGroup({n})"),
            LabStructure::QModPStar(p) => write!(f, "QModPStar({p})"),
        }
    }
}

impl fmt::Display for LabElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabElement::Rat(q) => write!(f, "{q}"),
            LabElement::Pair(a, l) => write!(f, "({a}, {l})"),
            LabElement::Mul(v) => {
                if v.is_zero() {
                    return write!(f, "0");
                }
                if v.exponents().is_empty() {
                    return write!(f, "{}", if v.signum() < 0 { "-1" } else { "1" });
                }
                if v.signum() < 0 {
                    write!(f, "-")?;
                }
                let parts: Vec<String> = v
                    .exponents()
                    .iter()
                    .map(|(p, e)| if e.is_one() { p.to_string() } else { format!("{p}^({e})") })
                    .collect();
                write!(f, "{}", parts.join("*"))
            }
        }
    }
}

/// `Name(a, b, …)` with a case-insensitive name.
fn split_call(s: &str) -> Option<(String, Vec<u64>)> {
    let s = s.trim();
    let (name, args) = match s.split_once('(') {
        Some((n, rest)) => (n, rest.strip_suffix(')')?),
        None => (s, ""),
    };
    let args = args
        .split(',')
        .map(str::trim)
        .filter(|a| !a.is_empty())
        .map(|a| a.parse().ok())
        .collect::<Option<Vec<u64>>>()?;
    Some((name.trim().to_ascii_lowercase().replace(['-', '_'], ""), args))
}

impl FromStr for LabStructure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Structure(format!("cannot read `{s}`"));
        let (name, args) = split_call(s).ok_or_else(bad)?;
        let [n] = args[..] else { return Err(bad()) };
        let st = match name.as_str() {
            "qdivnfact" => LabStructure::QDivNFact(n),
            "lexgroup" => LabStructure::LexGroup(n),
            "powtwogroup" => LabStructure::PowTwoGroup(n),
            "qmodpstar" => LabStructure::QModPStar(n),
            _ => return Err(bad()),
        };
        st.validate()?;
        Ok(st)
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClaimId::Closure => write!(f, "closure"),
            ClaimId::DivisibleBy(n) => write!(f, "divisible_by({n})"),
            ClaimId::Discreteness => write!(f, "discreteness"),
            ClaimId::Roots(k) => write!(f, "roots({k})"),
            ClaimId::AllPthPowers => write!(f, "all_elements_are_pth_powers"),
            ClaimId::M10(n) => write!(f, "m10({n})"),
            ClaimId::M11 { n, ms } if ms.is_empty() => write!(f, "m11({n})"),
            ClaimId::M11 { n, ms } => {
                let ms: Vec<String> = ms.iter().map(u64::to_string).collect();
                write!(f, "m11({n}, {})", ms.join(", "))
            }
        }
    }
}

impl FromStr for ClaimId {
    type Err = Error;

    /// `closure`, `divisible_by(n)`, `discreteness`, `roots(k)` (alias
    /// `odd_roots(k)`), `all_elements_are_pth_powers`, `m10(n)`, and
    /// `m11(n, m₀, m₁, …)`; a bare `m11` is filled in by [`lab_check`] as
    /// the instance `n = 1`, `m₀ = p`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Unsupported(format!("unknown claim `{s}`"));
        let (name, args) = split_call(s).ok_or_else(bad)?;
        Ok(match (name.as_str(), &args[..]) {
            ("closure", []) => ClaimId::Closure,
            ("divisibleby", [n]) => ClaimId::DivisibleBy(*n),
            ("discreteness", []) => ClaimId::Discreteness,
            ("roots" | "oddroots", [k]) => ClaimId::Roots(*k),
            ("allelementsarepthpowers", []) => ClaimId::AllPthPowers,
            ("m10", [n]) => ClaimId::M10(*n),
            ("m11", []) => ClaimId::M11 { n: 1, ms: vec![] },
            ("m11", [n, ms @ ..]) => ClaimId::M11 {
                n: *n,
                ms: ms.to_vec(),
            },
            _ => return Err(bad()),
        })
    }
}

/// Decides membership of an encoded element.
pub fn lab_member(structure: LabStructure, encoded: &str) -> Result<bool> {
    structure.validate()?;
    Ok(structure.contains(&structure.parse_element(encoded)?))
}

/// Evaluates a schema instance on the structure: directly where the
/// instance is decidable from the encoding, on the canonical witness plus
/// seeded samples otherwise.
pub fn lab_check(structure: LabStructure, claim: &ClaimId, params: &ClaimParams) -> Result<ClaimResult> {
    structure.validate()?;
    let claim = &match (structure, claim) {
        (LabStructure::QModPStar(p), ClaimId::M11 { n, ms }) if ms.is_empty() => ClaimId::M11 {
            n: *n,
            ms: vec![p],
        },
        _ => claim.clone(),
    };
    let mut lab = Lab {
        st: structure,
        claim: claim.clone(),
        rng: ChaCha8Rng::seed_from_u64(params.seed),
        samples: params.samples,
    };
    let given = match &params.x {
        Some(s) => Some(structure.parse_element(s)?),
        None => None,
    };
    use LabStructure::*;
    match (structure, claim) {
        (_, ClaimId::Closure) => Ok(lab.closure()),
        (QDivNFact(_) | LexGroup(_), ClaimId::DivisibleBy(n)) if *n >= 1 => lab.divisible_by(*n, given),
        (QDivNFact(_) | LexGroup(_), ClaimId::Discreteness) => Ok(lab.discreteness()),
        (PowTwoGroup(_), ClaimId::Roots(k)) if k % 2 == 1 => lab.roots(*k, given),
        (QModPStar(_), ClaimId::Roots(k)) if *k >= 1 => lab.roots(*k, given),
        (QModPStar(p), ClaimId::AllPthPowers) => lab.roots(p, given),
        (QModPStar(_), ClaimId::M10(n)) if *n >= 1 => lab.m10(*n),
        (QModPStar(p), ClaimId::M11 { n, ms }) if *n >= 1 && ms.iter().all(|m| *m > 1) => {
            Ok(lab.m11(p, *n, ms))
        }
        _ => Err(Error::InapplicableClaim {
            structure: structure.to_string(),
            claim: claim.to_string(),
        }),
    }
}

struct Lab {
    st: LabStructure,
    claim: ClaimId,
    rng: ChaCha8Rng,
    samples: usize,
}

impl Lab {
    fn result(&self, holds: bool, checked: usize, witness: Option<String>, reason: String) -> ClaimResult {
        ClaimResult {
            structure: self.st.to_string(),
            claim: self.claim.to_string(),
            holds,
            checked,
            witness,
            reason,
        }
    }

    fn holds(&self, checked: usize, reason: impl Into<String>) -> ClaimResult {
        self.result(true, checked, None, reason.into())
    }

    fn fails(&self, checked: usize, witness: impl fmt::Display, reason: String) -> ClaimResult {
        self.result(false, checked, Some(witness.to_string()), reason)
    }

    /// The given element, or the canonical witness followed by samples.
    fn elements(&mut self, given: Option<LabElement>) -> Vec<LabElement> {
        match given {
            Some(x) => vec![x],
            None => {
                let mut out = vec![self.st.canonical_witness()];
                out.extend((0..self.samples).map(|_| self.st.sample(&mut self.rng)));
                out
            }
        }
    }

    fn closure(&mut self) -> ClaimResult {
        let st = self.st;
        for i in 0..self.samples {
            let a = st.sample(&mut self.rng);
            let b = st.sample(&mut self.rng);
            let c = st.op(&a, &b);
            if !st.contains(&c) {
                return self.fails(i + 1, format!("{a}, {b}"), format!("the product {c} leaves the carrier"));
            }
            if let Some(inv) = st.inverse(&a) {
                if !st.contains(&inv) || !st.contains(&st.op(&a, &inv)) {
                    return self.fails(i + 1, &a, format!("the inverse {inv} leaves the carrier"));
                }
            }
            if st.cmp(&a, &b) != st.cmp(&b, &a).reverse() {
                return self.fails(i + 1, format!("{a}, {b}"), "the order is not antisymmetric".into());
            }
        }
        self.holds(self.samples, "operation, inverses and order stay in the carrier on every sampled pair")
    }

    /// The only candidate for `y` is forced by the first coordinate, so the
    /// instance holds at `x` exactly when `a/n` is in `ℚ/N!`.
    fn divisible_by(&mut self, n: u64, given: Option<LabElement>) -> Result<ClaimResult> {
        let base = self.st.base();
        let nq = BigRational::from_integer(n.into());
        let xs = self.elements(given);
        for (i, x) in xs.iter().enumerate() {
            let a = match x {
                LabElement::Rat(a) | LabElement::Pair(a, _) => a,
                LabElement::Mul(_) => return Err(Error::MalformedElement(x.to_string())),
            };
            if !self.st.contains(x) {
                return Err(Error::MalformedElement(format!("{x} is not in {}", self.st)));
            }
            let y = a / &nq;
            if !in_q_over(&y, &base) {
                let why = match x {
                    LabElement::Pair(..) => format!("x = {x} forces a = {y}"),
                    _ => format!("x/{n} = {y}"),
                };
                return Ok(self.fails(i + 1, x, format!("{why}, which is not in ℚ/{base}")));
            }
        }
        Ok(self.holds(xs.len(), format!("x/{n} stays in ℚ/{base} for every tested x")))
    }

    /// Pairs `x < x + 1/N!` refute discreteness in the dense group; in the
    /// lexicographic group `(a, ℓ) + 1 = (a, ℓ + 1)` is always the successor.
    fn discreteness(&mut self) -> ClaimResult {
        let st = self.st;
        let one = st.one();
        let step = match st {
            LabStructure::LexGroup(_) => LabElement::Pair(BigRational::zero(), BigInt::one()),
            _ => LabElement::Rat(BigRational::new(BigInt::one(), st.base())),
        };
        let mut pairs = Vec::new();
        for _ in 0..self.samples {
            let x = st.sample(&mut self.rng);
            let y = match self.rng.gen_range(0..3) {
                0 => st.op(&x, &step),
                1 => st.op(&x, &one),
                _ => st.sample(&mut self.rng),
            };
            pairs.push((x, y));
        }
        let zero = match st {
            LabStructure::LexGroup(_) => LabElement::Pair(BigRational::zero(), BigInt::zero()),
            _ => LabElement::Rat(BigRational::zero()),
        };
        pairs.insert(0, (zero.clone(), st.op(&zero, &step)));
        for (i, (x, y)) in pairs.iter().enumerate() {
            let lt = st.cmp(x, y) == Ordering::Less;
            let le_succ = st.cmp(&st.op(x, &one), y) != Ordering::Greater;
            if lt != le_succ {
                return self.fails(i + 1, format!("{x}, {y}"), format!("{x} < {y} but {y} < {x} + 1"));
            }
        }
        self.holds(pairs.len(), "x < y iff x + 1 ≤ y on every sampled pair")
    }

    /// The `k`-th root is unique in these groups (odd `k` for the signed
    /// one), so the instance holds at `x` exactly when it is a member.
    fn roots(&mut self, k: u64, given: Option<LabElement>) -> Result<ClaimResult> {
        let xs = self.elements(given);
        let ki = k as i64;
        for (i, x) in xs.iter().enumerate() {
            let LabElement::Mul(v) = x else {
                return Err(Error::MalformedElement(x.to_string()));
            };
            if !self.st.contains(x) {
                return Err(Error::MalformedElement(format!("{x} is not in {}", self.st)));
            }
            let y = if v.is_zero() {
                PowerProduct::zero()
            } else if v.signum() < 0 {
                v.neg().root(ki).neg()
            } else {
                v.root(ki)
            };
            let y = LabElement::Mul(y);
            if !self.st.contains(&y) {
                return Ok(self.fails(
                    i + 1,
                    x,
                    format!("the only real {k}-th root of {x} is {y}, which is not in {}", self.st),
                ));
            }
        }
        Ok(self.holds(xs.len(), format!("every tested element has a {k}-th root in {}", self.st)))
    }

    /// Each instance is met by a rational `y`: `ℚ⁺` is dense in the reals
    /// and lies inside `(ℚ/p)*`. Found by exact bisection.
    fn m10(&mut self, n: u64) -> Result<ClaimResult> {
        let st = self.st;
        for i in 0..self.samples {
            let mut x = expect_mul(st.sample(&mut self.rng));
            let mut z = expect_mul(st.sample(&mut self.rng));
            match x.cmp(&z) {
                Ordering::Equal => continue,
                Ordering::Greater => std::mem::swap(&mut x, &mut z),
                Ordering::Less => {}
            }
            let Some(y) = power_between(&x, &z, n) else {
                return Err(Error::Unsupported(format!(
                    "no dyadic y with {x} < y^{n} < {z} within the bisection budget"
                )));
            };
            let yv = LabElement::Mul(PowerProduct::from_rational(&y)?);
            if !st.contains(&yv) {
                return Ok(self.fails(i + 1, format!("{x}, {z}"), format!("{y} is not in {st}")));
            }
        }
        Ok(self.holds(self.samples, format!("every sampled x < z has a rational y with x < y^{n} < z")))
    }

    /// `Ρₘ(w)` holds in `(ℚ/p)*` iff every exponent over `m` is in `ℚ/p`,
    /// i.e. iff the `p`-free part of `m` divides every exponent numerator.
    /// So the instance fails (at `xⱼ = 1`) as soon as some conjunct has a
    /// `p`-free part dividing `n`; otherwise the fresh-prime construction
    /// `y = ∏ ρᵢ^{tᵢ/p^{vᵢ+1}}` meets it for every tuple.
    fn m11(&mut self, p: u64, n: u64, ms: &[u64]) -> ClaimResult {
        let st = self.st;
        let active: Vec<u64> = ms.iter().copied().filter(|m| !n.is_multiple_of(*m)).collect();
        if active.is_empty() {
            return self.holds(0, "every mⱼ divides n: the instance is vacuous");
        }
        let free: Vec<u64> = active.iter().map(|m| p_free(*m, p)).collect();
        if let Some(j) = free.iter().position(|f| n.is_multiple_of(*f)) {
            let m = active[j];
            for i in 0..self.samples {
                let y = expect_mul(st.sample(&mut self.rng));
                let yn = y.pow(n as i64);
                if !is_power_in(&yn, m, p) {
                    return self.fails(i + 1, LabElement::Mul(y), "bug: no m-th root".into());
                }
            }
            let why = if n == 1 && m == p {
                format!("(ℚ/{p})* ⊨ ∀y Ρ_{p}(y)")
            } else {
                format!("y^{n} is an {m}-th power for every y")
            };
            return self.fails(
                self.samples,
                format!("x_{j} = 1"),
                format!("{why}, so y^{n}·x_{j} = z^{m} always has a solution z"),
            );
        }
        let primes = primes_up_to(1000);
        let q = active.len();
        for i in 0..self.samples {
            let xs: Vec<PowerProduct> = (0..q).map(|_| expect_mul(st.sample(&mut self.rng))).collect();
            let mut y = PowerProduct::one();
            for (k, x) in xs.iter().enumerate() {
                let rho = primes[k];
                let r = x.exponents().get(&rho).cloned().unwrap_or_else(BigRational::zero);
                let (u, v) = split_p_power(&r, p);
                let t = if (&u % BigInt::from(free[k])).is_zero() { 1 } else { free[k] };
                let e = BigRational::new(t.into(), num_traits::pow(BigInt::from(p), v + 1));
                y = y.mul(&PowerProduct::new(1, [(rho, e)]));
            }
            for (k, x) in xs.iter().enumerate() {
                if is_power_in(&y.pow(n as i64).mul(x), active[k], p) {
                    return self.fails(
                        i + 1,
                        format!("x_{k} = {}", LabElement::Mul(x.clone())),
                        format!("the constructed y = {} fails", LabElement::Mul(y)),
                    );
                }
            }
        }
        self.holds(self.samples, "the fresh-prime y meets every sampled tuple")
    }
}

fn expect_mul(x: LabElement) -> PowerProduct {
    match x {
        LabElement::Mul(v) => v,
        _ => unreachable!("multiplicative structure"),
    }
}

fn p_free(mut m: u64, p: u64) -> u64 {
    while m.is_multiple_of(p) {
        m /= p;
    }
    m
}

/// `r = u / pᵛ` with `v` minimal.
fn split_p_power(r: &BigRational, p: u64) -> (BigInt, usize) {
    let mut d = r.denom().clone();
    let mut v = 0;
    let pb = BigInt::from(p);
    while d.is_multiple_of(&pb) {
        d /= &pb;
        v += 1;
    }
    debug_assert!(d.is_one());
    (r.numer().clone(), v)
}

fn is_power_in(w: &PowerProduct, m: u64, p: u64) -> bool {
    let f = BigInt::from(p_free(m, p));
    w.exponents().values().all(|e| split_p_power(e, p).0.is_multiple_of(&f))
}

/// `yⁿ` against `x`, exactly: with `D` clearing the exponent denominators
/// of `x`, compare `y^{nD}` with the rational `x^D`.
fn cmp_power(y: &BigRational, n: u64, x: &PowerProduct) -> Ordering {
    let d = x
        .exponents()
        .values()
        .fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
    let d = d.to_i64().expect("small exponent denominators");
    let xd = x.pow(d).to_rational().expect("integer exponents");
    num_traits::pow(y.clone(), n as usize * d as usize).cmp(&xd)
}

fn power_between(x: &PowerProduct, z: &PowerProduct, n: u64) -> Option<BigRational> {
    let two = BigRational::from_integer(2.into());
    let mut lo = BigRational::zero();
    let mut hi = BigRational::one();
    while cmp_power(&hi, n, x) != Ordering::Greater {
        lo = hi.clone();
        hi *= &two;
    }
    let mut y = hi.clone();
    for _ in 0..4000 {
        if cmp_power(&y, n, x) == Ordering::Greater && cmp_power(&y, n, z) == Ordering::Less {
            return Some(y);
        }
        if cmp_power(&y, n, x) != Ordering::Greater {
            lo = y.clone();
        } else {
            hi = y.clone();
        }
        y = (&lo + &hi) / &two;
    }
    None
}
