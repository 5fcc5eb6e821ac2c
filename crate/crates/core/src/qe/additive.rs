//! Divisible ordered abelian groups and Presburger arithmetic.
//!
//! Literals are read as `t > 0`, `t = 0` or `t ≡ₙ 0` with `t` linear.
//! Each one mentioning `x` is scaled so that `x` has coefficient `±α`,
//! `α` the lcm of the coefficients, and `y = α·x` is eliminated instead.
//! Over ℚ and ℝ every `y` is a multiple of `α`; over ℤ the literal
//! `y ≡_α 0` records the restriction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::gcd_ext;
use crate::error::Result;
use crate::normalize::{LinRel, LinearAtom, LinearTerm, Literal};
use crate::syntax::Formula;

use super::unsupported;

/// A literal about `y` with unit coefficient; `t` is `x`-free.
enum Bound {
    /// `t < y`
    Lower(LinearTerm),
    /// `y < t`
    Upper(LinearTerm),
    /// `y = t`
    Equal(LinearTerm),
    /// `y ≡ₙ t`
    Cong(LinearTerm, BigInt),
}

struct Block {
    bounds: Vec<Bound>,
    /// Literals whose `x` coefficient cancelled.
    rest: Vec<Formula>,
    alpha: BigInt,
}

fn uniformize(x: &str, lits: &[Literal], integral: bool) -> Result<std::result::Result<Block, bool>> {
    let mut atoms = Vec::new();
    let mut rest = Vec::new();
    for lit in lits {
        if !lit.positive {
            return Err(unsupported("additive engine expects positive literals", lit));
        }
        let a = LinearAtom::from_atom(&lit.atom)
            .ok_or_else(|| unsupported("not a linear atom", lit))?;
        let a = match a.canonical(integral) {
            Ok(a) => a,
            Err(true) => continue,
            Err(false) => return Ok(Err(false)),
        };
        if a.term.coeff(x).is_zero() {
            rest.push(a.to_formula());
        } else {
            atoms.push(a);
        }
    }
    let alpha = atoms
        .iter()
        .fold(BigInt::one(), |acc, a| acc.lcm(&a.term.coeff(x)));
    let mut bounds = Vec::new();
    for a in atoms {
        let c = a.term.coeff(x);
        let k = &alpha / c.abs();
        // After scaling, the literal reads ±(y + r) ⋈ 0.
        let r = a.term.without(x).scale(&k);
        let neg_r = r.scale(&-BigInt::one());
        bounds.push(match (&a.rel, c.is_positive()) {
            (LinRel::Pos, true) => Bound::Lower(neg_r),
            (LinRel::Pos, false) => Bound::Upper(r),
            (LinRel::Zero, true) => Bound::Equal(neg_r),
            (LinRel::Zero, false) => Bound::Equal(r),
            (LinRel::Cong(n), true) => Bound::Cong(neg_r, n * &k),
            (LinRel::Cong(n), false) => Bound::Cong(r, n * &k),
        });
    }
    Ok(Ok(Block {
        bounds,
        rest,
        alpha,
    }))
}

fn pos(t: LinearTerm) -> Formula {
    LinearAtom::pos(t).to_formula()
}

fn zero(t: LinearTerm) -> Formula {
    LinearAtom::zero(t).to_formula()
}

fn cong(t: LinearTerm, n: BigInt) -> Formula {
    LinearAtom::cong(t, n).to_formula()
}

/// The outcome once `y` is pinned to `e`.
fn substitute(e: &LinearTerm, bounds: &[Bound]) -> Vec<Formula> {
    bounds
        .iter()
        .map(|b| match b {
            Bound::Lower(l) => pos(e.sub(l)),
            Bound::Upper(u) => pos(u.sub(e)),
            Bound::Equal(e2) => zero(e.sub(e2)),
            Bound::Cong(t, n) => cong(e.sub(t), n.clone()),
        })
        .collect()
}

pub(super) fn eliminate_doag(x: &str, lits: &[Literal]) -> Result<Formula> {
    let block = match uniformize(x, lits, false)? {
        Ok(b) => b,
        Err(v) => return Ok(Formula::from(v)),
    };
    let mut out = block.rest;
    if let Some(e) = block.bounds.iter().find_map(|b| match b {
        Bound::Equal(e) => Some(e.clone()),
        _ => None,
    }) {
        out.extend(substitute(&e, &block.bounds));
        return Ok(Formula::and_all(out));
    }
    for u in block.bounds.iter().filter_map(|b| match b {
        Bound::Upper(u) => Some(u),
        _ => None,
    }) {
        for l in block.bounds.iter().filter_map(|b| match b {
            Bound::Lower(l) => Some(l),
            _ => None,
        }) {
            out.push(pos(u.sub(l)));
        }
    }
    Ok(Formula::and_all(out))
}

pub(super) fn eliminate_presburger(x: &str, lits: &[Literal]) -> Result<Formula> {
    let mut block = match uniformize(x, lits, true)? {
        Ok(b) => b,
        Err(v) => return Ok(Formula::from(v)),
    };
    if block.alpha > BigInt::one() {
        block
            .bounds
            .push(Bound::Cong(LinearTerm::default(), block.alpha.clone()));
    }
    let mut out = block.rest;
    if let Some(e) = block.bounds.iter().find_map(|b| match b {
        Bound::Equal(e) => Some(e.clone()),
        _ => None,
    }) {
        out.extend(substitute(&e, &block.bounds));
        return Ok(Formula::and_all(out));
    }

    let mut lowers = Vec::new();
    let mut uppers = Vec::new();
    let mut congs = Vec::new();
    for b in block.bounds {
        match b {
            Bound::Lower(l) => lowers.push(l),
            Bound::Upper(u) => uppers.push(u),
            Bound::Cong(t, n) => congs.push((n, t)),
            Bound::Equal(_) => unreachable!(),
        }
    }

    // Merge the congruences into one, keeping the compatibility conditions.
    let mut merged: Option<(BigInt, LinearTerm)> = None;
    for (n1, t1) in congs {
        merged = Some(match merged {
            None => (n1, t1),
            Some((n0, t0)) => {
                let bz = gcd_ext(&n0, &n1)?;
                let d = bz.d;
                if d > BigInt::one() {
                    out.push(cong(t0.sub(&t1), d.clone()));
                }
                let n = &n0 / &d * &n1;
                // t ≡ t₀ (n₀) and t ≡ t₁ (n₁) for u·n₀ + v·n₁ = d.
                let t = t1
                    .scale(&(&bz.u * (&n0 / &d)))
                    .add(&t0.scale(&(&bz.v * (&n1 / &d))));
                (n.clone(), reduce_mod(t, &n))
            }
        });
    }

    if lowers.is_empty() || uppers.is_empty() {
        return Ok(Formula::and_all(out));
    }

    // One disjunct per choice of the greatest lower and least upper bound.
    let mut cases = Vec::new();
    for (i, l) in lowers.iter().enumerate() {
        for (j, u) in uppers.iter().enumerate() {
            let mut case = Vec::new();
            for (i2, l2) in lowers.iter().enumerate() {
                if i2 != i {
                    // l₂ ≤ l
                    case.push(pos(l.sub(l2).add_const(&BigRational::one())));
                }
            }
            for (j2, u2) in uppers.iter().enumerate() {
                if j2 != j {
                    case.push(pos(u2.sub(u).add_const(&BigRational::one())));
                }
            }
            case.push(interval(l, u, merged.as_ref()));
            cases.push(Formula::and_all(case));
        }
    }
    out.push(Formula::or_all(cases));
    Ok(Formula::and_all(out))
}

/// `∃y (l < y < u ∧ y ≡ₙ t)`.
///
/// With `ρ = l − t` and `s = u − t − 1` this is `∃z (ρ < n·z ≤ s)`, which
/// holds iff `⋁_{r<n} (s ≡ₙ r ∧ ρ + r < s)`.
fn interval(l: &LinearTerm, u: &LinearTerm, c: Option<&(BigInt, LinearTerm)>) -> Formula {
    let gap = u.sub(l).add_const(&-BigRational::one());
    let Some((n, t)) = c else {
        return pos(gap);
    };
    let s = u.sub(t).add_const(&-BigRational::one());
    let mut r = BigInt::zero();
    let mut alts = Vec::new();
    while &r < n {
        let rq = BigRational::from_integer(r.clone());
        alts.push(Formula::and_all([
            cong(s.add_const(&-rq.clone()), n.clone()),
            pos(gap.add_const(&-rq)),
        ]));
        r += 1;
    }
    Formula::or_all(alts)
}

fn reduce_mod(t: LinearTerm, n: &BigInt) -> LinearTerm {
    LinearTerm {
        coeffs: t
            .coeffs
            .into_iter()
            .map(|(v, c)| (v, c.mod_floor(n)))
            .filter(|(_, c)| !c.is_zero())
            .collect(),
        constant: BigRational::from_integer(t.constant.to_integer().mod_floor(n)),
    }
}
