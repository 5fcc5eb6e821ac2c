//! A cheap refutation test for conjunctions of literals.
//!
//! Literals constraining the same linear form (same shift difference, same
//! monomial) are intersected as intervals. Only those direct clashes are
//! detected; `false` is never returned for a satisfiable conjunction.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::syntax::{Atom, Formula, Term};
use crate::theory::{Family, TheoryId};

use super::dnf::Literal;
use super::fold::eval_ground_term;
use super::linear::{LinRel, LinearAtom, LinearTerm};
use super::monomial::{MonAtom, MonRel};
use super::shift::ShiftAtom;

#[derive(Default)]
struct Interval {
    lo: Option<(BigRational, bool)>,
    hi: Option<(BigRational, bool)>,
    eq: Option<BigRational>,
    empty: bool,
}

impl Interval {
    /// `v ⋈ k` with `⋈` one of `>`, `≥`, `<`, `≤`, `=`.
    fn add(&mut self, rel: Rel, k: BigRational, integral: bool) {
        let (k, rel) = if integral {
            match rel {
                Rel::Gt => (k.floor() + BigRational::from_integer(1.into()), Rel::Ge),
                Rel::Ge => (k.ceil(), Rel::Ge),
                Rel::Lt => (k.ceil() - BigRational::from_integer(1.into()), Rel::Le),
                Rel::Le => (k.floor(), Rel::Le),
                Rel::Eq => {
                    if !k.is_integer() {
                        self.empty = true;
                    }
                    (k, Rel::Eq)
                }
            }
        } else {
            (k, rel)
        };
        match rel {
            Rel::Gt | Rel::Ge => {
                let strict = rel == Rel::Gt;
                let tighter = match &self.lo {
                    None => true,
                    Some((v, s)) => k > *v || (k == *v && strict && !s),
                };
                if tighter {
                    self.lo = Some((k, strict));
                }
            }
            Rel::Lt | Rel::Le => {
                let strict = rel == Rel::Lt;
                let tighter = match &self.hi {
                    None => true,
                    Some((v, s)) => k < *v || (k == *v && strict && !s),
                };
                if tighter {
                    self.hi = Some((k, strict));
                }
            }
            Rel::Eq => match &self.eq {
                Some(v) if *v != k => self.empty = true,
                _ => self.eq = Some(k),
            },
        }
    }

    fn lower(&self) -> Option<(&BigRational, bool)> {
        match (&self.eq, &self.lo) {
            (Some(e), _) => Some((e, false)),
            (None, Some((l, s))) => Some((l, *s)),
            _ => None,
        }
    }

    fn upper(&self) -> Option<(&BigRational, bool)> {
        match (&self.eq, &self.hi) {
            (Some(e), _) => Some((e, false)),
            (None, Some((h, s))) => Some((h, *s)),
            _ => None,
        }
    }

    /// Every value satisfying `self` satisfies `o`.
    fn within(&self, o: &Interval) -> bool {
        if self.is_empty() {
            return true;
        }
        if o.empty {
            return false;
        }
        if let Some((l, s)) = o.lower() {
            match self.lower() {
                Some((a, t)) if a > l || (a == l && (t || !s)) => {}
                _ => return false,
            }
        }
        if let Some((h, s)) = o.upper() {
            match self.upper() {
                Some((a, t)) if a < h || (a == h && (t || !s)) => {}
                _ => return false,
            }
        }
        true
    }

    fn is_empty(&self) -> bool {
        if self.empty {
            return true;
        }
        let below_hi = |v: &BigRational| match &self.hi {
            None => true,
            Some((h, s)) => v < h || (!s && v == h),
        };
        let above_lo = |v: &BigRational| match &self.lo {
            None => true,
            Some((l, s)) => v > l || (!s && v == l),
        };
        if let Some(e) = &self.eq {
            return !(below_hi(e) && above_lo(e));
        }
        match (&self.lo, &self.hi) {
            (Some((l, ls)), Some((h, hs))) => l > h || (l == h && (*ls || *hs)),
            _ => false,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Rel {
    Gt,
    Ge,
    Lt,
    Le,
    Eq,
}

impl Rel {
    fn flip(self) -> Rel {
        match self {
            Rel::Gt => Rel::Lt,
            Rel::Ge => Rel::Le,
            Rel::Lt => Rel::Gt,
            Rel::Le => Rel::Ge,
            Rel::Eq => Rel::Eq,
        }
    }
}

/// False when the literals are jointly unsatisfiable in `theory` by a
/// direct interval clash.
pub fn plausibly_consistent(lits: &[Literal], theory: TheoryId) -> bool {
    Bounds::new(lits, theory).is_some()
}

/// The interval facts of a conjunction, keyed by linear form.
pub struct Bounds<'a> {
    lits: &'a [Literal],
    ivs: BTreeMap<String, Interval>,
    theory: TheoryId,
}

impl<'a> Bounds<'a> {
    /// `None` when the literals clash.
    pub fn new(lits: &'a [Literal], theory: TheoryId) -> Option<Bounds<'a>> {
        let mut ivs: BTreeMap<String, Interval> = BTreeMap::new();
        let integral = theory.is_discrete();
        for l in lits {
            let Some((key, rel, k)) = constraint(&l.atom, l.positive, theory) else {
                continue;
            };
            let iv = ivs.entry(key).or_default();
            iv.add(rel, k, integral);
            if iv.is_empty() {
                return None;
            }
        }
        Some(Bounds { lits, ivs, theory })
    }

    /// True when `l` follows from the conjunction (a sufficient test).
    pub fn entails(&self, l: &Literal) -> bool {
        if self.lits.contains(l) {
            return true;
        }
        let Some((key, rel, k)) = constraint(&l.atom, l.positive, self.theory) else {
            return false;
        };
        let mut want = Interval::default();
        want.add(rel, k, self.theory.is_discrete());
        match self.ivs.get(&key) {
            Some(iv) => iv.within(&want),
            None => false,
        }
    }

    pub fn entails_all(&self, ls: &[Literal]) -> bool {
        ls.iter().all(|l| self.entails(l))
    }
}

/// Drops clauses implied by another clause of the same disjunction, and
/// clauses that clash. Quadratic, so callers bound the input size.
pub fn drop_subsumed(clauses: Vec<Vec<Literal>>, theory: TheoryId) -> Vec<Vec<Literal>> {
    let mut cs: Vec<Vec<Literal>> = clauses;
    cs.sort_by_key(|c| c.len());
    let mut kept: Vec<Vec<Literal>> = Vec::with_capacity(cs.len());
    for c in cs {
        let Some(b) = Bounds::new(&c, theory) else {
            continue;
        };
        if kept.iter().any(|d| b.entails_all(d)) {
            continue;
        }
        drop(b);
        kept.push(c);
    }
    kept.sort();
    kept
}

/// Replaces by `false` every subformula whose enclosing conjunction of
/// literals is refuted by [`plausibly_consistent`]. Only looks through
/// `∧` and `∨`.
pub fn prune(f: &Formula, theory: TheoryId) -> Formula {
    prune_in(f, &mut Vec::new(), theory)
}

pub(crate) fn as_literal(f: &Formula) -> Option<Literal> {
    match f {
        Formula::Atom(a) => Some(Literal::pos(a.clone())),
        Formula::Not(g) => match g.as_ref() {
            Formula::Atom(a) => Some(Literal {
                atom: a.clone(),
                positive: false,
            }),
            _ => None,
        },
        _ => None,
    }
}

fn prune_in(f: &Formula, ctx: &mut Vec<Literal>, theory: TheoryId) -> Formula {
    match f {
        Formula::Atom(_) | Formula::Not(_) => {
            let Some(l) = as_literal(f) else {
                return f.clone();
            };
            ctx.push(l);
            let ok = plausibly_consistent(ctx, theory);
            ctx.pop();
            if ok {
                f.clone()
            } else {
                Formula::False
            }
        }
        Formula::And(gs) => {
            let mark = ctx.len();
            ctx.extend(gs.iter().filter_map(as_literal));
            let out = if plausibly_consistent(ctx, theory) {
                let parts: Vec<Formula> = gs
                    .iter()
                    .map(|g| if as_literal(g).is_some() { g.clone() } else { prune_in(g, ctx, theory) })
                    .collect();
                if parts.contains(&Formula::False) {
                    Formula::False
                } else {
                    Formula::And(parts)
                }
            } else {
                Formula::False
            };
            ctx.truncate(mark);
            out
        }
        Formula::Or(gs) => {
            let parts: Vec<Formula> = gs
                .iter()
                .map(|g| prune_in(g, ctx, theory))
                .filter(|g| *g != Formula::False)
                .collect();
            match parts.len() {
                0 => Formula::False,
                1 => parts.into_iter().next().unwrap(),
                _ => Formula::Or(parts),
            }
        }
        _ => f.clone(),
    }
}

/// The literal as `form ⋈ k`, keyed by the rendered form.
fn constraint(a: &Atom, positive: bool, theory: TheoryId) -> Option<(String, Rel, BigRational)> {
    let (key, rel, k) = match theory.family() {
        Family::Order => {
            let s = ShiftAtom::from_atom(a)?;
            // lhs.base + i ⋈ rhs.base + j  ⟺  lhs.base - rhs.base ⋈ j - i
            let (mut u, mut v) = (s.lhs.base.clone(), s.rhs.base.clone());
            let mut k = BigRational::from_integer(BigInt::from(s.rhs.shift) - BigInt::from(s.lhs.shift));
            let mut rel = if s.strict { Rel::Lt } else { Rel::Eq };
            if v < u {
                std::mem::swap(&mut u, &mut v);
                k = -k;
                rel = rel.flip();
            }
            (format!("{u:?}-{v:?}"), rel, k)
        }
        Family::Additive => {
            let la = LinearAtom::from_atom(a)?;
            let t = &la.term;
            let (form, scale) = primitive(t)?;
            // t = scale·form + c
            let k = -t.constant.clone() / BigRational::from_integer(scale.clone());
            let rel = match la.rel {
                LinRel::Pos => Rel::Gt,
                LinRel::Zero => Rel::Eq,
                LinRel::Cong(_) => return None,
            };
            let rel = if scale.is_negative() { rel.flip() } else { rel };
            (form, rel, k)
        }
        Family::Multiplicative if matches!(theory, TheoryId::RPosMul | TheoryId::QPosMul) => {
            let ma = MonAtom::from_atom(a)?;
            let m = &ma.m;
            if m.exps.is_empty() {
                return None;
            }
            // c·M ⋈ 1 ⟺ M ⋈ 1/c, with M oriented to a positive first exponent.
            let flip = *m.exps.values().next().unwrap() < 0;
            let exps: Vec<(String, i64)> = m
                .exps
                .iter()
                .map(|(v, e)| (v.clone(), if flip { -e } else { *e }))
                .collect();
            let rel = match ma.rel {
                MonRel::Lt1 => Rel::Lt,
                MonRel::Eq1 => Rel::Eq,
                MonRel::Pow(_) => return None,
            };
            let (rel, k) = if flip {
                (rel.flip(), m.coeff.clone())
            } else {
                (rel, m.coeff.recip())
            };
            (format!("{exps:?}"), rel, k)
        }
        Family::Multiplicative => {
            // Signed theories: only comparisons of `c·v` with a constant.
            let (l, r, rel) = match a {
                Atom::Lt(l, r) => (l, r, Rel::Lt),
                Atom::Eq(l, r) => (l, r, Rel::Eq),
                _ => return None,
            };
            let (v, c, k, rel) = match (scaled_var(l), eval_ground_term(r)) {
                (Some((v, c)), Some(k)) => (v, c, k, rel),
                _ => {
                    let (v, c) = scaled_var(r)?;
                    (v, c, eval_ground_term(l)?, rel.flip())
                }
            };
            let rel = if c.is_negative() { rel.flip() } else { rel };
            (v, rel, k / c)
        }
    };
    if positive {
        return Some((key, rel, k));
    }
    let neg = match rel {
        Rel::Gt => Rel::Le,
        Rel::Ge => Rel::Lt,
        Rel::Lt => Rel::Ge,
        Rel::Le => Rel::Gt,
        Rel::Eq => return None,
    };
    Some((key, neg, k))
}

/// `t = c·v` with `c ≠ 0` a constant.
fn scaled_var(t: &Term) -> Option<(String, BigRational)> {
    match t {
        Term::Var(v) => Some((v.clone(), BigRational::one())),
        Term::Neg(a) => scaled_var(a).map(|(v, c)| (v, -c)),
        Term::Mul(a, b) => match (eval_ground_term(a), eval_ground_term(b)) {
            (Some(c), None) if !c.is_zero() => scaled_var(b).map(|(v, d)| (v, c * d)),
            (None, Some(c)) if !c.is_zero() => scaled_var(a).map(|(v, d)| (v, c * d)),
            _ => None,
        },
        _ => None,
    }
}

/// The variable part of `t` divided by its content, with a positive first
/// coefficient, and the signed factor taken out.
fn primitive(t: &LinearTerm) -> Option<(String, BigInt)> {
    use num_integer::Integer;
    let first = t.coeffs.values().next()?;
    let g = t.coeffs.values().fold(BigInt::zero(), |g, c| g.gcd(c));
    let scale = if first.is_negative() { -g } else { g };
    let form: Vec<(String, BigInt)> = t
        .coeffs
        .iter()
        .map(|(v, c)| (v.clone(), c / &scale))
        .collect();
    Some((format!("{form:?}"), scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn check(s: &str, th: TheoryId) -> bool {
        let f = parse_formula(s, th).unwrap();
        let lits: Vec<Literal> = match &f {
            Formula::And(xs) => xs
                .iter()
                .map(|x| match x {
                    Formula::Atom(a) => Literal::pos(a.clone()),
                    Formula::Not(b) => match b.as_ref() {
                        Formula::Atom(a) => Literal {
                            atom: a.clone(),
                            positive: false,
                        },
                        _ => unreachable!(),
                    },
                    _ => unreachable!(),
                })
                .collect(),
            _ => unreachable!(),
        };
        plausibly_consistent(&lits, th)
    }

    #[test]
    fn prunes_nested() {
        let f = parse_formula("0 < c & (c + 1 < 0 & b = 1 | c = 2) | c < 0", TheoryId::ZAdd).unwrap();
        assert_eq!(prune(&f, TheoryId::ZAdd).to_string(), "0 < c & c = 2 | c < 0");
    }

    #[test]
    fn subsumption() {
        let th = TheoryId::ZAdd;
        let clauses = |s: &str| -> Vec<Vec<Literal>> {
            let f = parse_formula(s, th).unwrap();
            let or = match f {
                Formula::Or(xs) => xs,
                g => vec![g],
            };
            or.iter()
                .map(|c| match c {
                    Formula::And(xs) => xs.iter().map(|x| as_literal(x).unwrap()).collect(),
                    x => vec![as_literal(x).unwrap()],
                })
                .collect()
        };
        let out = drop_subsumed(clauses("0 < a & 0 < c | 1 < a & 1 < c & b = 2 | 0 < a & c < 0 | a < 0 & c = 0 & 0 < c"), th);
        assert_eq!(out.len(), 2);
        // 1 < 2a entails 0 < a over the integers only.
        let out = drop_subsumed(clauses("0 < a | 1 < 2 * a & b = 0"), th);
        assert_eq!(out.len(), 1);
        let out = drop_subsumed(clauses("2 < 2 * a | 0 < a & b < 1"), TheoryId::QAdd);
        assert_eq!(out.len(), 2);
        let out = drop_subsumed(clauses("1 < a | 2 * a = 5"), TheoryId::QAdd);
        assert_eq!(out.len(), 1);
    }

    #[test]
    fn clashes() {
        assert!(!check("0 < c & c < 0", TheoryId::ZAdd));
        assert!(!check("c < 0 & c = 0", TheoryId::ZAdd));
        assert!(!check("c < 1 & 0 < c", TheoryId::ZAdd));
        assert!(check("c < 1 & 0 < c", TheoryId::QAdd));
        assert!(!check("2 * a + 2 * b = 1 & a < 3", TheoryId::ZAdd));
        // Disequalities are not used.
        assert!(check("a + 1 < b & b < a + 3 & ~(b = a + 2)", TheoryId::ZAdd));
        assert!(!check("x < y & y < x", TheoryId::Dlo));
        assert!(!check("s(x) < y & y < s(s(x))", TheoryId::ZOrder));
        assert!(check("s(x) < y & y < s(s(s(x)))", TheoryId::ZOrder));
        assert!(!check("u < 2 * w & 3 * w < u", TheoryId::RPosMul));
        assert!(!check("u * w^-1 < 2 & 3 < u * w^-1", TheoryId::RPosMul));
        assert!(check("u < w & x < y", TheoryId::Dlo));
        assert!(!check("a < 2 & ~(a < 3)", TheoryId::QAdd));
    }
}
