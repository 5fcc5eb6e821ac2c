use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::is_nth_power;
use crate::syntax::{Atom, Formula, Term};
use crate::theory::{Family, TheoryId};

use super::consistency::{as_literal, plausibly_consistent, Bounds};
use super::dnf::Literal;
use super::linear::LinearAtom;
use super::monomial::MonAtom;
use super::shift::ShiftAtom;

const SUBSUMPTION_MAX: usize = 500;

/// Removes disjuncts that are conjunctions of literals implied by another
/// such disjunct.
fn drop_subsumed_disjuncts(parts: Vec<Formula>, theory: TheoryId) -> Vec<Formula> {
    let as_clause = |p: &Formula| -> Option<Vec<Literal>> {
        match p {
            Formula::And(xs) => xs.iter().map(as_literal).collect(),
            x => Some(vec![as_literal(x)?]),
        }
    };
    let clauses: Vec<Option<Vec<Literal>>> = parts.iter().map(as_clause).collect();
    let mut drop = vec![false; parts.len()];
    for i in 0..parts.len() {
        let Some(ci) = &clauses[i] else { continue };
        let Some(b) = Bounds::new(ci, theory) else {
            drop[i] = true;
            continue;
        };
        drop[i] = clauses.iter().enumerate().any(|(j, cj)| {
            j != i
                && !drop[j]
                && cj.as_ref().is_some_and(|cj| {
                    // Ties between equivalent clauses keep the earlier one.
                    b.entails_all(cj)
                        && (j < i || !Bounds::new(cj, theory).is_some_and(|bj| bj.entails_all(ci)))
                })
        });
    }
    parts
        .into_iter()
        .zip(drop)
        .filter(|(_, d)| !d)
        .map(|(p, _)| p)
        .collect()
}

/// Value of a variable-free term; `0⁻¹ = 0`.
pub fn eval_ground_term(t: &Term) -> Option<BigRational> {
    Some(match t {
        Term::Var(_) => return None,
        Term::Const(q) => q.clone(),
        Term::Add(a, b) => eval_ground_term(a)? + eval_ground_term(b)?,
        Term::Sub(a, b) => eval_ground_term(a)? - eval_ground_term(b)?,
        Term::Neg(a) => -eval_ground_term(a)?,
        Term::Scale(n, a) => BigRational::from_integer(n.clone()) * eval_ground_term(a)?,
        Term::Mul(a, b) => eval_ground_term(a)? * eval_ground_term(b)?,
        Term::Inv(a) => {
            let v = eval_ground_term(a)?;
            if v.is_zero() {
                v
            } else {
                v.recip()
            }
        }
        Term::Pow(a, k) => {
            let v = eval_ground_term(a)?;
            if v.is_zero() {
                v
            } else if *k >= 0 {
                num_traits::pow(v, *k as usize)
            } else {
                num_traits::pow(v.recip(), k.unsigned_abs() as usize)
            }
        }
        Term::Succ(a) => eval_ground_term(a)? + BigRational::one(),
    })
}

/// Truth value of a variable-free atom.
pub fn eval_ground_atom(a: &Atom, _theory: TheoryId) -> Option<bool> {
    Some(match a {
        Atom::Lt(l, r) => eval_ground_term(l)? < eval_ground_term(r)?,
        Atom::Eq(l, r) => eval_ground_term(l)? == eval_ground_term(r)?,
        Atom::Cong(l, r, n) => {
            let d = eval_ground_term(l)? - eval_ground_term(r)?;
            d.is_integer() && d.to_integer().is_multiple_of(n)
        }
        Atom::Pow(n, t) => is_nth_power(&eval_ground_term(t)?, *n),
    })
}

/// Canonical form of an atom in the given theory; may fold to a constant.
pub fn canonical_atom(a: &Atom, theory: TheoryId) -> Formula {
    if let Some(b) = eval_ground_atom(a, theory) {
        return constant(b);
    }
    let decided = |r: Result<Formula, bool>| r.unwrap_or_else(constant);
    match theory.family() {
        Family::Order => match ShiftAtom::from_atom(a) {
            Some(s) => decided(
                s.canonical(theory == TheoryId::NOrder)
                    .map(|c| Formula::Atom(c.to_atom())),
            ),
            None => Formula::Atom(a.clone()),
        },
        Family::Additive => match LinearAtom::from_atom(a) {
            Some(l) => decided(l.canonical(theory.is_discrete()).map(|c| c.to_formula())),
            None => Formula::Atom(a.clone()),
        },
        Family::Multiplicative
            if matches!(theory, TheoryId::RPosMul | TheoryId::QPosMul) =>
        {
            match MonAtom::from_atom(a) {
                Some(m) => decided(m.canonical().map(|c| c.to_formula())),
                None => Formula::Atom(a.clone()),
            }
        }
        Family::Multiplicative => match a {
            Atom::Lt(l, r) if l == r => Formula::False,
            Atom::Eq(l, r) if l == r => Formula::True,
            _ => Formula::Atom(a.clone()),
        },
    }
}

/// `Some(b)` when [`canonical_atom`] decides the atom.
pub fn decide_trivially(a: &Atom, theory: TheoryId) -> Option<bool> {
    match canonical_atom(a, theory) {
        Formula::True => Some(true),
        Formula::False => Some(false),
        _ => None,
    }
}

fn constant(b: bool) -> Formula {
    if b {
        Formula::True
    } else {
        Formula::False
    }
}

fn sort_key(f: &Formula) -> (u8, String) {
    let rank = match f {
        Formula::Atom(Atom::Lt(..)) => 0,
        Formula::Atom(Atom::Eq(..)) => 1,
        Formula::Atom(Atom::Cong(..)) => 2,
        Formula::Atom(Atom::Pow(..)) => 3,
        Formula::Not(_) => 4,
        Formula::And(_) => 5,
        Formula::Or(_) => 6,
        _ => 7,
    };
    (rank, f.to_string())
}

/// Canonicalizes atoms, folds constants, flattens and sorts connectives,
/// drops duplicates and complementary pairs.
pub fn simplify(f: &Formula, theory: TheoryId) -> Formula {
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(a) => canonical_atom(a, theory),
        Formula::Not(g) => negate(simplify(g, theory)),
        Formula::And(gs) | Formula::Or(gs) => {
            let conj = matches!(f, Formula::And(_));
            let (unit, zero) = if conj {
                (Formula::True, Formula::False)
            } else {
                (Formula::False, Formula::True)
            };
            let mut parts = Vec::new();
            for g in gs {
                let s = simplify(g, theory);
                if s == zero {
                    return zero;
                }
                if s == unit {
                    continue;
                }
                match s {
                    Formula::And(xs) if conj => parts.extend(xs),
                    Formula::Or(xs) if !conj => parts.extend(xs),
                    other => parts.push(other),
                }
            }
            let mut keyed: Vec<_> = parts.into_iter().map(|p| (sort_key(&p), p)).collect();
            keyed.sort_by(|a, b| a.0.cmp(&b.0));
            keyed.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1);
            let parts: Vec<Formula> = keyed.into_iter().map(|(_, p)| p).collect();
            for p in &parts {
                if let Formula::Not(inner) = p {
                    if parts.contains(inner) {
                        return zero;
                    }
                }
            }
            if !conj && parts.len() <= SUBSUMPTION_MAX {
                let parts = drop_subsumed_disjuncts(parts, theory);
                return match parts.len() {
                    0 => Formula::False,
                    1 => parts.into_iter().next().unwrap(),
                    _ => Formula::Or(parts),
                };
            }
            if conj {
                let lits: Vec<Literal> = parts
                    .iter()
                    .filter_map(|p| match p {
                        Formula::Atom(a) => Some(Literal::pos(a.clone())),
                        Formula::Not(g) => match g.as_ref() {
                            Formula::Atom(a) => Some(Literal {
                                atom: a.clone(),
                                positive: false,
                            }),
                            _ => None,
                        },
                        _ => None,
                    })
                    .collect();
                if !plausibly_consistent(&lits, theory) {
                    return Formula::False;
                }
            }
            match parts.len() {
                0 => unit,
                1 => parts.into_iter().next().unwrap(),
                _ if conj => Formula::And(parts),
                _ => Formula::Or(parts),
            }
        }
        Formula::Implies(a, b) => {
            let (a, b) = (simplify(a, theory), simplify(b, theory));
            match (&a, &b) {
                (Formula::False, _) | (_, Formula::True) => Formula::True,
                (Formula::True, _) => b,
                (_, Formula::False) => negate(a),
                _ => Formula::implies(a, b),
            }
        }
        Formula::Iff(a, b) => {
            let (a, b) = (simplify(a, theory), simplify(b, theory));
            match (&a, &b) {
                (Formula::True, _) => b,
                (_, Formula::True) => a,
                (Formula::False, _) => negate(b),
                (_, Formula::False) => negate(a),
                _ if a == b => Formula::True,
                _ => Formula::iff(a, b),
            }
        }
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            let body = simplify(g, theory);
            if !body.free_variables().contains(v) {
                return body;
            }
            if matches!(f, Formula::Exists(..)) {
                Formula::Exists(v.clone(), Box::new(body))
            } else {
                Formula::Forall(v.clone(), Box::new(body))
            }
        }
    }
}

fn negate(f: Formula) -> Formula {
    match f {
        Formula::True => Formula::False,
        Formula::False => Formula::True,
        Formula::Not(g) => *g,
        other => Formula::not(other),
    }
}
