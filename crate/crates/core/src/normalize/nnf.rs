use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::syntax::{Atom, Formula, Term};
use crate::theory::TheoryId;

use super::fold::eval_ground_term;

/// Pushes negations down to atoms and removes `->` and `<->`.
pub fn to_nnf(f: &Formula) -> Formula {
    nnf(f, true)
}

fn nnf(f: &Formula, pos: bool) -> Formula {
    match f {
        Formula::True => {
            if pos {
                Formula::True
            } else {
                Formula::False
            }
        }
        Formula::False => {
            if pos {
                Formula::False
            } else {
                Formula::True
            }
        }
        Formula::Atom(_) => {
            if pos {
                f.clone()
            } else {
                Formula::not(f.clone())
            }
        }
        Formula::Not(g) => nnf(g, !pos),
        Formula::And(gs) | Formula::Or(gs) => {
            let parts = gs.iter().map(|g| nnf(g, pos)).collect();
            if matches!(f, Formula::And(_)) == pos {
                Formula::And(parts)
            } else {
                Formula::Or(parts)
            }
        }
        Formula::Implies(a, b) => {
            if pos {
                Formula::Or(vec![nnf(a, false), nnf(b, true)])
            } else {
                Formula::And(vec![nnf(a, true), nnf(b, false)])
            }
        }
        Formula::Iff(a, b) => {
            // (a ∧ b) ∨ (¬a ∧ ¬b), or its negation (a ∧ ¬b) ∨ (¬a ∧ b).
            Formula::Or(vec![
                Formula::And(vec![nnf(a, true), nnf(b, pos)]),
                Formula::And(vec![nnf(a, false), nnf(b, !pos)]),
            ])
        }
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            let body = Box::new(nnf(g, pos));
            if matches!(f, Formula::Exists(..)) == pos {
                Formula::Exists(v.clone(), body)
            } else {
                Formula::Forall(v.clone(), body)
            }
        }
    }
}

/// Rewrites `¬(s < t)` and `¬(s = t)` using totality of the order.
///
/// Negated power atoms stay (they are literals of their own); negated
/// congruences stay for [`expand_congruence_negations`].
pub fn remove_order_negations(f: &Formula, _theory: TheoryId) -> Formula {
    map_literals(f, &mut |atom, negated| match (atom, negated) {
        (Atom::Lt(s, t), true) => Formula::Or(vec![
            Formula::lt(t.clone(), s.clone()),
            Formula::eq(t.clone(), s.clone()),
        ]),
        (Atom::Eq(s, t), true) => Formula::Or(vec![
            Formula::lt(s.clone(), t.clone()),
            Formula::lt(t.clone(), s.clone()),
        ]),
        (a, true) => Formula::not(Formula::Atom(a.clone())),
        (a, false) => Formula::Atom(a.clone()),
    })
}

/// `¬(a ≡ₙ b)` becomes `⋁_{0<i<n} a ≡ₙ b + i`.
pub fn expand_congruence_negations(f: &Formula) -> Formula {
    map_literals(f, &mut |atom, negated| match (atom, negated) {
        (Atom::Cong(a, b, n), true) => {
            let n_small = n.to_u64().expect("congruence modulus fits in u64");
            Formula::Or(
                (1..n_small)
                    .map(|i| {
                        let shifted = match eval_ground_term(b) {
                            Some(k) => Term::Const(k + BigRational::from_integer(i.into())),
                            None => Term::add(b.clone(), Term::int(i as i64)),
                        };
                        Formula::cong(a.clone(), shifted, BigInt::from(n_small))
                    })
                    .collect(),
            )
        }
        (a, true) => Formula::not(Formula::Atom(a.clone())),
        (a, false) => Formula::Atom(a.clone()),
    })
}

fn map_literals(f: &Formula, g: &mut impl FnMut(&Atom, bool) -> Formula) -> Formula {
    match f {
        Formula::Atom(a) => g(a, false),
        Formula::Not(inner) => match inner.as_ref() {
            Formula::Atom(a) => g(a, true),
            other => Formula::not(map_literals(other, g)),
        },
        Formula::True | Formula::False => f.clone(),
        Formula::And(xs) => Formula::And(xs.iter().map(|x| map_literals(x, g)).collect()),
        Formula::Or(xs) => Formula::Or(xs.iter().map(|x| map_literals(x, g)).collect()),
        Formula::Implies(a, b) => Formula::implies(map_literals(a, g), map_literals(b, g)),
        Formula::Iff(a, b) => Formula::iff(map_literals(a, g), map_literals(b, g)),
        Formula::Exists(v, b) => Formula::Exists(v.clone(), Box::new(map_literals(b, g))),
        Formula::Forall(v, b) => Formula::Forall(v.clone(), Box::new(map_literals(b, g))),
    }
}
