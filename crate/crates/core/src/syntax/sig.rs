use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::theory::{Signature, TheoryId};

use super::ast::{Atom, Formula, Term};

/// Rejects any symbol outside `theory`'s signature, for formulas built
/// without going through the parser. Positions are reported as 0.
pub fn check_signature(f: &Formula, theory: TheoryId) -> Result<()> {
    check_against(f, &theory.signature(), &|symbol| deny(theory, symbol))
}

/// [`check_signature`] for a signature that is not one of the theories;
/// violations are reported against `structure`.
pub fn check_signature_of(f: &Formula, sig: &Signature, structure: &str) -> Result<()> {
    check_against(f, sig, &|symbol| Error::BareSignature {
        symbol: symbol.to_string(),
        structure: structure.to_string(),
    })
}

fn check_against(f: &Formula, sig: &Signature, deny: &dyn Fn(&str) -> Error) -> Result<()> {
    let mut err = None;
    f.visit(&mut |g| {
        if err.is_some() {
            return;
        }
        if let Formula::Atom(a) = g {
            if let Err(e) = check_atom(a, sig, deny) {
                err = Some(e);
            }
        }
    });
    err.map_or(Ok(()), Err)
}

fn deny(theory: TheoryId, symbol: &str) -> Error {
    Error::Signature {
        pos: 0,
        symbol: symbol.to_string(),
        theory,
    }
}

fn check_atom(a: &Atom, sig: &Signature, deny: &dyn Fn(&str) -> Error) -> Result<()> {
    match a {
        Atom::Cong(_, _, n) => {
            if !sig.congruence {
                return Err(deny("cong"));
            }
            if *n < BigInt::from(2) {
                return Err(Error::Modulus {
                    pos: 0,
                    modulus: n.to_string(),
                });
            }
        }
        Atom::Pow(n, _) => {
            if !sig.power_predicate {
                return Err(deny("pow"));
            }
            if *n < 2 {
                return Err(Error::Modulus {
                    pos: 0,
                    modulus: n.to_string(),
                });
            }
        }
        _ => {}
    }
    a.terms().into_iter().try_for_each(|t| check_term(t, sig, deny))
}

fn check_term(t: &Term, sig: &Signature, deny: &dyn Fn(&str) -> Error) -> Result<()> {
    let ok = match t {
        Term::Var(_) => true,
        Term::Const(q) => {
            if q.is_zero() {
                sig.zero
            } else if q.is_negative() && !sig.negative_literals {
                false
            } else if !q.is_integer() {
                sig.fractions
            } else {
                (q.is_one() && sig.multiplicative) || sig.integers
            }
        }
        Term::Add(..) => sig.additive,
        Term::Sub(..) => sig.additive && sig.negation,
        Term::Neg(_) => sig.negation,
        Term::Scale(n, _) => sig.additive && (!n.is_negative() || sig.negative_literals),
        Term::Mul(..) | Term::Inv(_) | Term::Pow(..) => sig.multiplicative,
        Term::Succ(_) => sig.succ,
    };
    if !ok {
        let symbol = match t {
            Term::Const(q) => q.to_string(),
            Term::Add(..) => "+".into(),
            Term::Sub(..) | Term::Neg(_) => "-".into(),
            Term::Scale(..) | Term::Mul(..) => "*".into(),
            Term::Inv(_) => "inv".into(),
            Term::Pow(..) => "^".into(),
            Term::Succ(_) => "s".into(),
            Term::Var(_) => unreachable!(),
        };
        return Err(deny(&symbol));
    }
    if let Term::Pow(_, 0) = t {
        return Err(Error::Syntax {
            pos: 0,
            msg: "exponent must be nonzero".into(),
        });
    }
    match t {
        Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) => {
            check_term(a, sig, deny)?;
            check_term(b, sig, deny)
        }
        Term::Neg(a) | Term::Scale(_, a) | Term::Inv(a) | Term::Pow(a, _) | Term::Succ(a) => {
            check_term(a, sig, deny)
        }
        _ => Ok(()),
    }
}
