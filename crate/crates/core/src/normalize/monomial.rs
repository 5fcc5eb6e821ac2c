use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::syntax::{Atom, Formula, Term};

/// `c · ∏ vᵉ` over positive values: `c > 0`, exponents nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub coeff: BigRational,
    pub exps: BTreeMap<String, i64>,
}

impl Monomial {
    pub fn one() -> Monomial {
        Monomial::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Monomial {
        Monomial {
            coeff: c,
            exps: BTreeMap::new(),
        }
    }

    pub fn var(v: &str) -> Monomial {
        Monomial {
            coeff: BigRational::one(),
            exps: BTreeMap::from([(v.to_string(), 1)]),
        }
    }

    /// Reads a term of the positive multiplicative signature. Exponents
    /// cancel freely, which is only sound when every variable is nonzero.
    pub fn from_term(t: &Term) -> Option<Monomial> {
        Some(match t {
            Term::Var(v) => Monomial::var(v),
            Term::Const(q) if q.is_positive() => Monomial::constant(q.clone()),
            Term::Mul(a, b) => Monomial::from_term(a)?.mul(&Monomial::from_term(b)?),
            Term::Inv(a) => Monomial::from_term(a)?.pow(-1),
            Term::Pow(a, k) => Monomial::from_term(a)?.pow(*k),
            _ => return None,
        })
    }

    pub fn exp(&self, v: &str) -> i64 {
        self.exps.get(v).copied().unwrap_or(0)
    }

    pub fn without(&self, v: &str) -> Monomial {
        let mut m = self.clone();
        m.exps.remove(v);
        m
    }

    pub fn is_constant(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut out = self.clone();
        out.coeff *= &o.coeff;
        for (v, e) in &o.exps {
            *out.exps.entry(v.clone()).or_insert(0) += e;
        }
        out.exps.retain(|_, e| *e != 0);
        out
    }

    pub fn pow(&self, k: i64) -> Monomial {
        let c = if k >= 0 {
            num_traits::pow(self.coeff.clone(), k as usize)
        } else {
            num_traits::pow(self.coeff.recip(), k.unsigned_abs() as usize)
        };
        Monomial {
            coeff: c,
            exps: if k == 0 {
                BTreeMap::new()
            } else {
                self.exps.iter().map(|(v, e)| (v.clone(), e * k)).collect()
            },
        }
    }

    pub fn inv(&self) -> Monomial {
        self.pow(-1)
    }

    pub fn to_term(&self) -> Term {
        product(self.coeff.clone(), self.exps.iter().map(|(v, e)| (v.as_str(), *e)))
    }

    /// The two sides of `self < 1` read as `num < den`.
    fn split(&self) -> (Term, Term) {
        let num = self.coeff.numer().clone();
        let den = self.coeff.denom().clone();
        let up = self.exps.iter().filter(|(_, e)| **e > 0).map(|(v, e)| (v.as_str(), *e));
        let down = self.exps.iter().filter(|(_, e)| **e < 0).map(|(v, e)| (v.as_str(), -*e));
        (
            product(BigRational::from_integer(num), up),
            product(BigRational::from_integer(den), down),
        )
    }
}

fn product<'a>(c: BigRational, factors: impl Iterator<Item = (&'a str, i64)>) -> Term {
    let mut parts: Vec<Term> = Vec::new();
    if !c.is_one() {
        parts.push(Term::Const(c.clone()));
    }
    for (v, e) in factors {
        parts.push(if e == 1 {
            Term::var(v)
        } else {
            Term::pow(Term::var(v), e)
        });
    }
    parts.into_iter().reduce(Term::mul).unwrap_or_else(Term::one)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MonRel {
    /// `m < 1`
    Lt1,
    /// `m = 1`
    Eq1,
    /// `Ρₙ(m)`
    Pow(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonAtom {
    pub m: Monomial,
    pub rel: MonRel,
}

impl MonAtom {
    pub fn from_atom(a: &Atom) -> Option<MonAtom> {
        Some(match a {
            Atom::Lt(l, r) => MonAtom {
                m: Monomial::from_term(l)?.mul(&Monomial::from_term(r)?.inv()),
                rel: MonRel::Lt1,
            },
            Atom::Eq(l, r) => MonAtom {
                m: Monomial::from_term(l)?.mul(&Monomial::from_term(r)?.inv()),
                rel: MonRel::Eq1,
            },
            Atom::Pow(n, t) => MonAtom {
                m: Monomial::from_term(t)?,
                rel: MonRel::Pow(*n),
            },
            Atom::Cong(..) => return None,
        })
    }

    pub fn lt1(m: Monomial) -> MonAtom {
        MonAtom { m, rel: MonRel::Lt1 }
    }

    pub fn eq1(m: Monomial) -> MonAtom {
        MonAtom { m, rel: MonRel::Eq1 }
    }

    pub fn power(n: u64, m: Monomial) -> MonAtom {
        MonAtom {
            m,
            rel: MonRel::Pow(n),
        }
    }

    /// Canonical form over positive values, or the truth value of a ground
    /// atom. Power atoms drop variables whose exponent is a multiple of `n`.
    pub fn canonical(&self) -> Result<MonAtom, bool> {
        let mut m = self.m.clone();
        if let MonRel::Pow(n) = self.rel {
            m.exps.retain(|_, e| e.rem_euclid(n as i64) != 0);
        }
        if m.is_constant() {
            return Err(match self.rel {
                MonRel::Lt1 => m.coeff < BigRational::one(),
                MonRel::Eq1 => m.coeff.is_one(),
                MonRel::Pow(n) => crate::arith::is_nth_power(&m.coeff, n),
            });
        }
        if matches!(self.rel, MonRel::Eq1 | MonRel::Pow(_)) && *m.exps.values().next().unwrap() < 0 {
            m = m.inv();
        }
        Ok(MonAtom {
            m,
            rel: self.rel.clone(),
        })
    }

    pub fn to_formula(&self) -> Formula {
        match self.rel {
            MonRel::Lt1 => {
                let (a, b) = self.m.split();
                Formula::lt(a, b)
            }
            MonRel::Eq1 => {
                let (a, b) = self.m.split();
                Formula::eq(a, b)
            }
            MonRel::Pow(n) => Formula::power(n, self.m.to_term()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;
    use crate::theory::TheoryId;

    fn canon(s: &str) -> String {
        let f = parse_formula(s, TheoryId::QPosMul).unwrap();
        let a = f.atoms()[0].clone();
        match MonAtom::from_atom(&a).unwrap().canonical() {
            Ok(c) => c.to_formula().to_string(),
            Err(b) => b.to_string(),
        }
    }

    #[test]
    fn examples() {
        assert_eq!(canon("u < w"), "u < w");
        assert_eq!(canon("3 * t^3 < 2 * s^2 * t"), "3 * t^2 < 2 * s^2");
        assert_eq!(canon("x * inv(x) < 2"), "true");
        assert_eq!(canon("pow(2, s * t^-1)"), "pow(2, s * t^-1)");
        assert_eq!(canon("pow(2, t^-1 * s^3 * u^2)"), "pow(2, s^3 * t^-1)");
        assert_eq!(canon("pow(2, x^2 * 4/9)"), "true");
        assert_eq!(canon("w = u"), "u = w");
    }
}
