use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::syntax::{Atom, Formula, Term};

/// `Σ cᵢ·vᵢ + k` with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LinearTerm {
    pub coeffs: BTreeMap<String, BigInt>,
    pub constant: BigRational,
}

impl LinearTerm {
    pub fn constant(k: BigRational) -> LinearTerm {
        LinearTerm {
            coeffs: BTreeMap::new(),
            constant: k,
        }
    }

    pub fn var(v: &str) -> LinearTerm {
        LinearTerm {
            coeffs: BTreeMap::from([(v.to_string(), BigInt::one())]),
            constant: BigRational::zero(),
        }
    }

    /// `None` for terms outside linear arithmetic.
    pub fn from_term(t: &Term) -> Option<LinearTerm> {
        Some(match t {
            Term::Var(v) => LinearTerm::var(v),
            Term::Const(q) => LinearTerm::constant(q.clone()),
            Term::Add(a, b) => LinearTerm::from_term(a)?.add(&LinearTerm::from_term(b)?),
            Term::Sub(a, b) => LinearTerm::from_term(a)?.sub(&LinearTerm::from_term(b)?),
            Term::Neg(a) => LinearTerm::from_term(a)?.scale(&-BigInt::one()),
            Term::Scale(n, a) => LinearTerm::from_term(a)?.scale(n),
            _ => return None,
        })
    }

    pub fn coeff(&self, v: &str) -> BigInt {
        self.coeffs.get(v).cloned().unwrap_or_default()
    }

    pub fn without(&self, v: &str) -> LinearTerm {
        let mut t = self.clone();
        t.coeffs.remove(v);
        t
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, o: &LinearTerm) -> LinearTerm {
        let mut out = self.clone();
        for (v, c) in &o.coeffs {
            *out.coeffs.entry(v.clone()).or_default() += c;
        }
        out.coeffs.retain(|_, c| !c.is_zero());
        out.constant += &o.constant;
        out
    }

    pub fn sub(&self, o: &LinearTerm) -> LinearTerm {
        self.add(&o.scale(&-BigInt::one()))
    }

    pub fn scale(&self, n: &BigInt) -> LinearTerm {
        if n.is_zero() {
            return LinearTerm::default();
        }
        LinearTerm {
            coeffs: self.coeffs.iter().map(|(v, c)| (v.clone(), c * n)).collect(),
            constant: &self.constant * BigRational::from_integer(n.clone()),
        }
    }

    pub fn add_const(&self, k: &BigRational) -> LinearTerm {
        let mut t = self.clone();
        t.constant += k;
        t
    }

    /// Renders the parts with positive sign and the negated negative parts.
    fn split(&self) -> (Term, Term) {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for (v, c) in &self.coeffs {
            let part = |c: BigInt| {
                if c.is_one() {
                    Term::var(v)
                } else {
                    Term::scale(c, Term::var(v))
                }
            };
            if c.is_positive() {
                pos.push(part(c.clone()));
            } else {
                neg.push(part(-c));
            }
        }
        if self.constant.is_positive() {
            pos.push(Term::Const(self.constant.clone()));
        } else if self.constant.is_negative() {
            neg.push(Term::Const(-&self.constant));
        }
        (sum(pos), sum(neg))
    }

    pub fn to_term(&self) -> Term {
        let mut parts: Vec<Term> = self
            .coeffs
            .iter()
            .map(|(v, c)| {
                if c.is_one() {
                    Term::var(v)
                } else {
                    Term::scale(c.clone(), Term::var(v))
                }
            })
            .collect();
        if !self.constant.is_zero() || parts.is_empty() {
            parts.push(Term::Const(self.constant.clone()));
        }
        sum(parts)
    }
}

fn sum(parts: Vec<Term>) -> Term {
    parts.into_iter().reduce(Term::add).unwrap_or_else(Term::zero)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LinRel {
    /// `t > 0`
    Pos,
    /// `t = 0`
    Zero,
    /// `t ≡ 0 (mod n)`
    Cong(BigInt),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearAtom {
    pub term: LinearTerm,
    pub rel: LinRel,
}

impl LinearAtom {
    pub fn from_atom(a: &Atom) -> Option<LinearAtom> {
        let (l, r) = match a {
            Atom::Lt(l, r) | Atom::Eq(l, r) | Atom::Cong(l, r, _) => {
                (LinearTerm::from_term(l)?, LinearTerm::from_term(r)?)
            }
            Atom::Pow(..) => return None,
        };
        Some(match a {
            Atom::Lt(..) => LinearAtom {
                term: r.sub(&l),
                rel: LinRel::Pos,
            },
            Atom::Eq(..) => LinearAtom {
                term: l.sub(&r),
                rel: LinRel::Zero,
            },
            Atom::Cong(_, _, n) => LinearAtom {
                term: l.sub(&r),
                rel: LinRel::Cong(n.clone()),
            },
            Atom::Pow(..) => unreachable!(),
        })
    }

    pub fn pos(term: LinearTerm) -> LinearAtom {
        LinearAtom {
            term,
            rel: LinRel::Pos,
        }
    }

    pub fn zero(term: LinearTerm) -> LinearAtom {
        LinearAtom {
            term,
            rel: LinRel::Zero,
        }
    }

    pub fn cong(term: LinearTerm, n: BigInt) -> LinearAtom {
        LinearAtom {
            term,
            rel: LinRel::Cong(n),
        }
    }

    /// Canonical form, or the truth value if the atom is decided.
    ///
    /// Over ℚ everything is scaled to coprime integers. Over ℤ strict
    /// inequalities are divided by the coefficient gcd with the constant
    /// rounded, equalities fail when the gcd does not divide the constant,
    /// and congruences are reduced by the common factor of coefficients,
    /// constant and modulus.
    pub fn canonical(&self, integral: bool) -> Result<LinearAtom, bool> {
        let mut t = self.term.clone();
        t.coeffs.retain(|_, c| !c.is_zero());
        if t.is_constant() {
            let k = &t.constant;
            return Err(match &self.rel {
                LinRel::Pos => k.is_positive(),
                LinRel::Zero => k.is_zero(),
                LinRel::Cong(n) => k.is_integer() && k.to_integer().is_multiple_of(n),
            });
        }
        let g = t.coeffs.values().fold(BigInt::zero(), |g, c| g.gcd(c));
        match &self.rel {
            LinRel::Pos | LinRel::Zero if !integral => {
                let den = t.constant.denom().clone();
                let k = t.constant.numer().clone();
                let scaled = t.scale(&den);
                let g = scaled.coeffs.values().fold(k.clone(), |g, c| g.gcd(c));
                let mut out = LinearTerm {
                    coeffs: scaled.coeffs.iter().map(|(v, c)| (v.clone(), c / &g)).collect(),
                    constant: BigRational::from_integer(k / &g),
                };
                if self.rel == LinRel::Zero {
                    out = orient(out);
                }
                Ok(LinearAtom {
                    term: out,
                    rel: self.rel.clone(),
                })
            }
            LinRel::Pos => {
                let k = t.constant.to_integer();
                let coeffs = t.coeffs.iter().map(|(v, c)| (v.clone(), c / &g)).collect();
                // L + k > 0 ⟺ L/g + ⌈k/g⌉ > 0 for integer L.
                let k = num_integer::Integer::div_ceil(&k, &g);
                Ok(LinearAtom::pos(LinearTerm {
                    coeffs,
                    constant: BigRational::from_integer(k),
                }))
            }
            LinRel::Zero => {
                let k = t.constant.to_integer();
                if !k.is_multiple_of(&g) {
                    return Err(false);
                }
                let out = LinearTerm {
                    coeffs: t.coeffs.iter().map(|(v, c)| (v.clone(), c / &g)).collect(),
                    constant: BigRational::from_integer(k / &g),
                };
                Ok(LinearAtom::zero(orient(out)))
            }
            LinRel::Cong(n) => {
                let k = t.constant.to_integer();
                let mut coeffs: BTreeMap<String, BigInt> = t
                    .coeffs
                    .iter()
                    .map(|(v, c)| (v.clone(), c.mod_floor(n)))
                    .filter(|(_, c)| !c.is_zero())
                    .collect();
                let mut k = k.mod_floor(n);
                let mut n = n.clone();
                let g = coeffs.values().fold(k.gcd(&n), |g, c| g.gcd(c));
                if !g.is_one() {
                    coeffs.values_mut().for_each(|c| *c /= &g);
                    k /= &g;
                    n /= &g;
                }
                if n.is_one() {
                    return Err(true);
                }
                if coeffs.is_empty() {
                    return Err(k.is_zero());
                }
                // Symmetric residues; the leading coefficient positive.
                let half = &n / 2;
                for c in coeffs.values_mut() {
                    if *c > half {
                        *c -= &n;
                    }
                }
                if coeffs.values().next().unwrap().is_negative() {
                    coeffs.values_mut().for_each(|c| *c = -c.clone());
                    k = (-k).mod_floor(&n);
                }
                Ok(LinearAtom::cong(
                    LinearTerm {
                        coeffs,
                        constant: BigRational::from_integer(k),
                    },
                    n,
                ))
            }
        }
    }

    pub fn to_formula(&self) -> Formula {
        match &self.rel {
            LinRel::Pos => {
                let (pos, neg) = self.term.split();
                Formula::lt(neg, pos)
            }
            LinRel::Zero => {
                let (pos, neg) = self.term.split();
                Formula::eq(pos, neg)
            }
            LinRel::Cong(n) => {
                // Σ ≡ -k: variables on both sides, residue on the right.
                let vars = LinearTerm {
                    coeffs: self.term.coeffs.clone(),
                    constant: BigRational::zero(),
                };
                let (pos, neg) = vars.split();
                let r = (-self.term.constant.to_integer()).mod_floor(n);
                let rhs = if r.is_zero() {
                    neg
                } else if matches!(&neg, Term::Const(q) if q.is_zero()) {
                    Term::Const(BigRational::from_integer(r))
                } else {
                    Term::add(neg, Term::Const(BigRational::from_integer(r)))
                };
                Formula::cong(pos, rhs, n.clone())
            }
        }
    }
}

fn orient(t: LinearTerm) -> LinearTerm {
    match t.coeffs.values().next() {
        Some(c) if c.is_negative() => t.scale(&-BigInt::one()),
        _ => t,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;
    use crate::theory::TheoryId;

    fn canon(s: &str, th: TheoryId) -> String {
        let f = parse_formula(s, th).unwrap();
        let a = f.atoms()[0].clone();
        match LinearAtom::from_atom(&a).unwrap().canonical(th.is_discrete()) {
            Ok(c) => c.to_formula().to_string(),
            Err(b) => b.to_string(),
        }
    }

    #[test]
    fn rational_canon() {
        assert_eq!(canon("6 * t < 4 * s", TheoryId::QAdd), "3 * t < 2 * s");
        assert_eq!(canon("x < x + 1/2", TheoryId::QAdd), "true");
        assert_eq!(canon("1/2 = x + 1/3", TheoryId::QAdd), "6 * x = 1");
        assert_eq!(canon("y = x", TheoryId::QAdd), "x = y");
    }

    #[test]
    fn integer_canon() {
        // 2x < 3 ⟺ x ≤ 1 ⟺ x < 2
        assert_eq!(canon("2 * x < 3", TheoryId::ZAdd), "x < 2");
        assert_eq!(canon("2 * x = 3", TheoryId::ZAdd), "false");
        assert_eq!(canon("cong(2 * x, 4, 6)", TheoryId::ZAdd), "cong(x, 2, 3)");
        assert_eq!(canon("cong(y, 0, 2)", TheoryId::ZAdd), "cong(y, 0, 2)");
        assert_eq!(canon("cong(2 * y, 1, 2)", TheoryId::ZAdd), "false");
        assert_eq!(canon("cong(-y + z, 1, 3)", TheoryId::ZAdd), "cong(y, z + 2, 3)");
    }

    #[test]
    fn integer_strict_rounding_matches_brute_force() {
        for a in 1..7i64 {
            for k in -20..20i64 {
                let atom = LinearAtom::pos(LinearTerm {
                    coeffs: BTreeMap::from([("x".to_string(), BigInt::from(a))]),
                    constant: BigRational::from_integer(k.into()),
                });
                let c = atom.canonical(true).unwrap();
                let c1 = c.term.coeff("x");
                let k1 = c.term.constant.to_integer();
                for x in -30..30i64 {
                    let before = a * x + k > 0;
                    let after = &c1 * x + &k1 > BigInt::zero();
                    assert_eq!(before, after, "{a}x + {k}");
                }
            }
        }
    }
}
