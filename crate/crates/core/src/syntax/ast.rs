use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Term {
    Var(String),
    /// Any literal; integers are fractions with denominator 1.
    Const(#[serde(with = "crate::serde_num::rational")] BigRational),
    Add(Box<Term>, Box<Term>),
    Sub(Box<Term>, Box<Term>),
    Neg(Box<Term>),
    /// `n · t` in the additive theories.
    Scale(#[serde(with = "crate::serde_num::int")] BigInt, Box<Term>),
    Mul(Box<Term>, Box<Term>),
    Inv(Box<Term>),
    /// `t^k`, `k ≠ 0`.
    Pow(Box<Term>, i64),
    Succ(Box<Term>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Atom {
    Lt(Term, Term),
    Eq(Term, Term),
    /// `a ≡ b (mod n)`, `n ≥ 2`.
    Cong(Term, Term, #[serde(with = "crate::serde_num::int")] BigInt),
    /// `Ρₙ(t)`: `t` is an n-th power, `n ≥ 2`.
    Pow(u64, Term),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

// Constructors named after the connectives they build.
#[allow(clippy::should_implement_trait)]
impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn int(n: i64) -> Term {
        Term::Const(BigRational::from_integer(n.into()))
    }

    pub fn konst(q: BigRational) -> Term {
        Term::Const(q)
    }

    pub fn zero() -> Term {
        Term::Const(BigRational::zero())
    }

    pub fn one() -> Term {
        Term::Const(BigRational::one())
    }

    pub fn succ(t: Term) -> Term {
        Term::Succ(Box::new(t))
    }

    pub fn add(a: Term, b: Term) -> Term {
        Term::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Term, b: Term) -> Term {
        Term::Sub(Box::new(a), Box::new(b))
    }

    pub fn neg(a: Term) -> Term {
        Term::Neg(Box::new(a))
    }

    pub fn scale(n: impl Into<BigInt>, a: Term) -> Term {
        Term::Scale(n.into(), Box::new(a))
    }

    pub fn mul(a: Term, b: Term) -> Term {
        Term::Mul(Box::new(a), Box::new(b))
    }

    pub fn inv(a: Term) -> Term {
        Term::Inv(Box::new(a))
    }

    pub fn pow(a: Term, k: i64) -> Term {
        Term::Pow(Box::new(a), k)
    }

    /// `sᵏ(t)`.
    pub fn shift(t: Term, k: u64) -> Term {
        (0..k).fold(t, |acc, _| Term::succ(acc))
    }

    pub fn as_const(&self) -> Option<&BigRational> {
        match self {
            Term::Const(q) => Some(q),
            _ => None,
        }
    }

    pub fn is_ground(&self) -> bool {
        let mut ground = true;
        self.visit_vars(&mut |_| ground = false);
        ground
    }

    pub fn mentions(&self, v: &str) -> bool {
        let mut hit = false;
        self.visit_vars(&mut |w| hit |= w == v);
        hit
    }

    pub fn visit_vars(&self, f: &mut impl FnMut(&str)) {
        match self {
            Term::Var(v) => f(v),
            Term::Const(_) => {}
            Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) => {
                a.visit_vars(f);
                b.visit_vars(f);
            }
            Term::Neg(a) | Term::Scale(_, a) | Term::Inv(a) | Term::Pow(a, _) | Term::Succ(a) => {
                a.visit_vars(f)
            }
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_vars(&mut |v| {
            out.insert(v.to_string());
        });
        out
    }

    /// Replaces every variable through `f`.
    pub fn map_vars(&self, f: &impl Fn(&str) -> Term) -> Term {
        match self {
            Term::Var(v) => f(v),
            Term::Const(_) => self.clone(),
            Term::Add(a, b) => Term::add(a.map_vars(f), b.map_vars(f)),
            Term::Sub(a, b) => Term::sub(a.map_vars(f), b.map_vars(f)),
            Term::Mul(a, b) => Term::mul(a.map_vars(f), b.map_vars(f)),
            Term::Neg(a) => Term::neg(a.map_vars(f)),
            Term::Scale(n, a) => Term::Scale(n.clone(), Box::new(a.map_vars(f))),
            Term::Inv(a) => Term::inv(a.map_vars(f)),
            Term::Pow(a, k) => Term::pow(a.map_vars(f), *k),
            Term::Succ(a) => Term::succ(a.map_vars(f)),
        }
    }

    pub fn is_negative_const(&self) -> bool {
        matches!(self, Term::Const(q) if q.is_negative())
    }
}

impl Atom {
    pub fn terms(&self) -> Vec<&Term> {
        match self {
            Atom::Lt(a, b) | Atom::Eq(a, b) | Atom::Cong(a, b, _) => vec![a, b],
            Atom::Pow(_, a) => vec![a],
        }
    }

    pub fn map_terms(&self, f: &impl Fn(&Term) -> Term) -> Atom {
        match self {
            Atom::Lt(a, b) => Atom::Lt(f(a), f(b)),
            Atom::Eq(a, b) => Atom::Eq(f(a), f(b)),
            Atom::Cong(a, b, n) => Atom::Cong(f(a), f(b), n.clone()),
            Atom::Pow(n, a) => Atom::Pow(*n, f(a)),
        }
    }

    pub fn mentions(&self, v: &str) -> bool {
        self.terms().iter().any(|t| t.mentions(v))
    }

    pub fn is_ground(&self) -> bool {
        self.terms().iter().all(|t| t.is_ground())
    }
}

impl From<bool> for Formula {
    fn from(b: bool) -> Formula {
        if b {
            Formula::True
        } else {
            Formula::False
        }
    }
}

#[allow(clippy::should_implement_trait)]
impl Formula {
    pub fn atom(a: Atom) -> Formula {
        Formula::Atom(a)
    }

    pub fn lt(a: Term, b: Term) -> Formula {
        Formula::Atom(Atom::Lt(a, b))
    }

    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::Atom(Atom::Eq(a, b))
    }

    pub fn cong(a: Term, b: Term, n: impl Into<BigInt>) -> Formula {
        Formula::Atom(Atom::Cong(a, b, n.into()))
    }

    pub fn power(n: u64, a: Term) -> Formula {
        Formula::Atom(Atom::Pow(n, a))
    }

    /// `a ≤ b`, spelled the way the parser desugars it.
    pub fn le(a: Term, b: Term) -> Formula {
        Formula::Or(vec![Formula::lt(a.clone(), b.clone()), Formula::eq(a, b)])
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn exists(v: &str, body: Formula) -> Formula {
        Formula::Exists(v.to_string(), Box::new(body))
    }

    pub fn forall(v: &str, body: Formula) -> Formula {
        Formula::Forall(v.to_string(), Box::new(body))
    }

    /// Conjunction that flattens nested conjunctions and folds constants.
    pub fn and_all(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::True => {}
                Formula::False => return Formula::False,
                Formula::And(xs) => out.extend(xs),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Formula::True,
            1 => out.pop().unwrap(),
            _ => Formula::And(out),
        }
    }

    /// Disjunction that flattens nested disjunctions and folds constants.
    pub fn or_all(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::False => {}
                Formula::True => return Formula::True,
                Formula::Or(xs) => out.extend(xs),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Formula::False,
            1 => out.pop().unwrap(),
            _ => Formula::Or(out),
        }
    }

    pub fn free_variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => {
                for t in a.terms() {
                    t.visit_vars(&mut |v| {
                        if !bound.iter().any(|b| b == v) {
                            out.insert(v.to_string());
                        }
                    });
                }
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(fs) | Formula::Or(fs) => {
                for f in fs {
                    f.collect_free(bound, out);
                }
            }
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Atom(a) => {
                for t in a.terms() {
                    out.extend(t.vars());
                }
            }
            Formula::Exists(v, _) | Formula::Forall(v, _) => {
                out.insert(v.clone());
            }
            _ => {}
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => {}
            Formula::Not(g) | Formula::Exists(_, g) | Formula::Forall(_, g) => g.visit(f),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| g.visit(f)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }

    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.visit(&mut |f| {
            if let Formula::Atom(a) = f {
                out.push(a);
            }
        });
        out
    }

    pub fn is_quantifier_free(&self) -> bool {
        let mut qf = true;
        self.visit(&mut |f| {
            if matches!(f, Formula::Exists(..) | Formula::Forall(..)) {
                qf = false;
            }
        });
        qf
    }

    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => 0,
            Formula::Not(g) => g.quantifier_depth(),
            Formula::And(gs) | Formula::Or(gs) => {
                gs.iter().map(Formula::quantifier_depth).max().unwrap_or(0)
            }
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.quantifier_depth().max(b.quantifier_depth())
            }
            Formula::Exists(_, g) | Formula::Forall(_, g) => 1 + g.quantifier_depth(),
        }
    }

    /// Applies `f` to every atom, rebuilding the connective structure.
    pub fn map_atoms(&self, f: &mut impl FnMut(&Atom) -> Formula) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Atom(a) => f(a),
            Formula::Not(g) => Formula::not(g.map_atoms(f)),
            Formula::And(gs) => Formula::And(gs.iter().map(|g| g.map_atoms(f)).collect()),
            Formula::Or(gs) => Formula::Or(gs.iter().map(|g| g.map_atoms(f)).collect()),
            Formula::Implies(a, b) => Formula::implies(a.map_atoms(f), b.map_atoms(f)),
            Formula::Iff(a, b) => Formula::iff(a.map_atoms(f), b.map_atoms(f)),
            Formula::Exists(v, g) => Formula::Exists(v.clone(), Box::new(g.map_atoms(f))),
            Formula::Forall(v, g) => Formula::Forall(v.clone(), Box::new(g.map_atoms(f))),
        }
    }

    /// Number of atom occurrences.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |f| {
            if matches!(f, Formula::Atom(_)) {
                n += 1;
            }
        });
        n
    }
}
