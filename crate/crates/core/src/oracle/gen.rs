//! Random formulas for soundness fuzzing.
//!
//! Formulas stay small — at most three nested quantifiers, four free
//! variables `a`–`d`, a handful of atoms with coefficients, shifts and
//! exponents of at most 2 and moduli 2 or 3 — so that eliminations stay
//! cheap and the oracle's witness search stays meaningful.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::syntax::{Formula, Term};
use crate::theory::{Family, TheoryId};

const FREE: [&str; 4] = ["a", "b", "c", "d"];
const BOUND: [&str; 3] = ["x", "y", "z"];

/// Size and shape limits for [`random_formula`].
#[derive(Clone, Debug)]
pub struct GenConfig {
    pub max_quantifier_depth: usize,
    pub max_free: usize,
    pub max_atoms: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_quantifier_depth: 3,
            max_free: 4,
            max_atoms: 4,
        }
    }
}

/// A random formula of `theory` starting with a quantifier.
pub fn random_formula(theory: TheoryId, cfg: &GenConfig, rng: &mut impl Rng) -> Formula {
    let free_count = rng.gen_range(0..=cfg.max_free.min(FREE.len()));
    let depth = rng.gen_range(1..=cfg.max_quantifier_depth.clamp(1, BOUND.len()));
    let mut g = Gen {
        theory,
        rng,
        atoms_left: cfg.max_atoms.max(depth),
    };
    let free: Vec<&str> = FREE[..free_count].to_vec();
    g.quantified(depth, 0, &free)
}

struct Gen<'r, R: Rng> {
    theory: TheoryId,
    rng: &'r mut R,
    atoms_left: usize,
}

impl<R: Rng> Gen<'_, R> {
    /// `Qx. body` where `body` mentions `x` and has up to `depth - 1` more
    /// quantifiers.
    fn quantified(&mut self, depth: usize, level: usize, scope: &[&'static str]) -> Formula {
        let x = BOUND[level];
        let mut inner: Vec<&'static str> = scope.to_vec();
        inner.push(x);
        let anchor = self.atom(&inner, Some(x));
        let rest = if depth > 1 {
            self.quantified(depth - 1, level + 1, &inner)
        } else {
            self.body(&inner, 1)
        };
        let body = match rest {
            Formula::True => anchor,
            rest => {
                let parts = vec![anchor, rest];
                if self.rng.gen_bool(0.6) {
                    Formula::And(parts)
                } else {
                    Formula::Or(parts)
                }
            }
        };
        if self.rng.gen_bool(0.5) {
            Formula::exists(x, body)
        } else {
            Formula::forall(x, body)
        }
    }

    fn body(&mut self, scope: &[&'static str], depth: usize) -> Formula {
        if self.atoms_left == 0 {
            return Formula::True;
        }
        match self.rng.gen_range(0..6) {
            0 if depth < 3 => Formula::not(self.body(scope, depth + 1)),
            1 | 2 if depth < 3 && self.atoms_left >= 2 => {
                let a = self.body(scope, depth + 1);
                let b = self.body(scope, depth + 1);
                let parts: Vec<Formula> =
                    [a, b].into_iter().filter(|f| *f != Formula::True).collect();
                match parts.len() {
                    0 => Formula::True,
                    1 => parts.into_iter().next().unwrap(),
                    _ if self.rng.gen_bool(0.5) => Formula::And(parts),
                    _ => Formula::Or(parts),
                }
            }
            _ => self.atom(scope, None),
        }
    }

    fn var(&mut self, scope: &[&'static str]) -> &'static str {
        scope.choose(self.rng).copied().unwrap_or("x")
    }

    /// An atom over `scope`, mentioning `must` if given.
    fn atom(&mut self, scope: &[&'static str], must: Option<&'static str>) -> Formula {
        self.atoms_left = self.atoms_left.saturating_sub(1);
        let th = self.theory;
        let sig = th.signature();
        let first = must.unwrap_or_else(|| self.var(scope));
        let mut lhs = self.term(scope, first);
        if let Some(x) = must.filter(|x| !lhs.mentions(x)) {
            lhs = Term::var(x);
        }
        let other = self.var(scope);
        let rhs = if self.rng.gen_bool(0.25) && self.closed_term().is_some() {
            self.closed_term().unwrap()
        } else {
            self.term(scope, other)
        };
        let roll = self.rng.gen_range(0..10);
        if sig.congruence && roll < 2 {
            let n = if self.rng.gen_bool(0.5) { 2 } else { 3 };
            return Formula::cong(lhs, rhs, n);
        }
        if sig.power_predicate && roll < 3 {
            let n = if self.rng.gen_bool(0.6) { 2 } else { 3 };
            return Formula::power(n, lhs);
        }
        if roll < 7 {
            Formula::lt(lhs, rhs)
        } else {
            Formula::eq(lhs, rhs)
        }
    }

    /// A variable-free term, when the signature has one.
    fn closed_term(&mut self) -> Option<Term> {
        let sig = self.theory.signature();
        if !sig.zero && !sig.integers {
            return None;
        }
        if !sig.integers {
            return Some(Term::zero());
        }
        let lo = if sig.negative_literals { -3 } else { 0 };
        let mut n = self.rng.gen_range(lo..=3);
        if self.theory.family() == Family::Multiplicative && !sig.zero && n <= 0 {
            n = 2;
        }
        if sig.fractions && self.rng.gen_bool(0.3) {
            let d = self.rng.gen_range(2..=3);
            let n = if n == 0 { 1 } else { n };
            return Some(Term::konst(BigRational::new(n.into(), d.into())));
        }
        Some(Term::int(n))
    }

    /// A term of the signature built around variable `v`.
    fn term(&mut self, scope: &[&'static str], v: &'static str) -> Term {
        let sig = self.theory.signature();
        match self.theory.family() {
            Family::Order => {
                let k = if sig.succ { self.rng.gen_range(0..=2) } else { 0 };
                let base = if sig.zero && self.rng.gen_bool(0.1) {
                    Term::zero()
                } else {
                    Term::var(v)
                };
                Term::shift(base, k)
            }
            Family::Additive => {
                let coeff = |g: &mut Self| -> i64 {
                    let c = g.rng.gen_range(1..=2);
                    if sig.negation && g.rng.gen_bool(0.3) {
                        -c
                    } else {
                        c
                    }
                };
                let scaled = |c: i64, t: Term| if c == 1 { t } else { Term::scale(BigInt::from(c), t) };
                let c = coeff(self);
                let mut t = scaled(c, Term::var(v));
                if self.rng.gen_bool(0.35) {
                    let w = self.var(scope);
                    let c2 = coeff(self);
                    t = Term::add(t, scaled(c2, Term::var(w)));
                }
                if self.rng.gen_bool(0.3) {
                    if let Some(k) = self.closed_term() {
                        t = Term::add(t, k);
                    }
                }
                t
            }
            Family::Multiplicative => {
                let exp = |g: &mut Self| -> i64 {
                    let e = g.rng.gen_range(1..=2);
                    if g.rng.gen_bool(0.25) {
                        -e
                    } else {
                        e
                    }
                };
                let powered = |e: i64, t: Term| if e == 1 { t } else { Term::pow(t, e) };
                let e = exp(self);
                let mut t = powered(e, Term::var(v));
                if self.rng.gen_bool(0.35) {
                    let w = self.var(scope);
                    let e2 = exp(self);
                    t = Term::mul(t, powered(e2, Term::var(w)));
                }
                if self.rng.gen_bool(0.25) {
                    if let Some(k) = self.closed_term().filter(|k| k.as_const().is_some_and(|q| *q != BigRational::from_integer(0.into()))) {
                        t = Term::mul(k, t);
                    }
                }
                if sig.negation && self.rng.gen_bool(0.15) {
                    t = Term::neg(t);
                }
                t
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{check_signature, parse_formula, render, Format};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn formulas_respect_the_limits_and_round_trip() {
        let cfg = GenConfig::default();
        for th in TheoryId::ALL {
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            for _ in 0..300 {
                let f = random_formula(th, &cfg, &mut rng);
                check_signature(&f, th).unwrap_or_else(|e| panic!("{th}: {f}: {e}"));
                assert!(f.quantifier_depth() >= 1 && f.quantifier_depth() <= 3);
                assert!(f.free_variables().len() <= 4);
                let text = render(&f, Format::Text);
                let back = parse_formula(&text, th).unwrap_or_else(|e| panic!("{th}: {text}: {e}"));
                assert_eq!(render(&back, Format::Text), text);
            }
        }
    }
}
