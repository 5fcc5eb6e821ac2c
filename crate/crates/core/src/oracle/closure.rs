//! Projection closure: the linear forms whose signs (and residues) decide a
//! formula with quantifiers.
//!
//! Atoms are read as forms `Σ cᵥ·v + k` — in the multiplicative theories
//! as `log(k·∏|v|^cᵥ)`, so the same algebra applies. Eliminating a bound
//! variable `y` replaces the forms mentioning it by the pairwise
//! combinations comparing their `y`-thresholds:
//!
//! * dense structures: the truth patterns `y` can realize depend only on the
//!   order of the thresholds `-Lᵢ/cᵢ`, i.e. on the signs of
//!   `cᵢ·Lⱼ - cⱼ·Lᵢ`;
//! * over ℤ they also depend on the residues of `y` modulo the period `P` of
//!   its congruences, so on gaps between thresholds up to `P + 1`, on each
//!   threshold's residue (`Lᵢ mod |cᵢ|·P`), and on the residues of the
//!   congruences' own `y`-free parts. Offsets are tracked as a window: the
//!   form `L` with window `W` stands for all signs of `L + m`, `|m| ≤ W`.
//!
//! By induction the truth of the formula, as a function of its free
//! variables, is constant wherever every collected form keeps its sign and
//! residue. The caller then cuts the line of the outermost variable at
//! those forms' thresholds.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::syntax::{Atom, Formula, Term};
use crate::theory::{Domain, Family, TheoryId};

/// `Σ cᵥ·v + k`; multiplicatively `k·∏ vᶜᵛ` with `k > 0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct Form {
    pub coeffs: BTreeMap<String, BigInt>,
    pub k: BigRational,
}

impl Form {
    pub fn coeff(&self, v: &str) -> BigInt {
        self.coeffs.get(v).cloned().unwrap_or_default()
    }

    fn without(&self, v: &str) -> Form {
        let mut f = self.clone();
        f.coeffs.remove(v);
        f
    }

    /// `a·self + b·o`, read in log space when `mul`.
    fn combine(&self, a: &BigInt, o: &Form, b: &BigInt, mul: bool) -> Form {
        let mut coeffs: BTreeMap<String, BigInt> = BTreeMap::new();
        for (v, c) in &self.coeffs {
            *coeffs.entry(v.clone()).or_default() += a * c;
        }
        for (v, c) in &o.coeffs {
            *coeffs.entry(v.clone()).or_default() += b * c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        let k = if mul {
            rpow(&self.k, a) * rpow(&o.k, b)
        } else {
            BigRational::from_integer(a.clone()) * &self.k + BigRational::from_integer(b.clone()) * &o.k
        };
        Form { coeffs, k }
    }

    /// Orientation-free key: first coefficient positive.
    fn normalized(self, mul: bool) -> Form {
        match self.coeffs.values().next() {
            Some(c) if c.is_negative() => self.combine(&-BigInt::one(), &Form::unit(mul), &BigInt::zero(), mul),
            _ => self,
        }
    }

    fn unit(mul: bool) -> Form {
        Form {
            coeffs: BTreeMap::new(),
            k: if mul { BigRational::one() } else { BigRational::zero() },
        }
    }
}

fn rpow(q: &BigRational, e: &BigInt) -> BigRational {
    let n: i32 = e.try_into().expect("small exponent");
    if n >= 0 {
        num_traits::pow(q.clone(), n as usize)
    } else {
        num_traits::pow(q.recip(), n.unsigned_abs() as usize)
    }
}

/// What the truth of a formula may depend on.
#[derive(Clone, Debug, Default)]
pub(crate) struct Closure {
    /// Forms whose sign matters, each with its offset window.
    pub ineqs: BTreeMap<Form, BigInt>,
    /// Forms whose residue modulo the given number matters.
    pub congs: BTreeMap<Form, BigInt>,
    /// Over ℚ: pairs `(F, m)` where it matters whether `F` is an `m`-th power.
    pub pows: BTreeSet<(Form, BigInt)>,
}

impl Closure {
    fn ineq(&mut self, f: Form, w: BigInt, mul: bool) {
        if f.coeffs.is_empty() {
            return;
        }
        let f = f.normalized(mul);
        let e = self.ineqs.entry(f).or_insert_with(BigInt::zero);
        if w > *e {
            *e = w;
        }
    }

    fn cong(&mut self, f: Form, q: BigInt) {
        if f.coeffs.is_empty() || q.is_one() {
            return;
        }
        let e = self.congs.entry(f).or_insert_with(BigInt::one);
        *e = e.lcm(&q);
    }

    fn pow(&mut self, f: Form, m: BigInt) {
        if f.coeffs.is_empty() || m.is_one() {
            return;
        }
        self.pows.insert((f.normalized(true), m));
    }

    fn union(&mut self, o: Closure, mul: bool) {
        for (f, w) in o.ineqs {
            self.ineq(f, w, mul);
        }
        for (f, q) in o.congs {
            self.cong(f, q);
        }
        self.pows.extend(o.pows);
    }

    fn len(&self) -> usize {
        self.ineqs.len() + self.congs.len() + self.pows.len()
    }
}

/// Keeps the constants of multiplicative forms small enough to evaluate.
const MAX_EXPONENT: i64 = 64;

/// Limits beyond which the closure is abandoned.
pub(crate) struct Limits {
    pub max_forms: usize,
    pub max_window: BigInt,
}

/// The closure of `f`, or `None` where the argument above does not apply
/// (`Ρₙ` atoms, non-unit exponents of bound variables over ℚ, non-linear
/// terms) or the limits are exceeded.
pub(crate) fn closure(f: &Formula, theory: TheoryId, lim: &Limits) -> Option<Closure> {
    let cx = Cx { theory, mul: theory.family() == Family::Multiplicative, lim };
    cx.walk(f)
}

struct Cx<'a> {
    theory: TheoryId,
    mul: bool,
    lim: &'a Limits,
}

impl Cx<'_> {
    fn integral(&self) -> bool {
        self.theory.is_discrete()
    }

    /// The multiplicative group of ℚ, which is not divisible.
    fn rational(&self) -> bool {
        self.mul && matches!(self.theory.domain(), Domain::PosRationals | Domain::SignedRationals)
    }

    fn walk(&self, f: &Formula) -> Option<Closure> {
        let out = match f {
            Formula::True | Formula::False => Closure::default(),
            Formula::Atom(a) => self.atom(a)?,
            Formula::Not(g) => self.walk(g)?,
            Formula::And(gs) | Formula::Or(gs) => {
                let mut c = Closure::default();
                for g in gs {
                    c.union(self.walk(g)?, self.mul);
                }
                c
            }
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                let mut c = self.walk(a)?;
                c.union(self.walk(b)?, self.mul);
                c
            }
            Formula::Exists(v, g) | Formula::Forall(v, g) => {
                let mut c = self.walk(g)?;
                if self.theory.domain() == Domain::Naturals {
                    c.ineq(Form { coeffs: BTreeMap::from([(v.clone(), BigInt::one())]), k: BigRational::zero() }, BigInt::zero(), false);
                }
                self.project(v, c)?
            }
        };
        (out.len() <= self.lim.max_forms).then_some(out)
    }

    fn atom(&self, a: &Atom) -> Option<Closure> {
        let mut c = Closure::default();
        if self.mul {
            match a {
                Atom::Lt(l, r) | Atom::Eq(l, r) => {
                    // A zero side makes the atom a sign condition.
                    if let (Some(l), Some(r)) = (mono(l)?, mono(r)?) {
                        c.ineq(l.combine(&BigInt::one(), &r, &-BigInt::one(), true), BigInt::zero(), true);
                    }
                }
                Atom::Pow(n, t) if self.rational() => {
                    if let Some(f) = mono(t)? {
                        c.pow(f, BigInt::from(*n));
                    }
                }
                Atom::Pow(..) | Atom::Cong(..) => return None,
            }
            return Some(c);
        }
        match a {
            Atom::Lt(l, r) | Atom::Eq(l, r) => {
                let f = lin(l)?.combine(&BigInt::one(), &lin(r)?, &-BigInt::one(), false);
                if self.integral() && !f.k.is_integer() {
                    return None;
                }
                c.ineq(f, BigInt::zero(), false);
            }
            Atom::Cong(l, r, n) => {
                let f = lin(l)?.combine(&BigInt::one(), &lin(r)?, &-BigInt::one(), false);
                if !f.k.is_integer() {
                    return None;
                }
                c.cong(f, n.abs());
            }
            Atom::Pow(..) => return None,
        }
        Some(c)
    }

    fn project(&self, y: &str, c: Closure) -> Option<Closure> {
        let mut out = Closure::default();
        let mut with_y = Vec::new();
        for (f, w) in c.ineqs {
            if f.coeff(y).is_zero() {
                out.ineq(f, w, self.mul);
            } else {
                with_y.push((f, w));
            }
        }
        if self.rational() {
            self.project_powers(y, &with_y, c.pows, &mut out)?;
        }
        let mut period = BigInt::one();
        for (f, q) in c.congs {
            let cy = f.coeff(y);
            if cy.is_zero() {
                out.cong(f, q);
            } else {
                period = period.lcm(&(&q / cy.gcd(&q)));
                out.cong(f.without(y), q);
            }
        }
        let integral = self.integral();
        if integral {
            for (f, _) in &with_y {
                out.cong(f.without(y), f.coeff(y).abs() * &period);
            }
        }
        for (i, (fi, wi)) in with_y.iter().enumerate() {
            for (fj, wj) in &with_y[i + 1..] {
                let (ci, cj) = (fi.coeff(y), fj.coeff(y));
                // cᵢ·Lⱼ − cⱼ·Lᵢ has no y.
                if self.mul && (ci.abs() * cj.abs() > BigInt::from(MAX_EXPONENT)) {
                    return None;
                }
                let g = fj.combine(&ci, fi, &-&cj, self.mul);
                if g.coeffs.values().any(|c| c.abs() > BigInt::from(MAX_EXPONENT)) {
                    return None;
                }
                let w = if integral {
                    ci.abs() * wj + cj.abs() * wi + (&period + 1) * (&ci * &cj).abs()
                } else {
                    BigInt::zero()
                };
                if w > self.lim.max_window {
                    return None;
                }
                out.ineq(g, w, self.mul);
                if out.len() > self.lim.max_forms {
                    return None;
                }
            }
        }
        Some(out)
    }
}

impl Cx<'_> {
    /// The `Ρ` side of eliminating `y` over ℚ⁺ (read additively: `G` is the
    /// free group on the primes, `Ρₘ(F)` says `F ∈ mG`). With `eᵢ·y + Lᵢ`
    /// the order forms and `eₖ·y + Lₖ ∈ mₖG` the power conditions on `y`:
    ///
    /// * a threshold `-Lᵢ/eᵢ` is attained iff `Lᵢ ∈ |eᵢ|G`, and there the
    ///   conditions read `eᵢ·Lₖ - eₖ·Lᵢ ∈ mₖ|eᵢ|G`;
    /// * strictly between thresholds every class of `y` occurs, so what
    ///   matters is which truth vectors of the conditions some `y` realizes.
    ///   A set `A` of conditions is solvable iff each is (`Lₖ ∈ gₖG`) and
    ///   each pair is (generalized CRT), and then `y` ranges over a coset
    ///   `γ + n_A·G`. A condition outside `A` can be kept false unless it
    ///   holds on the whole coset — finitely many cosets of infinite index
    ///   never cover one, and a fresh prime separates them while staying in
    ///   any interval — and it holds on the whole coset iff `mₖ | eₖ·n_A`
    ///   and `eₖ·γ + Lₖ ∈ mₖG`.
    ///
    /// Every such condition is emitted as a power condition on a `y`-free
    /// form, scaled to integer coefficients (`X ∈ mG ⟺ dX ∈ dmG`).
    fn project_powers(
        &self,
        y: &str,
        ineqs: &[(Form, BigInt)],
        pows: BTreeSet<(Form, BigInt)>,
        out: &mut Closure,
    ) -> Option<()> {
        let mut conds = Vec::new();
        for (f, m) in pows {
            if f.coeff(y).is_zero() {
                out.pow(f, m);
            } else {
                conds.push((f.coeff(y), f.without(y), m));
            }
        }
        for (fi, _) in ineqs {
            let ei = fi.coeff(y);
            let li = fi.without(y);
            out.pow(li.clone(), ei.abs());
            for (ek, lk, mk) in &conds {
                out.pow(lk.combine(&ei, &li, &-ek, true), mk * ei.abs());
            }
        }
        if conds.len() > MAX_POWER_CONDITIONS {
            return None;
        }
        let k = conds.len();
        let one = BigInt::one();
        // eₖ·y ≡ -Lₖ (mod mₖ) ⟺ Lₖ ∈ gₖG and y ≡ βₖ := -uₖ·Lₖ/gₖ (mod nₖ).
        let mut g = Vec::with_capacity(k);
        let mut n = Vec::with_capacity(k);
        let mut beta: Vec<Vec<BigRational>> = Vec::with_capacity(k);
        for (i, (e, l, m)) in conds.iter().enumerate() {
            let gi = e.gcd(m);
            let ni = m / &gi;
            let ui = (e / &gi).extended_gcd(&ni).x.mod_floor(&ni);
            out.pow(l.clone(), gi.clone());
            let mut b = vec![BigRational::zero(); k];
            b[i] = -BigRational::new(ui, gi.clone());
            g.push(gi);
            n.push(ni);
            beta.push(b);
        }
        let emit = |out: &mut Closure, coef: &[BigRational], m: &BigInt| {
            let d = coef.iter().fold(BigInt::one(), |d, c| d.lcm(c.denom()));
            let mut f = Form::unit(true);
            for (c, (_, l, _)) in coef.iter().zip(&conds) {
                let c = (c * BigRational::from_integer(d.clone())).to_integer();
                if !c.is_zero() {
                    f = f.combine(&one, l, &c, true);
                }
            }
            out.pow(f, m * d);
        };
        for i in 0..k {
            for j in i + 1..k {
                let h = n[i].gcd(&n[j]);
                let diff: Vec<BigRational> = beta[i].iter().zip(&beta[j]).map(|(a, b)| a - b).collect();
                emit(out, &diff, &h);
            }
        }
        for mask in 0u32..(1 << k) {
            // γ_A by merging the residues of A pairwise.
            let mut gamma = vec![BigRational::zero(); k];
            let mut na = BigInt::one();
            for i in (0..k).filter(|i| mask & (1 << i) != 0) {
                let d = na.gcd(&n[i]);
                let s = na.extended_gcd(&n[i]).x;
                let step = BigRational::new(&na * s, d.clone());
                for (t, b) in gamma.iter_mut().zip(&beta[i]) {
                    let delta = b - &*t;
                    *t += &step * delta;
                }
                na = na.lcm(&n[i]);
            }
            for (i, (e, _, m)) in conds.iter().enumerate() {
                if mask & (1 << i) != 0 || !(e * &na).is_multiple_of(m) {
                    continue;
                }
                let mut coef: Vec<BigRational> = gamma.iter().map(|c| c * BigRational::from_integer(e.clone())).collect();
                coef[i] += BigRational::one();
                emit(out, &coef, m);
            }
        }
        (out.len() <= self.lim.max_forms).then_some(())
    }
}

/// Power conditions on one variable before subsets get too many.
const MAX_POWER_CONDITIONS: usize = 8;

fn lin(t: &Term) -> Option<Form> {
    let mut f = Form::unit(false);
    lin_into(t, &BigInt::one(), &mut f)?;
    f.coeffs.retain(|_, c| !c.is_zero());
    Some(f)
}

fn lin_into(t: &Term, s: &BigInt, f: &mut Form) -> Option<()> {
    match t {
        Term::Var(v) => *f.coeffs.entry(v.clone()).or_insert_with(BigInt::zero) += s,
        Term::Const(q) => f.k += q * BigRational::from_integer(s.clone()),
        Term::Add(a, b) => {
            lin_into(a, s, f)?;
            lin_into(b, s, f)?;
        }
        Term::Sub(a, b) => {
            lin_into(a, s, f)?;
            lin_into(b, &-s, f)?;
        }
        Term::Neg(a) => lin_into(a, &-s, f)?,
        Term::Scale(n, a) => lin_into(a, &(s * n), f)?,
        Term::Succ(a) => {
            lin_into(a, s, f)?;
            f.k += BigRational::from_integer(s.clone());
        }
        Term::Mul(a, b) => match (a.as_ref(), b.as_ref()) {
            (Term::Const(q), u) | (u, Term::Const(q)) if q.is_integer() => {
                lin_into(u, &(s * q.to_integer()), f)?
            }
            _ => return None,
        },
        Term::Inv(_) | Term::Pow(..) => return None,
    }
    Some(())
}

/// `|t|` as `k·∏ vᶜ`, or `Some(None)` when `t` is identically zero.
fn mono(t: &Term) -> Option<Option<Form>> {
    Some(match t {
        Term::Var(v) => Some(Form { coeffs: BTreeMap::from([(v.clone(), BigInt::one())]), k: BigRational::one() }),
        Term::Const(q) if q.is_zero() => None,
        Term::Const(q) => Some(Form { coeffs: BTreeMap::new(), k: q.abs() }),
        Term::Neg(a) => mono(a)?,
        Term::Mul(a, b) => match (mono(a)?, mono(b)?) {
            (Some(a), Some(b)) => Some(a.combine(&BigInt::one(), &b, &BigInt::one(), true)),
            _ => None,
        },
        Term::Inv(a) => mono(a)?.map(|a| a.combine(&-BigInt::one(), &Form::unit(true), &BigInt::zero(), true)),
        Term::Pow(a, k) => mono(a)?.map(|a| a.combine(&BigInt::from(*k), &Form::unit(true), &BigInt::zero(), true)),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn lim() -> Limits {
        Limits { max_forms: 1000, max_window: BigInt::from(1000) }
    }

    fn forms(s: &str, th: TheoryId) -> Vec<String> {
        let f = parse_formula(s, th).unwrap();
        let c = closure(&f, th, &lim()).unwrap();
        c.ineqs
            .iter()
            .map(|(f, w)| format!("{:?}+{} w{}", f.coeffs, f.k, w))
            .collect()
    }

    #[test]
    fn dense_projection() {
        // a < y < b projects to the comparison of a and b.
        let out = forms("exists y. a < y & y < b", TheoryId::QAdd);
        assert_eq!(out.len(), 1);
        assert!(out[0].contains("\"a\": 1") && out[0].contains("\"b\": -1"), "{out:?}");
    }

    #[test]
    fn integer_window() {
        let f = parse_formula("exists y. a < y & y < b", TheoryId::ZOrder).unwrap();
        let c = closure(&f, TheoryId::ZOrder, &lim()).unwrap();
        assert_eq!(c.ineqs.len(), 1);
        assert_eq!(c.ineqs.values().next().unwrap(), &BigInt::from(2));
    }

    #[test]
    fn rational_square_root() {
        // y² = a is solvable iff a is a square.
        let f = parse_formula("exists y. y * y = a", TheoryId::QPosMul).unwrap();
        let c = closure(&f, TheoryId::QPosMul, &lim()).unwrap();
        assert!(c.pows.iter().any(|(f, m)| f.coeff("a") == BigInt::one() && *m == BigInt::from(2)));
        let f = parse_formula("exists y. y * y = a", TheoryId::RPosMul).unwrap();
        assert!(closure(&f, TheoryId::RPosMul, &lim()).unwrap().pows.is_empty());
    }

    #[test]
    fn power_systems() {
        // Ρ₂(y·a) ∧ Ρ₂(y·b) needs a·b⁻¹ square; Ρ₂(y·a) ∧ ¬Ρ₂(y·b) needs it not.
        let f = parse_formula("exists y. pow(2, y * a) & pow(2, y * b)", TheoryId::QPosMul).unwrap();
        let c = closure(&f, TheoryId::QPosMul, &lim()).unwrap();
        assert!(c
            .pows
            .iter()
            .any(|(f, m)| f.coeff("a").abs() == f.coeff("b").abs() && *m == BigInt::from(2) && f.coeff("a") != f.coeff("b")));
    }
}
