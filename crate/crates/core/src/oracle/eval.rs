//! Exact evaluation and witness search.
//!
//! Quantifiers are evaluated by trying candidate witnesses. Where the
//! structure of the body allows it the candidate set is *complete* — if a
//! witness exists, one is among the candidates — and a failed search is a
//! definite answer:
//!
//! * dense orders: one point per order type over the values in scope
//!   (automorphisms of ℚ fixing those values preserve truth);
//! * quantifier-free bodies in every theory except the `Ρₙ` ones, where the
//!   atoms split the line into finitely many cells on which the body is
//!   constant (or, over ℤ, periodic with the lcm of the moduli).
//!
//! Everywhere else the search runs over a bounded grid plus points derived
//! from the values in scope, and a failed search is `Inconclusive`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::is_nth_power;
use crate::error::{Error, Result};
use crate::syntax::{Atom, Formula, Term};
use crate::theory::{Domain, Family, TheoryId};

use super::closure::{closure, Form, Limits};
use super::value::{domain_error, rational_between, PowerProduct, Value};

pub type Assignment = BTreeMap<String, Value>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalVerdict {
    True,
    False,
    Inconclusive(String),
}

impl EvalVerdict {
    pub fn is_definite(&self) -> bool {
        !matches!(self, EvalVerdict::Inconclusive(_))
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            EvalVerdict::True => Some(true),
            EvalVerdict::False => Some(false),
            EvalVerdict::Inconclusive(_) => None,
        }
    }

    fn not(self) -> EvalVerdict {
        match self {
            EvalVerdict::True => EvalVerdict::False,
            EvalVerdict::False => EvalVerdict::True,
            i => i,
        }
    }
}

impl From<bool> for EvalVerdict {
    fn from(b: bool) -> EvalVerdict {
        if b {
            EvalVerdict::True
        } else {
            EvalVerdict::False
        }
    }
}

/// Bounds of the witness grid and of sampled assignments.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBudget {
    /// Integers are drawn from `[-int_range, int_range]`.
    pub int_range: i64,
    pub max_num: u64,
    pub max_den: u64,
    /// Multiplicative grid: products of these primes ...
    pub primes: Vec<u64>,
    /// ... with exponents in `[-max_exp, max_exp]`.
    pub max_exp: i64,
    /// Grid points tried per quantifier, simplest first.
    pub grid_cap: usize,
    /// Use complete candidate sets where available. Without it a failed
    /// search is always inconclusive.
    pub certify: bool,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            int_range: 64,
            max_num: 48,
            max_den: 48,
            primes: vec![2, 3, 5, 7],
            max_exp: 4,
            grid_cap: 64,
            certify: true,
        }
    }
}

fn is_multiplicative(theory: TheoryId) -> bool {
    theory.family() == Family::Multiplicative
}

fn rational_domain(theory: TheoryId) -> bool {
    matches!(
        theory.domain(),
        Domain::PosRationals | Domain::SignedRationals
    )
}

fn signed_domain(theory: TheoryId) -> bool {
    matches!(theory.domain(), Domain::Reals | Domain::SignedRationals)
}

/// Checks that `v` belongs to the domain of `theory` and brings it to the
/// representation the evaluator uses.
pub fn normalize_value(var: &str, v: &Value, theory: TheoryId) -> Result<Value> {
    let bad = || domain_error(var, v, theory);
    if is_multiplicative(theory) {
        let p = v.as_power_product().map_err(|_| bad())?;
        let ok = match theory.domain() {
            Domain::PosReals => p.signum() > 0,
            Domain::Reals => true,
            Domain::PosRationals => p.signum() > 0 && p.is_rational(),
            _ => p.is_rational(),
        };
        return if ok { Ok(Value::Mul(p)) } else { Err(bad()) };
    }
    let q = v.as_rational().ok_or_else(bad)?;
    let ok = match theory.domain() {
        Domain::Integers => q.is_integer(),
        Domain::Naturals => q.is_integer() && !q.is_negative(),
        _ => true,
    };
    if ok {
        Ok(Value::Rat(q))
    } else {
        Err(bad())
    }
}

fn prepare(f: &Formula, a: &Assignment, theory: TheoryId) -> Result<Assignment> {
    let mut env = Assignment::new();
    for v in f.free_variables() {
        let val = a.get(&v).ok_or_else(|| Error::Unassigned(v.clone()))?;
        env.insert(v.clone(), normalize_value(&v, val, theory)?);
    }
    Ok(env)
}

/// Truth value of a quantifier-free formula under a total assignment.
pub fn eval_qf(f: &Formula, a: &Assignment, theory: TheoryId) -> Result<bool> {
    if !f.is_quantifier_free() {
        return Err(Error::NotQuantifierFree);
    }
    let env = prepare(f, a, theory)?;
    let mut ev = Evaluator {
        theory,
        budget: &SearchBudget::default(),
        grid: Vec::new(),
    };
    let mut env = env;
    Ok(ev.eval(f, &mut env)?.as_bool().expect("quantifier-free"))
}

/// Evaluates `f`, searching for witnesses of its quantifiers.
pub fn eval_bounded(
    f: &Formula,
    a: &Assignment,
    theory: TheoryId,
    budget: &SearchBudget,
) -> Result<EvalVerdict> {
    let mut env = prepare(f, a, theory)?;
    let mut ev = Evaluator {
        theory,
        budget,
        grid: base_grid(theory, budget),
    };
    ev.eval(f, &mut env)
}

struct Evaluator<'a> {
    theory: TheoryId,
    budget: &'a SearchBudget,
    grid: Vec<Value>,
}

impl Evaluator<'_> {
    fn eval(&mut self, f: &Formula, env: &mut Assignment) -> Result<EvalVerdict> {
        use EvalVerdict::*;
        Ok(match f {
            Formula::True => True,
            Formula::False => False,
            Formula::Atom(a) => self.atom(a, env)?.into(),
            Formula::Not(g) => self.eval(g, env)?.not(),
            Formula::And(gs) => {
                let mut out = True;
                for g in gs {
                    match self.eval(g, env)? {
                        False => return Ok(False),
                        True => {}
                        i => out = i,
                    }
                }
                out
            }
            Formula::Or(gs) => {
                let mut out = False;
                for g in gs {
                    match self.eval(g, env)? {
                        True => return Ok(True),
                        False => {}
                        i => out = i,
                    }
                }
                out
            }
            Formula::Implies(a, b) => {
                let a = self.eval(a, env)?;
                if a == False {
                    return Ok(True);
                }
                match (a, self.eval(b, env)?) {
                    (_, True) => True,
                    (True, False) => False,
                    (Inconclusive(r), _) | (_, Inconclusive(r)) => Inconclusive(r),
                    _ => unreachable!(),
                }
            }
            Formula::Iff(a, b) => match (self.eval(a, env)?, self.eval(b, env)?) {
                (Inconclusive(r), _) | (_, Inconclusive(r)) => Inconclusive(r),
                (x, y) => (x == y).into(),
            },
            Formula::Exists(x, body) => self.quantifier(x, body, env, true)?,
            Formula::Forall(x, body) => self.quantifier(x, body, env, false)?,
        })
    }

    /// `∃x body` when `exists`, else `∀x body`.
    fn quantifier(
        &mut self,
        x: &str,
        body: &Formula,
        env: &mut Assignment,
        exists: bool,
    ) -> Result<EvalVerdict> {
        let (cands, complete) = self.candidates(x, body, env)?;
        let saved = env.remove(x);
        let mut open = None;
        let mut decided = None;
        for c in cands {
            env.insert(x.to_string(), c);
            match self.eval(body, env)? {
                EvalVerdict::Inconclusive(r) => {
                    open.get_or_insert(r);
                }
                v if v.as_bool() == Some(exists) => {
                    decided = Some(v);
                    break;
                }
                _ => {}
            }
        }
        env.remove(x);
        if let Some(s) = saved {
            env.insert(x.to_string(), s);
        }
        Ok(match (decided, open) {
            (Some(v), _) => v,
            (None, Some(r)) => EvalVerdict::Inconclusive(r),
            (None, None) if complete => (!exists).into(),
            (None, None) => EvalVerdict::Inconclusive(format!(
                "no {} for `{x}` within the search budget",
                if exists { "witness" } else { "counterexample" }
            )),
        })
    }

    fn atom(&self, a: &Atom, env: &Assignment) -> Result<bool> {
        if is_multiplicative(self.theory) {
            let t = |t: &Term| term_mul(t, env);
            return Ok(match a {
                Atom::Lt(l, r) => t(l)? < t(r)?,
                Atom::Eq(l, r) => t(l)? == t(r)?,
                Atom::Pow(n, u) => t(u)?.is_nth_power(*n, rational_domain(self.theory)),
                Atom::Cong(..) => {
                    return Err(Error::Unsupported(
                        "congruence in a multiplicative structure".into(),
                    ))
                }
            });
        }
        let t = |t: &Term| term_num(t, env);
        Ok(match a {
            Atom::Lt(l, r) => t(l)? < t(r)?,
            Atom::Eq(l, r) => t(l)? == t(r)?,
            Atom::Cong(l, r, n) => {
                let d = t(l)? - t(r)?;
                d.is_integer() && d.to_integer().is_multiple_of(n)
            }
            Atom::Pow(n, u) => is_nth_power(&t(u)?, *n),
        })
    }

    fn candidates(&self, x: &str, body: &Formula, env: &Assignment) -> Result<(Vec<Value>, bool)> {
        let theory = self.theory;
        let scan = scan_atoms(x, body, env);
        let qf = body.is_quantifier_free();
        let mut out: Vec<Value>;
        let mut complete;
        if is_multiplicative(theory) {
            let mut th = Vec::new();
            let mut usable = scan.usable;
            let mut has_pow = false;
            for a in &scan.atoms {
                match mul_thresholds(a, x, env) {
                    Some((ts, pow)) => {
                        th.extend(ts);
                        has_pow |= pow;
                    }
                    None => usable = false,
                }
            }
            let rational = rational_domain(theory);
            let mut decided_by_cells = qf && usable && !(rational && has_pow);
            let mut classes = Classes::trivial();
            if (!qf || (rational && has_pow)) && self.budget.certify {
                if let Some((cth, cl)) = self.closure_mul(x, body, env) {
                    th = cth;
                    classes = cl;
                    decided_by_cells = true;
                }
            }
            let pos = if rational {
                rational_cells(th, &classes)
            } else {
                real_cells(th)
            };
            if pos.len() > CELL_CAP {
                decided_by_cells = false;
            }
            let mut vals: Vec<PowerProduct> = Vec::new();
            if signed_domain(theory) {
                vals.push(PowerProduct::zero());
                vals.extend(pos.iter().map(|p| p.neg()));
            }
            vals.extend(pos);
            out = vals.into_iter().map(Value::Mul).collect();
            complete = decided_by_cells;
        } else {
            let mut th = Vec::new();
            let mut period = BigInt::one();
            let mut usable = scan.usable;
            for a in &scan.atoms {
                match num_thresholds(a, x, env) {
                    Some((ts, m)) => {
                        th.extend(ts);
                        if let Some(m) = m {
                            period = period.lcm(&m);
                        }
                    }
                    None => usable = false,
                }
            }
            let mut decided_by_cells = qf && usable;
            if !qf && self.budget.certify && theory != TheoryId::Dlo {
                if let Some((cth, cp)) = self.closure_num(x, body, env) {
                    th = cth;
                    period = cp;
                    decided_by_cells = true;
                }
            }
            if theory == TheoryId::Dlo {
                // Every value in scope, not only those next to x in an atom.
                th.extend(
                    body.free_variables()
                        .iter()
                        .filter(|v| v.as_str() != x)
                        .filter_map(|v| env.get(v).and_then(Value::as_rational)),
                );
                // Constants only occur in hand-built formulas, but they are
                // fixed points of the automorphisms too.
                for a in body.atoms() {
                    for t in a.terms() {
                        collect_consts(t, &mut th);
                    }
                }
            }
            match theory.domain() {
                Domain::Integers | Domain::Naturals => {
                    let naturals = theory.domain() == Domain::Naturals;
                    match period.to_i64().filter(|p| *p <= 4096) {
                        Some(p) => {
                            out = int_cells(&th, p, naturals)
                                .into_iter()
                                .map(|n| Value::Rat(BigRational::from_integer(n)))
                                .collect();
                            complete = decided_by_cells;
                        }
                        None => {
                            out = Vec::new();
                            complete = false;
                        }
                    }
                }
                _ => {
                    out = dense_cells(th).into_iter().map(Value::Rat).collect();
                    complete = theory == TheoryId::Dlo || decided_by_cells;
                }
            }
        }
        if !self.budget.certify {
            complete = false;
        }
        if !complete {
            for v in body.free_variables() {
                if let Some(val) = env.get(&v) {
                    out.push(val.clone());
                    match val {
                        Value::Rat(q) => {
                            out.push(Value::Rat(q + BigRational::one()));
                            out.push(Value::Rat(q - BigRational::one()));
                        }
                        Value::Mul(p) => {
                            out.push(Value::Mul(p.inv()));
                            out.push(Value::Mul(p.neg()));
                        }
                    }
                }
            }
            out.extend(self.grid.iter().cloned());
        }
        let mut seen = BTreeSet::new();
        let mut deduped = Vec::new();
        for v in out {
            if normalize_value(x, &v, theory).is_ok() && seen.insert(v.to_string()) {
                deduped.push(v);
            }
        }
        Ok((deduped, complete))
    }
}

impl Evaluator<'_> {
    /// Thresholds for `x` from the projection closure of `body`, with the
    /// period over ℤ, or `None` when the closure does not apply.
    fn closure_num(&self, x: &str, body: &Formula, env: &Assignment) -> Option<(Vec<BigRational>, BigInt)> {
        let c = closure(body, self.theory, &self.limits())?;
        let integral = self.theory.is_discrete();
        let mut th = Vec::new();
        for (f, w) in &c.ineqs {
            let a = BigRational::from_integer(f.coeff(x));
            if a.is_zero() {
                continue;
            }
            let mut r = f.k.clone();
            for (v, cv) in f.coeffs.iter().filter(|(v, _)| v.as_str() != x) {
                r += BigRational::from_integer(cv.clone()) * env.get(v)?.as_rational()?;
            }
            if integral {
                // Every integer the window's thresholds can touch.
                let w = BigRational::from_integer(w.clone());
                let (p, q) = ((-&r - &w) / &a, (-&r + &w) / &a);
                let (lo, hi) = if p < q { (p, q) } else { (q, p) };
                let (lo, hi) = (lo.floor().to_integer(), hi.ceil().to_integer());
                if (&hi - &lo) > BigInt::from(CELL_CAP) || th.len() > CELL_CAP {
                    return None;
                }
                let mut k = lo;
                while k <= hi {
                    th.push(BigRational::from_integer(k.clone()));
                    k += 1;
                }
            } else {
                th.push(-r / a);
            }
        }
        let mut period = BigInt::one();
        for (f, q) in &c.congs {
            let a = f.coeff(x);
            if !a.is_zero() {
                period = period.lcm(&(q / a.gcd(q)));
            }
        }
        Some((th, period))
    }

    /// Thresholds for `|x|` from the projection closure of `body`.
    fn closure_mul(&self, x: &str, body: &Formula, env: &Assignment) -> Option<(Vec<PowerProduct>, Classes)> {
        let c = closure(body, self.theory, &self.limits())?;
        // `|k·∏ vᶜᵛ|` over the variables other than `x`, or `None` when one
        // of them is zero and the form's atoms no longer involve `x`.
        let rest = |f: &Form| -> Option<Option<PowerProduct>> {
            let mut r = PowerProduct::from_rational(&f.k).ok()?;
            for (v, cv) in f.coeffs.iter().filter(|(v, _)| v.as_str() != x) {
                let val = env.get(v)?.as_power_product().ok()?;
                if val.is_zero() {
                    return Some(None);
                }
                r = r.mul(&val.abs().pow(cv.try_into().ok()?));
            }
            Some(Some(r))
        };
        let mut th = Vec::new();
        for f in c.ineqs.keys() {
            let a = f.coeff(x);
            if a.is_zero() {
                continue;
            }
            if let Some(r) = rest(f)? {
                th.push(r.inv().root(a.try_into().ok()?));
            }
        }
        let mut conds = Vec::new();
        for (f, m) in &c.pows {
            let a = f.coeff(x);
            if a.is_zero() {
                continue;
            }
            if let Some(r) = rest(f)? {
                let mut exps = BTreeMap::new();
                for (p, e) in r.exponents() {
                    if !e.is_integer() {
                        return None;
                    }
                    exps.insert(*p, e.to_integer());
                }
                conds.push(PowerCond { a, r: exps, m: m.clone() });
            }
        }
        Some((th, Classes::realizing(&conds)?))
    }

    fn limits(&self) -> Limits {
        Limits {
            max_forms: CELL_CAP,
            max_window: BigInt::from(CELL_CAP),
        }
    }
}

/// Bound on closure sizes and integer windows before certification is
/// abandoned.
const CELL_CAP: usize = 2048;

fn collect_consts(t: &Term, out: &mut Vec<BigRational>) {
    match t {
        Term::Const(q) => out.push(q.clone()),
        Term::Var(_) => {}
        Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) => {
            collect_consts(a, out);
            collect_consts(b, out);
        }
        Term::Neg(a) | Term::Scale(_, a) | Term::Inv(a) | Term::Pow(a, _) | Term::Succ(a) => {
            collect_consts(a, out)
        }
    }
}

fn term_num(t: &Term, env: &Assignment) -> Result<BigRational> {
    Ok(match t {
        Term::Var(v) => env
            .get(v)
            .ok_or_else(|| Error::Unassigned(v.clone()))?
            .as_rational()
            .ok_or_else(|| Error::Unsupported(format!("`{v}` has no rational value")))?,
        Term::Const(q) => q.clone(),
        Term::Add(a, b) => term_num(a, env)? + term_num(b, env)?,
        Term::Sub(a, b) => term_num(a, env)? - term_num(b, env)?,
        Term::Neg(a) => -term_num(a, env)?,
        Term::Scale(n, a) => BigRational::from_integer(n.clone()) * term_num(a, env)?,
        Term::Mul(a, b) => term_num(a, env)? * term_num(b, env)?,
        Term::Inv(a) => {
            let v = term_num(a, env)?;
            if v.is_zero() {
                v
            } else {
                v.recip()
            }
        }
        Term::Pow(a, k) => {
            let v = term_num(a, env)?;
            if v.is_zero() {
                v
            } else if *k >= 0 {
                num_traits::pow(v, *k as usize)
            } else {
                num_traits::pow(v.recip(), k.unsigned_abs() as usize)
            }
        }
        Term::Succ(a) => term_num(a, env)? + BigRational::one(),
    })
}

fn term_mul(t: &Term, env: &Assignment) -> Result<PowerProduct> {
    Ok(match t {
        Term::Var(v) => env
            .get(v)
            .ok_or_else(|| Error::Unassigned(v.clone()))?
            .as_power_product()?,
        Term::Const(q) => PowerProduct::from_rational(q)?,
        Term::Neg(a) => term_mul(a, env)?.neg(),
        Term::Mul(a, b) => term_mul(a, env)?.mul(&term_mul(b, env)?),
        Term::Inv(a) => term_mul(a, env)?.inv(),
        Term::Pow(a, k) => term_mul(a, env)?.pow(*k),
        _ => {
            return Err(Error::Unsupported(format!(
                "`{t}` is not a multiplicative term"
            )))
        }
    })
}

struct Scan<'a> {
    /// Atoms in which `x` refers to the quantified variable and every other
    /// variable has a value.
    atoms: Vec<&'a Atom>,
    /// False when some atom about `x` also mentions a variable bound inside.
    usable: bool,
}

fn scan_atoms<'a>(x: &str, body: &'a Formula, env: &Assignment) -> Scan<'a> {
    fn walk<'a>(
        f: &'a Formula,
        x: &str,
        env: &Assignment,
        bound: &mut Vec<String>,
        out: &mut Scan<'a>,
    ) {
        match f {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => {
                if bound.iter().any(|b| b == x) || !a.mentions(x) {
                    return;
                }
                let vars: BTreeSet<String> = a.terms().iter().flat_map(|t| t.vars()).collect();
                if vars
                    .iter()
                    .all(|v| v == x || (!bound.contains(v) && env.contains_key(v)))
                {
                    out.atoms.push(a);
                } else {
                    out.usable = false;
                }
            }
            Formula::Not(g) => walk(g, x, env, bound, out),
            Formula::And(gs) | Formula::Or(gs) => {
                gs.iter().for_each(|g| walk(g, x, env, bound, out))
            }
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                walk(a, x, env, bound, out);
                walk(b, x, env, bound, out);
            }
            Formula::Exists(v, g) | Formula::Forall(v, g) => {
                bound.push(v.clone());
                walk(g, x, env, bound, out);
                bound.pop();
            }
        }
    }
    let mut out = Scan {
        atoms: Vec::new(),
        usable: true,
    };
    walk(body, x, env, &mut Vec::new(), &mut out);
    out
}

/// `t = a·x + b` with the other variables evaluated.
fn linear_in(t: &Term, x: &str, env: &Assignment) -> Option<(BigRational, BigRational)> {
    let zero = BigRational::zero;
    Some(match t {
        Term::Var(v) if v == x => (BigRational::one(), zero()),
        Term::Var(v) => (zero(), env.get(v)?.as_rational()?),
        Term::Const(q) => (zero(), q.clone()),
        Term::Add(a, b) | Term::Sub(a, b) => {
            let (a1, b1) = linear_in(a, x, env)?;
            let (a2, b2) = linear_in(b, x, env)?;
            if matches!(t, Term::Add(..)) {
                (a1 + a2, b1 + b2)
            } else {
                (a1 - a2, b1 - b2)
            }
        }
        Term::Neg(a) => {
            let (a1, b1) = linear_in(a, x, env)?;
            (-a1, -b1)
        }
        Term::Scale(n, a) => {
            let (a1, b1) = linear_in(a, x, env)?;
            let n = BigRational::from_integer(n.clone());
            (a1 * &n, b1 * n)
        }
        Term::Succ(a) => {
            let (a1, b1) = linear_in(a, x, env)?;
            (a1, b1 + BigRational::one())
        }
        Term::Mul(a, b) => {
            let (a1, b1) = linear_in(a, x, env)?;
            let (a2, b2) = linear_in(b, x, env)?;
            if a1.is_zero() {
                (&b1 * a2, b1 * b2)
            } else if a2.is_zero() {
                (&b2 * a1, b1 * b2)
            } else {
                return None;
            }
        }
        _ => return None,
    })
}

/// Thresholds where the atom may change truth value, and its period.
fn num_thresholds(
    a: &Atom,
    x: &str,
    env: &Assignment,
) -> Option<(Vec<BigRational>, Option<BigInt>)> {
    match a {
        Atom::Lt(l, r) | Atom::Eq(l, r) => {
            let (a1, b1) = linear_in(l, x, env)?;
            let (a2, b2) = linear_in(r, x, env)?;
            let (a, b) = (a1 - a2, b1 - b2);
            Some(if a.is_zero() {
                (vec![], None)
            } else {
                (vec![-b / a], None)
            })
        }
        Atom::Cong(l, r, n) => {
            linear_in(l, x, env)?;
            linear_in(r, x, env)?;
            Some((vec![], Some(n.clone())))
        }
        Atom::Pow(..) => None,
    }
}

/// `t = c·xᵃ` for `x ≠ 0`, other variables evaluated.
fn monomial_in(t: &Term, x: &str, env: &Assignment) -> Option<(PowerProduct, i64)> {
    Some(match t {
        Term::Var(v) if v == x => (PowerProduct::one(), 1),
        Term::Var(v) => (env.get(v)?.as_power_product().ok()?, 0),
        Term::Const(q) => (PowerProduct::from_rational(q).ok()?, 0),
        Term::Neg(a) => {
            let (c, e) = monomial_in(a, x, env)?;
            (c.neg(), e)
        }
        Term::Mul(a, b) => {
            let (c1, e1) = monomial_in(a, x, env)?;
            let (c2, e2) = monomial_in(b, x, env)?;
            (c1.mul(&c2), e1 + e2)
        }
        Term::Inv(a) => {
            let (c, e) = monomial_in(a, x, env)?;
            (c.inv(), -e)
        }
        Term::Pow(a, k) => {
            let (c, e) = monomial_in(a, x, env)?;
            (c.pow(*k), e * k)
        }
        _ => return None,
    })
}

/// Values of `|x|` where the atom may change; the flag marks `Ρₙ` atoms.
fn mul_thresholds(a: &Atom, x: &str, env: &Assignment) -> Option<(Vec<PowerProduct>, bool)> {
    match a {
        Atom::Lt(l, r) | Atom::Eq(l, r) => {
            let (c1, e1) = monomial_in(l, x, env)?;
            let (c2, e2) = monomial_in(r, x, env)?;
            if e1 == e2 || c1.is_zero() || c2.is_zero() {
                return Some((vec![], false));
            }
            // |c₁|·|x|^{e₁} = |c₂|·|x|^{e₂}
            let t = c2.abs().mul(&c1.abs().inv()).root(e1 - e2);
            Some((vec![t], false))
        }
        Atom::Pow(_, u) => {
            let (c, e) = monomial_in(u, x, env)?;
            if e == 0 || c.is_zero() {
                return Some((vec![], true));
            }
            Some((vec![c.abs().inv().root(e)], true))
        }
        Atom::Cong(..) => None,
    }
}

fn sorted_unique<T: Ord>(mut v: Vec<T>) -> Vec<T> {
    v.sort();
    v.dedup();
    v
}

/// One point per cell of the dense line cut at `th`.
fn dense_cells(th: Vec<BigRational>) -> Vec<BigRational> {
    let th = sorted_unique(th);
    let (Some(lo), Some(hi)) = (th.first().cloned(), th.last().cloned()) else {
        return vec![BigRational::zero()];
    };
    let two = BigRational::from_integer(2.into());
    let mut out = th.clone();
    out.extend(th.windows(2).map(|w| (&w[0] + &w[1]) / &two));
    out.push(lo - BigRational::one());
    out.push(hi + BigRational::one());
    out
}

/// Integer points covering each cell of the line cut at `th` over one
/// full period.
fn int_cells(th: &[BigRational], period: i64, naturals: bool) -> Vec<BigInt> {
    let mut bounds: Vec<BigInt> = th
        .iter()
        .flat_map(|t| [t.floor().to_integer(), t.ceil().to_integer()])
        .collect();
    if naturals {
        bounds.push(-BigInt::one());
    }
    let bounds = sorted_unique(bounds);
    let mut out = bounds.clone();
    let (Some(lo), Some(hi)) = (bounds.first(), bounds.last()) else {
        return (0..period).map(BigInt::from).collect();
    };
    for w in bounds.windows(2) {
        let mut k: BigInt = &w[0] + 1;
        let mut n = 0;
        while k < w[1] && n < period {
            out.push(k.clone());
            k += 1;
            n += 1;
        }
    }
    for d in 1..=period {
        out.push(lo - d);
        out.push(hi + d);
    }
    if naturals {
        out.retain(|n| !n.is_negative());
    }
    out
}

/// One point per cell of `(0, ∞)` cut at `th`, over the reals.
fn real_cells(th: Vec<PowerProduct>) -> Vec<PowerProduct> {
    let th = sorted_unique(th);
    let (Some(lo), Some(hi)) = (th.first().cloned(), th.last().cloned()) else {
        return vec![PowerProduct::one()];
    };
    let two = PowerProduct::from_rational(&BigRational::from_integer(2.into())).unwrap();
    let mut out = th.clone();
    out.extend(th.windows(2).map(|w| w[0].mul(&w[1]).root(2)));
    out.push(lo.mul(&two.inv()));
    out.push(hi.mul(&two));
    out
}

/// `a·x + r ∈ mG`, with `G` the exponent vectors of ℚ⁺.
struct PowerCond {
    a: BigInt,
    r: BTreeMap<u64, BigInt>,
    m: BigInt,
}

/// Representatives of every truth vector a list of power conditions can
/// take, each usable anywhere on the line: multiplying by `period`-th
/// powers keeps the vector.
struct Classes {
    reps: Vec<PowerProduct>,
    period: i64,
}

impl Classes {
    fn trivial() -> Classes {
        Classes {
            reps: vec![PowerProduct::one()],
            period: 1,
        }
    }

    /// The exponent of `x` at each prime is chosen separately; primes in
    /// no `r` all behave alike, and one fresh prime per residue is enough.
    fn realizing(conds: &[PowerCond]) -> Option<Classes> {
        let period = conds.iter().fold(BigInt::one(), |p, c| p.lcm(&c.m));
        let period: i64 = period.try_into().ok().filter(|p| *p <= 64)?;
        let holds = |t: i64, p: Option<u64>| -> Vec<bool> {
            conds
                .iter()
                .map(|c| {
                    let r = p.and_then(|p| c.r.get(&p)).cloned().unwrap_or_default();
                    (&c.a * t + r).is_multiple_of(&c.m)
                })
                .collect()
        };
        let support: BTreeSet<u64> = conds.iter().flat_map(|c| c.r.keys().copied()).collect();
        let mut states: BTreeMap<Vec<bool>, BTreeMap<u64, i64>> =
            BTreeMap::from([(vec![true; conds.len()], BTreeMap::new())]);
        let extend = |states: &mut BTreeMap<Vec<bool>, BTreeMap<u64, i64>>, p: u64, ts: &[i64], keep: bool| {
            let mut next = if keep { states.clone() } else { BTreeMap::new() };
            for (st, w) in states.iter() {
                for &t in ts {
                    let b = holds(t, Some(p));
                    let st2: Vec<bool> = st.iter().zip(&b).map(|(x, y)| *x && *y).collect();
                    next.entry(st2).or_insert_with(|| {
                        let mut w = w.clone();
                        w.insert(p, t);
                        w
                    });
                }
            }
            *states = next;
        };
        let all: Vec<i64> = (0..period).collect();
        for &p in &support {
            extend(&mut states, p, &all, false);
            if states.len() > MAX_CLASSES {
                return None;
            }
        }
        let mut fresh = crate::arith::primes_up_to(1000).into_iter().filter(|p| !support.contains(p));
        for t in 1..period {
            extend(&mut states, fresh.next()?, &[t], true);
            if states.len() > MAX_CLASSES {
                return None;
            }
        }
        let reps = states
            .into_values()
            .map(|w| PowerProduct::new(1, w.into_iter().map(|(p, e)| (p, BigRational::from_integer(e.into())))))
            .collect();
        Some(Classes { reps, period })
    }
}

const MAX_CLASSES: usize = 256;

/// Rationals covering each cell of `(0, ∞)` cut at `th`, one per class;
/// irrational thresholds are skipped since no rational hits them.
fn rational_cells(th: Vec<PowerProduct>, classes: &Classes) -> Vec<PowerProduct> {
    let th = sorted_unique(th);
    let mut out: Vec<PowerProduct> = th.iter().filter(|t| t.is_rational()).cloned().collect();
    let zero = PowerProduct::zero();
    let mut cells: Vec<(&PowerProduct, Option<&PowerProduct>)> = Vec::new();
    cells.push((&zero, th.first()));
    cells.extend(th.windows(2).map(|w| (&w[0], Some(&w[1]))));
    if let Some(last) = th.last() {
        cells.push((last, None));
    }
    let n = classes.period;
    for (lo, hi) in cells {
        for c in &classes.reps {
            // c·uⁿ ∈ (lo, hi)  ⟺  u ∈ ((lo/c)^(1/n), (hi/c)^(1/n))
            let scale = |t: &PowerProduct| {
                if t.is_zero() {
                    PowerProduct::zero()
                } else {
                    t.mul(&c.inv()).root(n)
                }
            };
            let u = rational_between(&scale(lo), hi.map(scale).as_ref());
            let u = PowerProduct::from_rational(&u).expect("positive rational");
            out.push(c.mul(&u.pow(n)));
        }
    }
    out
}

/// The search grid, simplest elements first, capped at `grid_cap`.
pub fn base_grid(theory: TheoryId, budget: &SearchBudget) -> Vec<Value> {
    let cap = budget.grid_cap;
    let mut out = Vec::new();
    match theory.domain() {
        Domain::Integers | Domain::Naturals => {
            out.push(Value::int(0));
            for k in 1..=budget.int_range {
                if out.len() >= cap {
                    break;
                }
                out.push(Value::int(k));
                if theory.domain() == Domain::Integers {
                    out.push(Value::int(-k));
                }
            }
        }
        Domain::Rationals => {
            out.push(Value::int(0));
            let h_max = budget.max_num.max(budget.max_den);
            'outer: for h in 1..=h_max {
                // Fractions of height exactly h.
                for (n, d) in (1..=h).map(|d| (h, d)).chain((1..h).map(|n| (n, h))) {
                    if n > budget.max_num || d > budget.max_den || n.gcd(&d) != 1 {
                        continue;
                    }
                    let q = BigRational::new(n.into(), d.into());
                    out.push(Value::Rat(q.clone()));
                    out.push(Value::Rat(-q));
                    if out.len() >= cap {
                        break 'outer;
                    }
                }
            }
        }
        _ => {
            let signed = signed_domain(theory);
            if signed {
                out.push(Value::Mul(PowerProduct::zero()));
            }
            let k = budget.primes.len();
            let max_deg = budget.max_exp as usize * k;
            'deg: for deg in 0..=max_deg {
                for exps in vectors_of_degree(k, deg, budget.max_exp) {
                    let p = PowerProduct::new(
                        1,
                        budget
                            .primes
                            .iter()
                            .zip(&exps)
                            .map(|(p, e)| (*p, BigRational::from_integer((*e).into()))),
                    );
                    if signed {
                        out.push(Value::Mul(p.neg()));
                    }
                    out.push(Value::Mul(p));
                    if out.len() >= cap {
                        break 'deg;
                    }
                }
            }
        }
    }
    out.truncate(cap);
    out
}

/// Integer vectors of length `k` with `Σ|eᵢ| = deg` and `|eᵢ| ≤ max`.
fn vectors_of_degree(k: usize, deg: usize, max: i64) -> Vec<Vec<i64>> {
    if k == 0 {
        return if deg == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for a in 0..=(deg as i64).min(max) {
        for rest in vectors_of_degree(k - 1, deg - a as usize, max) {
            for e in if a == 0 { vec![0] } else { vec![a, -a] } {
                let mut v = vec![e];
                v.extend(&rest);
                out.push(v);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn asg(pairs: &[(&str, i64)]) -> Assignment {
        pairs.iter().map(|(v, n)| (v.to_string(), Value::int(*n))).collect()
    }

    fn frac(n: i64, d: i64) -> Value {
        Value::Rat(BigRational::new(n.into(), d.into()))
    }

    fn bounded(text: &str, th: TheoryId, a: &Assignment, b: &SearchBudget) -> EvalVerdict {
        eval_bounded(&parse_formula(text, th).unwrap(), a, th, b).unwrap()
    }

    #[test]
    fn quantifier_free_examples() {
        let f = parse_formula("x < y", TheoryId::Dlo).unwrap();
        assert!(eval_qf(&f, &asg(&[("x", 1), ("y", 2)]), TheoryId::Dlo).unwrap());
        let f = parse_formula("cong(x, 1, 4)", TheoryId::ZAdd).unwrap();
        assert!(eval_qf(&f, &asg(&[("x", -7)]), TheoryId::ZAdd).unwrap());
        let f = parse_formula("pow(2, x)", TheoryId::QPosMul).unwrap();
        let a = Assignment::from([("x".to_string(), frac(4, 9))]);
        assert!(eval_qf(&f, &a, TheoryId::QPosMul).unwrap());
    }

    #[test]
    fn domain_violations() {
        let f = parse_formula("x < y", TheoryId::QPosMul).unwrap();
        let e = eval_qf(&f, &asg(&[("x", 0), ("y", 2)]), TheoryId::QPosMul);
        assert!(matches!(e, Err(Error::Domain { .. })));
        let f = parse_formula("x < y", TheoryId::ZOrder).unwrap();
        let a = Assignment::from([("x".to_string(), frac(1, 2)), ("y".into(), Value::int(1))]);
        assert!(matches!(eval_qf(&f, &a, TheoryId::ZOrder), Err(Error::Domain { .. })));
        assert!(matches!(
            eval_qf(&f, &asg(&[("x", 1)]), TheoryId::ZOrder),
            Err(Error::Unassigned(_))
        ));
    }

    #[test]
    fn bounded_examples() {
        let small = SearchBudget {
            max_num: 2,
            max_den: 2,
            ..SearchBudget::default()
        };
        let none = Assignment::new();
        // Constants are outside the dense-order signature; build the formula by hand.
        let f = Formula::exists(
            "x",
            Formula::and_all([
                Formula::lt(Term::int(0), Term::var("x")),
                Formula::lt(Term::var("x"), Term::int(1)),
            ]),
        );
        assert_eq!(eval_bounded(&f, &none, TheoryId::Dlo, &small).unwrap(), EvalVerdict::True);
        let wide = SearchBudget {
            max_num: 100,
            max_den: 100,
            grid_cap: usize::MAX,
            certify: false,
            ..SearchBudget::default()
        };
        assert!(matches!(
            bounded("exists x. x * x = 2", TheoryId::QMul, &none, &wide),
            EvalVerdict::Inconclusive(_)
        ));
        // With certification the power conditions decide it.
        assert_eq!(
            bounded("exists x. x * x = 2", TheoryId::QMul, &none, &SearchBudget::default()),
            EvalVerdict::False
        );
        assert_eq!(
            bounded("exists x. x * x = 4/9", TheoryId::QPosMul, &none, &SearchBudget::default()),
            EvalVerdict::True
        );
        assert_eq!(
            bounded(
                "forall a. exists x. pow(2, x * a) & ~pow(3, x)",
                TheoryId::QPosMul,
                &none,
                &SearchBudget::default()
            ),
            EvalVerdict::True
        );
        assert_eq!(
            bounded(
                "exists x. pow(2, x * 3) & pow(2, x * 12) & 1 < x",
                TheoryId::QPosMul,
                &none,
                &SearchBudget::default()
            ),
            EvalVerdict::True
        );
        assert_eq!(
            bounded(
                "exists x. pow(2, x * 3) & pow(2, x * 5)",
                TheoryId::QPosMul,
                &none,
                &SearchBudget::default()
            ),
            EvalVerdict::False
        );
        let z = SearchBudget {
            int_range: 50,
            ..SearchBudget::default()
        };
        assert_eq!(bounded("forall x. x < s(x)", TheoryId::ZOrder, &none, &z), EvalVerdict::True);
    }

    #[test]
    fn complete_searches_are_definite() {
        let b = SearchBudget::default();
        let none = Assignment::new();
        assert_eq!(bounded("exists x. x * x = 2", TheoryId::QMul, &none, &b), EvalVerdict::False);
        assert_eq!(bounded("exists x. x * x = 2", TheoryId::RMul, &none, &b), EvalVerdict::True);
        assert_eq!(bounded("exists x. x^2 = 2", TheoryId::RPosMul, &none, &b), EvalVerdict::True);
        let a = asg(&[("y", 3), ("z", 4)]);
        assert_eq!(bounded("exists x. y < x & x < z", TheoryId::ZOrder, &a, &b), EvalVerdict::False);
        assert_eq!(bounded("exists x. y < x & x < z", TheoryId::Dlo, &a, &b), EvalVerdict::True);
        let a = asg(&[("y", 7)]);
        assert_eq!(bounded("exists x. x + x = y", TheoryId::ZAdd, &a, &b), EvalVerdict::False);
        assert_eq!(bounded("exists x. x + x = y", TheoryId::QAdd, &a, &b), EvalVerdict::True);
        assert_eq!(
            bounded("exists x. cong(x, 0, 2) & 0 < x & x < 5", TheoryId::ZAdd, &none, &b),
            EvalVerdict::True
        );
        // Nested dense-order quantifiers stay definite.
        assert_eq!(
            bounded("forall x. exists y. x < y & y < z", TheoryId::Dlo, &asg(&[("z", 0)]), &b),
            EvalVerdict::False
        );
    }

    #[test]
    fn grid_is_simplest_first() {
        let b = SearchBudget {
            grid_cap: 7,
            ..SearchBudget::default()
        };
        let g: Vec<String> = base_grid(TheoryId::QAdd, &b).iter().map(|v| v.to_string()).collect();
        assert_eq!(g, ["0", "1", "-1", "2", "-2", "1/2", "-1/2"]);
        let g = base_grid(TheoryId::QPosMul, &SearchBudget { grid_cap: 3, ..SearchBudget::default() });
        assert_eq!(g.len(), 3);
    }
}
