//! Multiplicative groups of positive reals and rationals, and their
//! extensions by `0` and negatives.
//!
//! Over the positive cone a literal is `m < 1`, `m = 1` or `Ρₙ(m)` for a
//! monomial `m`. Raising to a positive power preserves `<` and `=`, and
//! `Ρₙ(a) ↔ Ρ_{kn}(aᵏ)`, so every literal is brought to the form with
//! `y = x^α`. Over ℝ⁺ every `y` is an `α`-th power; over ℚ⁺ the literal
//! `Ρ_α(y)` says so.
//!
//! The signed theories split every variable of the block into negative,
//! zero and positive, fold the atoms accordingly, and run the positive
//! engine on absolute values.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::power_merge_exponents;
use crate::error::{Error, Result};
use crate::normalize::{simplify, Literal, MonAtom, MonRel, Monomial};
use crate::syntax::{Atom, Formula, Term};
use crate::theory::TheoryId;

use super::unsupported;

/// `Ρₙ(y·t)` or its negation.
struct PowLit {
    n: u64,
    t: Monomial,
    positive: bool,
}

pub(super) fn eliminate_positive(x: &str, lits: &[Literal], rational: bool) -> Result<Formula> {
    let mut atoms = Vec::new();
    for lit in lits {
        let a = MonAtom::from_atom(&lit.atom)
            .ok_or_else(|| unsupported("not a monomial atom", lit))?;
        atoms.push((a, lit.positive));
    }
    positive_block(x, atoms, rational)
}

fn positive_block(x: &str, atoms: Vec<(MonAtom, bool)>, rational: bool) -> Result<Formula> {
    let mut rest = Vec::new();
    let mut block = Vec::new();
    for (a, positive) in atoms {
        match a.canonical() {
            Ok(c) if c.m.exp(x) == 0 => {
                let f = c.to_formula();
                rest.push(if positive { f } else { Formula::not(f) });
            }
            Ok(c) => {
                if !positive && !matches!(c.rel, MonRel::Pow(_)) {
                    return Err(Error::Unsupported(format!(
                        "negated order atom reached the engine: {}",
                        c.to_formula()
                    )));
                }
                block.push((c, positive));
            }
            Err(b) if b == positive => {}
            Err(_) => return Ok(Formula::False),
        }
    }
    let alpha = block
        .iter()
        .fold(1i64, |acc, (a, _)| acc.lcm(&a.m.exp(x)));

    let mut lowers = Vec::new();
    let mut uppers = Vec::new();
    let mut eqs = Vec::new();
    let mut pows = Vec::new();
    if rational && alpha > 1 {
        pows.push(PowLit {
            n: alpha as u64,
            t: Monomial::one(),
            positive: true,
        });
    }
    for (a, positive) in block {
        let e = a.m.exp(x);
        let k = alpha / e.abs();
        // The literal now reads on y^{±1}·m.
        let m = a.m.without(x).pow(k);
        match a.rel {
            // y·m < 1 ⟺ y < m⁻¹; y⁻¹·m < 1 ⟺ m < y.
            MonRel::Lt1 if e > 0 => uppers.push(m.inv()),
            MonRel::Lt1 => lowers.push(m),
            MonRel::Eq1 if e > 0 => eqs.push(m.inv()),
            MonRel::Eq1 => eqs.push(m),
            MonRel::Pow(n) => pows.push(PowLit {
                n: n * k as u64,
                t: if e > 0 { m } else { m.inv() },
                positive,
            }),
        }
    }

    let lt = |a: &Monomial, b: &Monomial| MonAtom::lt1(a.mul(&b.inv())).to_formula();
    let mut out = rest;
    if let Some(w) = eqs.first().cloned() {
        out.extend(lowers.iter().map(|l| lt(l, &w)));
        out.extend(uppers.iter().map(|u| lt(&w, u)));
        out.extend(eqs[1..].iter().map(|e| MonAtom::eq1(w.mul(&e.inv())).to_formula()));
        for p in &pows {
            let f = MonAtom::power(p.n, w.mul(&p.t)).to_formula();
            out.push(if p.positive { f } else { Formula::not(f) });
        }
        return Ok(Formula::and_all(out));
    }

    // The solution set of the power literals is either empty or dense, so
    // the bounds only need to be compatible with each other.
    for u in &uppers {
        for l in &lowers {
            out.push(lt(l, u));
        }
    }
    let (pos, neg): (Vec<PowLit>, Vec<PowLit>) = pows.into_iter().partition(|p| p.positive);
    if pos.is_empty() {
        return Ok(Formula::and_all(out));
    }
    let (n, beta) = merge_powers(&pos, &mut out)?;
    // y = β⁻¹·zⁿ; Ρₘ(y·s) is then independent of z exactly when m | n.
    for p in neg.iter().filter(|p| n % p.n == 0) {
        out.push(Formula::not(
            MonAtom::power(p.n, beta.inv().mul(&p.t)).to_formula(),
        ));
    }
    Ok(Formula::and_all(out))
}

/// `⋀ Ρ_{nᵢ}(y·tᵢ) ⟺ Ρₙ(y·β) ∧ ⋀_{i<j} Ρ_{dᵢⱼ}(tᵢ·tⱼ⁻¹)` with
/// `n = lcm nᵢ`, `dᵢⱼ = gcd(nᵢ, nⱼ)`, `β = ∏ tᵢ^{cᵢ·n/nᵢ}` and
/// `Σ cᵢ·n/nᵢ = 1`. Pushes the side conditions, returns `(n, β)`.
fn merge_powers(pos: &[PowLit], out: &mut Vec<Formula>) -> Result<(u64, Monomial)> {
    for (i, a) in pos.iter().enumerate() {
        for b in &pos[i + 1..] {
            let d = a.n.gcd(&b.n);
            if d > 1 {
                out.push(MonAtom::power(d, a.t.mul(&b.t.inv())).to_formula());
            }
        }
    }
    let ns: Vec<u64> = pos.iter().map(|p| p.n).collect();
    let (n, exps) = power_merge_exponents(&ns)?;
    let mut beta = Monomial::one();
    for (p, e) in pos.iter().zip(exps) {
        beta = beta.mul(&p.t.pow(e));
    }
    Ok((n, beta))
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    fn mul(self, o: Sign) -> Sign {
        match (self, o) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Pos,
            _ => Sign::Neg,
        }
    }
}

/// Sign and absolute value of a term under a sign assignment.
fn signed_mono(t: &Term, sign_of: &impl Fn(&str) -> Sign) -> Option<(Sign, Monomial)> {
    Some(match t {
        Term::Var(v) => match sign_of(v) {
            Sign::Zero => (Sign::Zero, Monomial::one()),
            s => (s, Monomial::var(v)),
        },
        Term::Const(q) if q.is_zero() => (Sign::Zero, Monomial::one()),
        Term::Const(q) => (
            if q.is_positive() { Sign::Pos } else { Sign::Neg },
            Monomial::constant(q.abs()),
        ),
        Term::Neg(a) => {
            let (s, m) = signed_mono(a, sign_of)?;
            let s = match s {
                Sign::Pos => Sign::Neg,
                Sign::Neg => Sign::Pos,
                Sign::Zero => Sign::Zero,
            };
            (s, m)
        }
        Term::Mul(a, b) => {
            let (sa, ma) = signed_mono(a, sign_of)?;
            let (sb, mb) = signed_mono(b, sign_of)?;
            (sa.mul(sb), ma.mul(&mb))
        }
        // 0⁻¹ = 0.
        Term::Inv(a) => {
            let (s, m) = signed_mono(a, sign_of)?;
            (s, m.inv())
        }
        Term::Pow(a, k) => {
            let (s, m) = signed_mono(a, sign_of)?;
            let s = if s == Sign::Neg && k % 2 == 0 { Sign::Pos } else { s };
            (s, m.pow(*k))
        }
        _ => return None,
    })
}

/// The atom over absolute values, or its truth value.
fn fold_signed(a: &Atom, sign_of: &impl Fn(&str) -> Sign) -> Option<Result<MonAtom, bool>> {
    Some(match a {
        Atom::Lt(l, r) => {
            let (sa, ma) = signed_mono(l, sign_of)?;
            let (sb, mb) = signed_mono(r, sign_of)?;
            match (sa, sb) {
                _ if sa < sb => Err(true),
                _ if sa > sb => Err(false),
                (Sign::Zero, _) => Err(false),
                (Sign::Pos, _) => Ok(MonAtom::lt1(ma.mul(&mb.inv()))),
                (Sign::Neg, _) => Ok(MonAtom::lt1(mb.mul(&ma.inv()))),
            }
        }
        Atom::Eq(l, r) => {
            let (sa, ma) = signed_mono(l, sign_of)?;
            let (sb, mb) = signed_mono(r, sign_of)?;
            match (sa, sb) {
                _ if sa != sb => Err(false),
                (Sign::Zero, _) => Err(true),
                _ => Ok(MonAtom::eq1(ma.mul(&mb.inv()))),
            }
        }
        Atom::Pow(n, t) => {
            let (s, m) = signed_mono(t, sign_of)?;
            match s {
                Sign::Zero => Err(true),
                Sign::Neg if n % 2 == 0 => Err(false),
                _ => Ok(MonAtom::power(*n, m)),
            }
        }
        Atom::Cong(..) => return None,
    })
}

pub(super) fn eliminate_signed(x: &str, lits: &[Literal], rational: bool) -> Result<Formula> {
    let positive_theory = if rational {
        TheoryId::QPosMul
    } else {
        TheoryId::RPosMul
    };
    let mut vars = BTreeSet::from([x.to_string()]);
    for l in lits {
        for t in l.atom.terms() {
            vars.extend(t.vars());
        }
    }
    let vars: Vec<String> = vars.into_iter().collect();
    let signs = [Sign::Neg, Sign::Zero, Sign::Pos];

    let mut cases = Vec::new();
    let total = 3usize.pow(vars.len() as u32);
    'assignment: for code in 0..total {
        let mut c = code;
        let sigma: Vec<Sign> = vars
            .iter()
            .map(|_| {
                let s = signs[c % 3];
                c /= 3;
                s
            })
            .collect();
        let sign_of = |v: &str| {
            vars.iter()
                .position(|w| w == v)
                .map(|i| sigma[i])
                .unwrap_or(Sign::Pos)
        };
        let mut atoms = Vec::new();
        for lit in lits {
            let folded = fold_signed(&lit.atom, &sign_of)
                .ok_or_else(|| unsupported("not a multiplicative atom", lit))?;
            match folded {
                Ok(a) => atoms.push((a, lit.positive)),
                Err(b) if b == lit.positive => {}
                Err(_) => continue 'assignment,
            }
        }
        let inner = if sign_of(x) == Sign::Zero {
            // x = 0 leaves no occurrence of x behind.
            Formula::and_all(atoms.into_iter().map(|(a, positive)| {
                let f = a.to_formula();
                if positive {
                    f
                } else {
                    Formula::not(f)
                }
            }))
        } else {
            positive_block(x, atoms, rational)?
        };
        let inner = simplify(&inner, positive_theory);
        if inner == Formula::False {
            continue;
        }
        let mut case = Vec::new();
        for (v, s) in vars.iter().zip(&sigma) {
            if v == x {
                continue;
            }
            let zero = Term::zero();
            let var = Term::var(v);
            case.push(match s {
                Sign::Pos => Formula::lt(zero, var),
                Sign::Zero => Formula::eq(var, zero),
                Sign::Neg => Formula::lt(var, zero),
            });
        }
        case.push(resign(&inner, &sign_of));
        cases.push(Formula::and_all(case));
    }
    Ok(Formula::or_all(cases))
}

/// Rewrites a formula about absolute values into one about the signed
/// variables: a monomial side whose negative variables carry an odd total
/// exponent changes sign.
fn resign(f: &Formula, sign_of: &impl Fn(&str) -> Sign) -> Formula {
    f.map_atoms(&mut |a| Formula::Atom(a.map_terms(&|t| resign_term(t, sign_of))))
}

fn resign_term(t: &Term, sign_of: &impl Fn(&str) -> Sign) -> Term {
    fn odd(t: &Term, sign_of: &impl Fn(&str) -> Sign) -> bool {
        match t {
            Term::Var(v) => sign_of(v) == Sign::Neg,
            Term::Const(_) => false,
            Term::Mul(a, b) => odd(a, sign_of) != odd(b, sign_of),
            Term::Inv(a) | Term::Neg(a) => odd(a, sign_of),
            Term::Pow(a, k) => k % 2 != 0 && odd(a, sign_of),
            _ => false,
        }
    }
    if !odd(t, sign_of) {
        return t.clone();
    }
    match t {
        Term::Mul(a, b) if a.as_const().is_some() => {
            Term::mul(Term::Const(-a.as_const().unwrap()), (**b).clone())
        }
        Term::Const(q) => Term::Const(-q),
        _ => Term::mul(Term::Const(-BigRational::one()), t.clone()),
    }
}
