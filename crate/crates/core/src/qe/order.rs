//! Dense orders, `⟨ℤ;<,s⟩` and `⟨ℕ;<,s,0⟩`.
//!
//! Every literal is shifted until `x` occurs as `y = sᴺ(x)` for a common
//! `N`; since `s` is an order embedding, `a < b ↔ s(a) < s(b)`. Over ℤ the
//! map `x ↦ sᴺ(x)` is onto, over ℕ its image is `{y : sᴺ(0) ≤ y}`, which
//! is added as an explicit lower bound.

use crate::error::Result;
use crate::normalize::{Literal, ShiftAtom, ShiftTerm};
use crate::syntax::{Atom, Formula};
use crate::theory::TheoryId;

use super::unsupported;

pub(super) fn eliminate(x: &str, lits: &[Literal], theory: TheoryId) -> Result<Formula> {
    let naturals = theory == TheoryId::NOrder;
    let discrete = theory.is_discrete();

    // (x side shift, relation, other side); `x_left` says which side x is on.
    let mut facts: Vec<(u64, bool, bool, ShiftTerm)> = Vec::new();
    for lit in lits {
        if !lit.positive {
            return Err(unsupported("order engine expects positive literals", lit));
        }
        let atom = ShiftAtom::from_atom(&lit.atom)
            .ok_or_else(|| unsupported("not an order atom", lit))?;
        let atom = match atom.canonical(naturals) {
            Ok(a) => a,
            Err(true) => continue,
            Err(false) => return Ok(Formula::False),
        };
        if atom.lhs.is_var(x) {
            facts.push((atom.lhs.shift, true, atom.strict, atom.rhs));
        } else {
            facts.push((atom.rhs.shift, false, atom.strict, atom.lhs));
        }
    }
    let n = facts.iter().map(|f| f.0).max().unwrap_or(0);

    let mut lowers = Vec::new();
    let mut uppers = Vec::new();
    let mut eqs = Vec::new();
    for (k, x_left, strict, t) in facts {
        let t = t.shifted(n - k);
        match (strict, x_left) {
            (false, _) => eqs.push(t),
            (true, true) => uppers.push(t),
            (true, false) => lowers.push(t),
        }
    }
    let lt = |a: &ShiftTerm, b: &ShiftTerm| Formula::Atom(Atom::Lt(a.to_term(), b.to_term()));
    let eq = |a: &ShiftTerm, b: &ShiftTerm| Formula::Atom(Atom::Eq(a.to_term(), b.to_term()));
    // sᴺ(0) ≤ y, written strictly as sᴺ(0) < s(y).
    let floor = ShiftTerm::zero(n);

    if let Some((e, rest)) = eqs.split_first() {
        let mut out = Vec::new();
        out.extend(lowers.iter().map(|l| lt(l, e)));
        out.extend(uppers.iter().map(|u| lt(e, u)));
        out.extend(rest.iter().map(|e2| eq(e, e2)));
        if naturals {
            out.push(lt(&floor, &e.shifted(1)));
        }
        return Ok(Formula::and_all(out));
    }
    if uppers.is_empty() || (lowers.is_empty() && !naturals) {
        return Ok(Formula::True);
    }
    let mut out = Vec::new();
    for u in &uppers {
        for l in &lowers {
            out.push(if discrete { lt(&l.shifted(1), u) } else { lt(l, u) });
        }
        if naturals {
            out.push(lt(&floor, u));
        }
    }
    Ok(Formula::and_all(out))
}
