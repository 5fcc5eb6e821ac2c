use std::fmt;

use num_traits::Zero;

use crate::syntax::{Atom, Term};

/// `sᵏ(v)`, or `sᵏ(0)` when `base` is `None`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ShiftTerm {
    pub base: Option<String>,
    pub shift: u64,
}

impl ShiftTerm {
    pub fn var(v: &str, shift: u64) -> ShiftTerm {
        ShiftTerm {
            base: Some(v.to_string()),
            shift,
        }
    }

    pub fn zero(shift: u64) -> ShiftTerm {
        ShiftTerm { base: None, shift }
    }

    pub fn from_term(t: &Term) -> Option<ShiftTerm> {
        match t {
            Term::Var(v) => Some(ShiftTerm::var(v, 0)),
            Term::Const(q) if q.is_zero() => Some(ShiftTerm::zero(0)),
            Term::Succ(inner) => {
                let mut s = ShiftTerm::from_term(inner)?;
                s.shift += 1;
                Some(s)
            }
            _ => None,
        }
    }

    pub fn to_term(&self) -> Term {
        let base = match &self.base {
            Some(v) => Term::var(v),
            None => Term::zero(),
        };
        Term::shift(base, self.shift)
    }

    pub fn is_var(&self, x: &str) -> bool {
        self.base.as_deref() == Some(x)
    }

    pub fn shifted(&self, k: u64) -> ShiftTerm {
        ShiftTerm {
            base: self.base.clone(),
            shift: self.shift + k,
        }
    }
}

impl fmt::Display for ShiftTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_term())
    }
}

/// `lhs < rhs` or `lhs = rhs` over shift terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ShiftAtom {
    pub lhs: ShiftTerm,
    pub rhs: ShiftTerm,
    pub strict: bool,
}

impl ShiftAtom {
    pub fn from_atom(a: &Atom) -> Option<ShiftAtom> {
        match a {
            Atom::Lt(l, r) => Some(ShiftAtom {
                lhs: ShiftTerm::from_term(l)?,
                rhs: ShiftTerm::from_term(r)?,
                strict: true,
            }),
            Atom::Eq(l, r) => Some(ShiftAtom {
                lhs: ShiftTerm::from_term(l)?,
                rhs: ShiftTerm::from_term(r)?,
                strict: false,
            }),
            _ => None,
        }
    }

    /// Canonical form: common shifts stripped, equalities oriented, atoms
    /// between identical bases decided. `naturals` adds the facts that
    /// nothing is below `0` and `s(v) ≠ 0`.
    pub fn canonical(&self, naturals: bool) -> Result<ShiftAtom, bool> {
        let m = self.lhs.shift.min(self.rhs.shift);
        let mut lhs = ShiftTerm {
            base: self.lhs.base.clone(),
            shift: self.lhs.shift - m,
        };
        let mut rhs = ShiftTerm {
            base: self.rhs.base.clone(),
            shift: self.rhs.shift - m,
        };
        if lhs.base == rhs.base {
            return Err(if self.strict {
                lhs.shift < rhs.shift
            } else {
                lhs.shift == rhs.shift
            });
        }
        if naturals {
            // Every element is ≥ 0, and sᵏ(v) ≥ k.
            if self.strict {
                if rhs.base.is_none() && rhs.shift <= lhs.shift {
                    return Err(false);
                }
                if lhs.base.is_none() && lhs.shift < rhs.shift {
                    return Err(true);
                }
            } else if (lhs.base.is_none() && lhs.shift < rhs.shift)
                || (rhs.base.is_none() && rhs.shift < lhs.shift)
            {
                return Err(false);
            }
        }
        if !self.strict && rhs < lhs {
            std::mem::swap(&mut lhs, &mut rhs);
        }
        Ok(ShiftAtom {
            lhs,
            rhs,
            strict: self.strict,
        })
    }

    pub fn to_atom(&self) -> Atom {
        if self.strict {
            Atom::Lt(self.lhs.to_term(), self.rhs.to_term())
        } else {
            Atom::Eq(self.lhs.to_term(), self.rhs.to_term())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strips_common_shift() {
        let a = ShiftAtom {
            lhs: ShiftTerm::zero(1),
            rhs: ShiftTerm::var("y", 1),
            strict: true,
        };
        let c = a.canonical(true).unwrap();
        assert_eq!(c.to_atom(), Atom::Lt(Term::zero(), Term::var("y")));
    }

    #[test]
    fn same_base_folds() {
        let a = ShiftAtom {
            lhs: ShiftTerm::var("x", 2),
            rhs: ShiftTerm::var("x", 3),
            strict: true,
        };
        assert_eq!(a.canonical(false), Err(true));
        let b = ShiftAtom { strict: false, ..a };
        assert_eq!(b.canonical(false), Err(false));
    }

    #[test]
    fn naturals_facts() {
        let below_zero = ShiftAtom {
            lhs: ShiftTerm::var("v", 0),
            rhs: ShiftTerm::zero(0),
            strict: true,
        };
        assert_eq!(below_zero.canonical(true), Err(false));
        assert!(below_zero.canonical(false).is_ok());
        let succ_zero = ShiftAtom {
            lhs: ShiftTerm::var("v", 1),
            rhs: ShiftTerm::zero(0),
            strict: false,
        };
        assert_eq!(succ_zero.canonical(true), Err(false));
        let positive = ShiftAtom {
            lhs: ShiftTerm::zero(0),
            rhs: ShiftTerm::var("v", 1),
            strict: true,
        };
        assert_eq!(positive.canonical(true), Err(true));
    }
}
