use crate::error::{Error, Result};
use crate::syntax::{Atom, Formula};
use crate::theory::TheoryId;

use super::consistency::{drop_subsumed, plausibly_consistent};

pub const DEFAULT_DNF_LIMIT: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub atom: Atom,
    pub positive: bool,
}

impl Literal {
    pub fn pos(atom: Atom) -> Literal {
        Literal {
            atom,
            positive: true,
        }
    }

    pub fn to_formula(&self) -> Formula {
        let a = Formula::Atom(self.atom.clone());
        if self.positive {
            a
        } else {
            Formula::not(a)
        }
    }
}

pub type Clause = Vec<Literal>;

/// Disjunctive normal form of a quantifier-free NNF formula.
///
/// Ground atoms are folded through `fold` before distributing. Clauses
/// containing a literal and its negation are dropped, duplicate literals
/// and clauses are removed. Fails once the total literal count of any
/// intermediate result exceeds `limit`.
pub fn to_dnf(f: &Formula, limit: usize, fold: &impl Fn(&Atom) -> Option<bool>) -> Result<Vec<Clause>> {
    dnf(f, limit, fold, &|cs: Vec<Clause>| cs)
}

/// Like [`to_dnf`], but drops intermediate clauses that clash or are
/// implied by a sibling clause in `theory`.
pub fn to_dnf_pruned(
    f: &Formula,
    limit: usize,
    fold: &impl Fn(&Atom) -> Option<bool>,
    theory: TheoryId,
) -> Result<Vec<Clause>> {
    dnf(f, limit, fold, &|cs: Vec<Clause>| {
        let cs: Vec<Clause> = cs.into_iter().filter(|c| plausibly_consistent(c, theory)).collect();
        if cs.len() <= SUBSUMPTION_MAX {
            drop_subsumed(cs, theory)
        } else {
            cs
        }
    })
}

/// Above this many clauses the quadratic subsumption pass is skipped.
const SUBSUMPTION_MAX: usize = 2000;

fn count(cs: &[Clause]) -> usize {
    cs.iter().map(|c| c.len().max(1)).sum()
}

fn dnf(
    f: &Formula,
    limit: usize,
    fold: &impl Fn(&Atom) -> Option<bool>,
    reduce: &impl Fn(Vec<Clause>) -> Vec<Clause>,
) -> Result<Vec<Clause>> {
    let lit = |atom: &Atom, positive: bool| -> Vec<Clause> {
        match fold(atom) {
            Some(b) if b == positive => vec![vec![]],
            Some(_) => vec![],
            None => vec![vec![Literal {
                atom: atom.clone(),
                positive,
            }]],
        }
    };
    let out = match f {
        Formula::True => vec![vec![]],
        Formula::False => vec![],
        Formula::Atom(a) => lit(a, true),
        Formula::Not(g) => match g.as_ref() {
            Formula::Atom(a) => lit(a, false),
            Formula::True => vec![],
            Formula::False => vec![vec![]],
            _ => panic!("to_dnf expects negation normal form"),
        },
        Formula::Or(gs) => {
            let mut acc = Vec::new();
            for g in gs {
                acc.extend(dnf(g, limit, fold, reduce)?);
                if count(&acc) > limit {
                    return Err(Error::DnfBlowup { limit });
                }
            }
            acc
        }
        Formula::And(gs) => {
            let mut acc: Vec<Clause> = vec![vec![]];
            for g in gs {
                let rhs = dnf(g, limit, fold, reduce)?;
                let mut next = Vec::with_capacity(acc.len() * rhs.len());
                for a in &acc {
                    for b in &rhs {
                        if let Some(c) = join(a, b) {
                            next.push(c);
                        }
                    }
                    if count(&next) > limit {
                        next = reduce(next);
                        if count(&next) > limit {
                            return Err(Error::DnfBlowup { limit });
                        }
                    }
                }
                next.sort();
                next.dedup();
                acc = reduce(next);
                if acc.is_empty() {
                    break;
                }
            }
            acc
        }
        _ => panic!("to_dnf expects a quantifier-free formula without -> or <->"),
    };
    let mut out = out;
    out.sort();
    out.dedup();
    let out = reduce(out);
    if count(&out) > limit {
        return Err(Error::DnfBlowup { limit });
    }
    Ok(out)
}

fn join(a: &Clause, b: &Clause) -> Option<Clause> {
    let mut c = a.clone();
    for l in b {
        if c.iter().any(|m| m.atom == l.atom && m.positive != l.positive) {
            return None;
        }
        if !c.contains(l) {
            c.push(l.clone());
        }
    }
    c.sort();
    Some(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normalize::decide_trivially;
    use crate::syntax::parse_formula;
    use crate::theory::TheoryId;
    use std::collections::BTreeSet;

    fn no_fold(_: &Atom) -> Option<bool> {
        None
    }

    fn atoms(s: &str) -> Vec<Atom> {
        parse_formula(s, TheoryId::Dlo)
            .unwrap()
            .atoms()
            .into_iter()
            .cloned()
            .collect()
    }

    #[test]
    fn distribution() {
        let f = parse_formula("(a < b | b < c) & c < d", TheoryId::Dlo).unwrap();
        let d = to_dnf(&f, 100, &no_fold).unwrap();
        let at = atoms("a < b & b < c & c < d");
        let expect: BTreeSet<Clause> = [
            vec![Literal::pos(at[0].clone()), Literal::pos(at[2].clone())],
            vec![Literal::pos(at[1].clone()), Literal::pos(at[2].clone())],
        ]
        .into_iter()
        .map(|mut c| {
            c.sort();
            c
        })
        .collect();
        assert_eq!(d.into_iter().collect::<BTreeSet<_>>(), expect);
    }

    #[test]
    fn folding() {
        let f = parse_formula("a < b & true", TheoryId::Dlo).unwrap();
        assert_eq!(to_dnf(&f, 100, &no_fold).unwrap().len(), 1);
        let g = parse_formula("x < x", TheoryId::Dlo).unwrap();
        let fold = |a: &Atom| decide_trivially(a, TheoryId::Dlo);
        assert!(to_dnf(&g, 100, &fold).unwrap().is_empty());
    }

    #[test]
    fn blowup() {
        let parts: Vec<String> = (0..12).map(|i| format!("(a{i} < b | b < a{i})")).collect();
        let f = parse_formula(&parts.join(" & "), TheoryId::Dlo).unwrap();
        assert_eq!(to_dnf(&f, 1000, &no_fold), Err(Error::DnfBlowup { limit: 1000 }));
    }
}
