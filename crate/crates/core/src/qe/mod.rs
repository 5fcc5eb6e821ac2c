//! The elimination loop and its per-theory engines.
//!
//! Quantifiers are removed innermost first. `∀x φ` is handled as
//! `¬∃x ¬φ`. For each `∃x`, the quantifier-free body is put in negation
//! normal form, negated order atoms are replaced using totality, the body
//! is expanded to DNF, and `∃x` is distributed over the disjuncts. Each
//! conjunction is split into the literals that mention `x`, handed to the
//! theory's engine, and the rest, which are kept as they are.

mod additive;
mod bare;
mod multiplicative;
mod order;

pub use bare::{qe_bare, BareStructure};

use crate::error::{Error, Result};
use crate::normalize::{
    decide_trivially, expand_congruence_negations, remove_order_negations, prune, simplify,
    to_dnf_pruned, to_nnf, Literal, DEFAULT_DNF_LIMIT,
};
use crate::syntax::{check_signature, Formula, Term};
use crate::theory::TheoryId;

#[derive(Clone, Debug)]
pub struct QeOptions {
    /// Upper bound on the literals of any intermediate DNF.
    pub dnf_limit: usize,
}

impl Default for QeOptions {
    fn default() -> Self {
        QeOptions {
            dnf_limit: DEFAULT_DNF_LIMIT,
        }
    }
}

/// Quantifier-free equivalent of `f` over `theory`.
pub fn qe(f: &Formula, theory: TheoryId) -> Result<Formula> {
    qe_with(f, theory, &QeOptions::default())
}

pub fn qe_with(f: &Formula, theory: TheoryId, opts: &QeOptions) -> Result<Formula> {
    check_signature(f, theory)?;
    if theory == TheoryId::NAdd {
        return qe_with(&relativize_to_naturals(f), TheoryId::ZAdd, opts);
    }
    let out = elim(f, theory, opts)?;
    Ok(simplify(&out, theory))
}

/// Truth value of a sentence.
pub fn decide(f: &Formula, theory: TheoryId) -> Result<bool> {
    decide_with(f, theory, &QeOptions::default())
}

pub fn decide_with(f: &Formula, theory: TheoryId, opts: &QeOptions) -> Result<bool> {
    let free = f.free_variables();
    if !free.is_empty() {
        return Err(Error::NotASentence(
            free.into_iter().collect::<Vec<_>>().join(", "),
        ));
    }
    match qe_with(f, theory, opts)? {
        Formula::True => Ok(true),
        Formula::False => Ok(false),
        other => Err(Error::Unsupported(format!(
            "ground residue did not fold: {other}"
        ))),
    }
}

pub fn qe_dlo(f: &Formula) -> Result<Formula> {
    qe(f, TheoryId::Dlo)
}

pub fn qe_z_succ(f: &Formula) -> Result<Formula> {
    qe(f, TheoryId::ZOrder)
}

pub fn qe_n_succ(f: &Formula) -> Result<Formula> {
    qe(f, TheoryId::NOrder)
}

/// Divisible ordered abelian groups; `q-add` and `r-add` share the engine.
pub fn qe_doag(f: &Formula) -> Result<Formula> {
    qe(f, TheoryId::QAdd)
}

pub fn qe_presburger(f: &Formula) -> Result<Formula> {
    qe(f, TheoryId::ZAdd)
}

pub fn qe_pos_real_mul(f: &Formula) -> Result<Formula> {
    qe(f, TheoryId::RPosMul)
}

pub fn qe_real_mul(f: &Formula) -> Result<Formula> {
    qe(f, TheoryId::RMul)
}

pub fn qe_pos_rat_mul(f: &Formula) -> Result<Formula> {
    qe(f, TheoryId::QPosMul)
}

pub fn qe_rat_mul(f: &Formula) -> Result<Formula> {
    qe(f, TheoryId::QMul)
}

/// Guards every quantifier with `0 ≤ x`, turning a formula about ℕ into
/// one about ℤ.
pub fn relativize_to_naturals(f: &Formula) -> Formula {
    let guard = |v: &str| Formula::le(Term::zero(), Term::var(v));
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => f.clone(),
        Formula::Not(g) => Formula::not(relativize_to_naturals(g)),
        Formula::And(gs) => Formula::And(gs.iter().map(relativize_to_naturals).collect()),
        Formula::Or(gs) => Formula::Or(gs.iter().map(relativize_to_naturals).collect()),
        Formula::Implies(a, b) => {
            Formula::implies(relativize_to_naturals(a), relativize_to_naturals(b))
        }
        Formula::Iff(a, b) => Formula::iff(relativize_to_naturals(a), relativize_to_naturals(b)),
        Formula::Exists(v, g) => Formula::exists(
            v,
            Formula::And(vec![guard(v), relativize_to_naturals(g)]),
        ),
        Formula::Forall(v, g) => {
            Formula::forall(v, Formula::implies(guard(v), relativize_to_naturals(g)))
        }
    }
}

fn elim(f: &Formula, theory: TheoryId, opts: &QeOptions) -> Result<Formula> {
    Ok(match f {
        Formula::True | Formula::False | Formula::Atom(_) => f.clone(),
        Formula::Not(g) => Formula::not(elim(g, theory, opts)?),
        Formula::And(gs) => Formula::And(
            gs.iter()
                .map(|g| elim(g, theory, opts))
                .collect::<Result<_>>()?,
        ),
        Formula::Or(gs) => Formula::Or(
            gs.iter()
                .map(|g| elim(g, theory, opts))
                .collect::<Result<_>>()?,
        ),
        Formula::Implies(a, b) => Formula::implies(elim(a, theory, opts)?, elim(b, theory, opts)?),
        Formula::Iff(a, b) => Formula::iff(elim(a, theory, opts)?, elim(b, theory, opts)?),
        Formula::Exists(x, g) => {
            let body = elim(g, theory, opts)?;
            eliminate_exists(x, &body, theory, opts)?
        }
        Formula::Forall(x, g) => {
            let body = elim(g, theory, opts)?;
            let inner = eliminate_exists(x, &Formula::not(body), theory, opts)?;
            simplify(&Formula::not(inner), theory)
        }
    })
}

/// Removes `∃x` in front of a quantifier-free `body`.
pub fn eliminate_exists(
    x: &str,
    body: &Formula,
    theory: TheoryId,
    opts: &QeOptions,
) -> Result<Formula> {
    let body = simplify(body, theory);
    if !body.free_variables().contains(x) {
        return Ok(body);
    }
    let mut g = remove_order_negations(&to_nnf(&body), theory);
    if theory == TheoryId::ZAdd {
        g = expand_congruence_negations(&g);
    }
    let clauses = to_dnf_pruned(
        &g,
        opts.dnf_limit,
        &|a| decide_trivially(a, theory),
        theory,
    )?;
    let mut disjuncts = Vec::with_capacity(clauses.len());
    for clause in clauses {
        let (with_x, rest): (Vec<Literal>, Vec<Literal>) =
            clause.into_iter().partition(|l| l.atom.mentions(x));
        let eliminated = if with_x.is_empty() {
            Formula::True
        } else {
            engine(x, &with_x, theory, opts)?
        };
        disjuncts.push(Formula::and_all(
            rest.iter().map(Literal::to_formula).chain([eliminated]),
        ));
    }
    let out = simplify(&Formula::or_all(disjuncts), theory);
    Ok(simplify(&prune(&out, theory), theory))
}

fn engine(x: &str, lits: &[Literal], theory: TheoryId, opts: &QeOptions) -> Result<Formula> {
    let _ = opts;
    match theory {
        TheoryId::Dlo | TheoryId::ZOrder | TheoryId::NOrder => order::eliminate(x, lits, theory),
        TheoryId::QAdd | TheoryId::RAdd => additive::eliminate_doag(x, lits),
        TheoryId::ZAdd => additive::eliminate_presburger(x, lits),
        TheoryId::NAdd => unreachable!("n-add is relativized before elimination"),
        TheoryId::RPosMul => multiplicative::eliminate_positive(x, lits, false),
        TheoryId::QPosMul => multiplicative::eliminate_positive(x, lits, true),
        TheoryId::RMul => multiplicative::eliminate_signed(x, lits, false),
        TheoryId::QMul => multiplicative::eliminate_signed(x, lits, true),
    }
}

fn unsupported(what: &str, lit: &Literal) -> Error {
    Error::Unsupported(format!("{what}: cannot read literal `{}`", lit.to_formula()))
}
