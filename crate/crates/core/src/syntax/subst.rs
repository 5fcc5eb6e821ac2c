use std::collections::BTreeSet;

use super::ast::{Formula, Term};

/// `base_k` for the least `k ≥ 1` not in `used`.
pub fn fresh_name(base: &str, used: &BTreeSet<String>) -> String {
    // Strip an existing counter so renaming `x_1` gives `x_2`, not `x_1_1`.
    let stem = match base.rsplit_once('_') {
        Some((s, k)) if !s.is_empty() && !k.is_empty() && k.bytes().all(|b| b.is_ascii_digit()) => s,
        _ => base,
    };
    (1..)
        .map(|k| format!("{stem}_{k}"))
        .find(|n| !used.contains(n))
        .unwrap()
}

/// Capture-avoiding substitution of `t` for the free occurrences of `v`.
pub fn substitute(f: &Formula, v: &str, t: &Term) -> Formula {
    let tvars = t.vars();
    let mut used = f.all_names();
    used.extend(tvars.iter().cloned());
    used.insert(v.to_string());
    subst(f, v, t, &tvars, &mut used)
}

fn subst(f: &Formula, v: &str, t: &Term, tvars: &BTreeSet<String>, used: &mut BTreeSet<String>) -> Formula {
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(a) => Formula::Atom(a.map_terms(&|s| {
            s.map_vars(&|w| if w == v { t.clone() } else { Term::var(w) })
        })),
        Formula::Not(g) => Formula::not(subst(g, v, t, tvars, used)),
        Formula::And(gs) => Formula::And(gs.iter().map(|g| subst(g, v, t, tvars, used)).collect()),
        Formula::Or(gs) => Formula::Or(gs.iter().map(|g| subst(g, v, t, tvars, used)).collect()),
        Formula::Implies(a, b) => {
            let a = subst(a, v, t, tvars, used);
            Formula::implies(a, subst(b, v, t, tvars, used))
        }
        Formula::Iff(a, b) => {
            let a = subst(a, v, t, tvars, used);
            Formula::iff(a, subst(b, v, t, tvars, used))
        }
        Formula::Exists(w, g) | Formula::Forall(w, g) => {
            let rebuild = |w: String, body: Formula| {
                if matches!(f, Formula::Exists(..)) {
                    Formula::Exists(w, Box::new(body))
                } else {
                    Formula::Forall(w, Box::new(body))
                }
            };
            if w == v || !g.free_variables().contains(v) {
                return f.clone();
            }
            if tvars.contains(w) {
                let fresh = fresh_name(w, used);
                used.insert(fresh.clone());
                let renamed = subst(g, w, &Term::var(&fresh), &BTreeSet::from([fresh.clone()]), used);
                return rebuild(fresh, subst(&renamed, v, t, tvars, used));
            }
            rebuild(w.clone(), subst(g, v, t, tvars, used))
        }
    }
}

/// Structural equality up to renaming of bound variables.
pub fn alpha_eq(f: &Formula, g: &Formula) -> bool {
    eq(f, g, &mut Vec::new())
}

fn eq(f: &Formula, g: &Formula, env: &mut Vec<(String, String)>) -> bool {
    match (f, g) {
        (Formula::True, Formula::True) | (Formula::False, Formula::False) => true,
        (Formula::Atom(a), Formula::Atom(b)) => {
            // Bound names become `#depth`, which no parsed variable can be.
            let ren = |t: &Term, left: bool| {
                t.map_vars(&|v| {
                    env.iter()
                        .rposition(|(l, r)| if left { l == v } else { r == v })
                        .map(|i| Term::Var(format!("#{i}")))
                        .unwrap_or_else(|| Term::var(v))
                })
            };
            a.map_terms(&|t| ren(t, true)) == b.map_terms(&|t| ren(t, false))
        }
        (Formula::Not(a), Formula::Not(b)) => eq(a, b, env),
        (Formula::And(xs), Formula::And(ys)) | (Formula::Or(xs), Formula::Or(ys)) => {
            xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| eq(x, y, env))
        }
        (Formula::Implies(a, b), Formula::Implies(c, d)) | (Formula::Iff(a, b), Formula::Iff(c, d)) => {
            eq(a, c, env) && eq(b, d, env)
        }
        (Formula::Exists(v, a), Formula::Exists(w, b)) | (Formula::Forall(v, a), Formula::Forall(w, b)) => {
            env.push((v.clone(), w.clone()));
            let r = eq(a, b, env);
            env.pop();
            r
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;
    use crate::theory::TheoryId;

    fn p(s: &str) -> Formula {
        parse_formula(s, TheoryId::Dlo).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(substitute(&p("y < x"), "x", &Term::var("u0")), p("y < u0"));
        let f = p("exists x. y < x");
        assert_eq!(substitute(&f, "x", &Term::var("z")), f);
        let g = substitute(&p("exists z. y < z"), "y", &Term::var("z"));
        assert_eq!(g, p("exists z_1. z < z_1"));
    }

    #[test]
    fn identity_substitution() {
        let f = p("exists x. y < x & (forall z. z < y | y = x)");
        assert_eq!(substitute(&f, "y", &Term::var("y")), f);
    }

    #[test]
    fn alpha() {
        assert!(alpha_eq(&p("exists x. x < y"), &p("exists z. z < y")));
        assert!(!alpha_eq(&p("exists x. x < y"), &p("exists y. y < y")));
        assert!(!alpha_eq(&p("exists x. x < y"), &p("exists z. y < z")));
        assert!(alpha_eq(
            &p("forall a. exists b. a < b"),
            &p("forall b. exists a. b < a")
        ));
    }
}
