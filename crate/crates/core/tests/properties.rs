//! Invariants of parsing, normalization and elimination over random inputs.

mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qelim::normalize::{
    expand_congruence_negations, remove_order_negations, to_dnf, to_nnf,
};
use qelim::oracle::{eval_qf, fuzz_equiv, random_formula, Assignment, GenConfig};
use qelim::syntax::{alpha_eq, check_signature};
use qelim::{
    decide, parse_formula, qe, render, substitute, Atom, Format, Formula, Term, TheoryId,
};

use common::parse;

fn random(theory: TheoryId, seed: u64, cfg: &GenConfig) -> Formula {
    random_formula(theory, cfg, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn theory_strategy() -> impl Strategy<Value = TheoryId> {
    prop::sample::select(TheoryId::ALL.to_vec())
}

#[test]
fn printing_round_trips() {
    for theory in TheoryId::ALL {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let f = random_formula(theory, &GenConfig::default(), &mut rng);
            let text = f.to_string();
            let back = parse_formula(&text, theory).unwrap_or_else(|e| panic!("{theory}: {text}: {e}"));
            assert!(alpha_eq(&f, &back), "{theory}: {text} reparsed as {back}");
            assert_eq!(back.to_string(), text);

            let json: serde_json::Value = serde_json::from_str(&render(&f, Format::Json)).unwrap();
            let ast: Formula = serde_json::from_value(json["ast"].clone()).unwrap();
            assert_eq!(ast, f);
            let reparsed = parse_formula(json["text"].as_str().unwrap(), theory).unwrap();
            assert!(alpha_eq(&reparsed, &f));
        }
    }
}

/// Which theories accept each probe, in the order of `TheoryId::ALL`.
#[test]
fn signatures_are_enforced() {
    let table: &[(&str, &[&str])] = &[
        ("x < y", &["dlo", "z-order", "n-order", "q-add", "r-add", "z-add", "n-add", "r-mul", "rpos-mul", "q-mul", "qpos-mul"]),
        ("s(x) < y", &["z-order", "n-order"]),
        ("0 < x", &["n-order", "q-add", "r-add", "z-add", "n-add", "r-mul", "q-mul"]),
        ("1 < x", &["q-add", "r-add", "z-add", "n-add", "r-mul", "rpos-mul", "q-mul", "qpos-mul"]),
        ("2 < x", &["q-add", "r-add", "z-add", "n-add", "r-mul", "rpos-mul", "q-mul", "qpos-mul"]),
        ("1/2 < x", &["q-add", "r-add", "r-mul", "rpos-mul", "q-mul", "qpos-mul"]),
        ("-2 < x", &["q-add", "r-add", "z-add", "r-mul", "q-mul"]),
        ("x + y < z", &["q-add", "r-add", "z-add", "n-add"]),
        ("x - y < z", &["q-add", "r-add", "z-add"]),
        ("-x < y", &["q-add", "r-add", "z-add", "r-mul", "q-mul"]),
        ("2 * x < y", &["q-add", "r-add", "z-add", "n-add", "r-mul", "rpos-mul", "q-mul", "qpos-mul"]),
        ("x * y < z", &["r-mul", "rpos-mul", "q-mul", "qpos-mul"]),
        ("inv(x) < y", &["r-mul", "rpos-mul", "q-mul", "qpos-mul"]),
        ("x^2 < y", &["r-mul", "rpos-mul", "q-mul", "qpos-mul"]),
        ("cong(x, y, 2)", &["z-add", "n-add"]),
        ("pow(2, x)", &["q-mul", "qpos-mul"]),
    ];
    for (probe, accepted) in table {
        for theory in TheoryId::ALL {
            let want = accepted.contains(&theory.as_str());
            let got = parse_formula(probe, theory);
            assert_eq!(got.is_ok(), want, "{theory}: `{probe}`: {got:?}");
        }
    }
}

#[test]
fn eliminations_stay_in_the_signature() {
    for theory in TheoryId::ALL {
        for seed in 0..200 {
            let f = random(theory, seed, &GenConfig::default());
            let g = qe(&f, theory).unwrap();
            assert!(g.is_quantifier_free());
            assert!(g.free_variables().is_subset(&f.free_variables()), "{theory}: {f} => {g}");
            // Over ℕ the output is phrased with the additive ℤ symbols it
            // was computed in.
            let out_theory = if theory == TheoryId::NAdd { TheoryId::ZAdd } else { theory };
            check_signature(&g, out_theory).unwrap_or_else(|e| panic!("{theory}: {f} => {g}: {e}"));
        }
    }
}

#[test]
fn decide_agrees_with_evaluating_the_elimination() {
    let cfg = GenConfig {
        max_free: 0,
        ..GenConfig::default()
    };
    for theory in TheoryId::ALL {
        for seed in 0..100 {
            let f = random(theory, seed, &cfg);
            let g = qe(&f, theory).unwrap();
            let v = eval_qf(&g, &Assignment::new(), theory).unwrap();
            assert_eq!(decide(&f, theory).unwrap(), v, "{theory}: {f}");
        }
    }
}

/// Scales both sides of every order atom: `k·a < k·b` additively,
/// `aᵏ < bᵏ` multiplicatively.
fn uniformize(f: &Formula, k: i64, multiplicative: bool) -> Formula {
    let lift = |t: &Term| {
        if multiplicative {
            Term::pow(t.clone(), k)
        } else {
            Term::scale(k, t.clone())
        }
    };
    match f {
        Formula::Atom(Atom::Lt(a, b)) => Formula::lt(lift(a), lift(b)),
        Formula::Atom(Atom::Eq(a, b)) => Formula::eq(lift(a), lift(b)),
        Formula::Not(g) => Formula::not(uniformize(g, k, multiplicative)),
        Formula::And(gs) => Formula::And(gs.iter().map(|g| uniformize(g, k, multiplicative)).collect()),
        Formula::Or(gs) => Formula::Or(gs.iter().map(|g| uniformize(g, k, multiplicative)).collect()),
        Formula::Implies(a, b) => Formula::implies(uniformize(a, k, multiplicative), uniformize(b, k, multiplicative)),
        Formula::Iff(a, b) => Formula::iff(uniformize(a, k, multiplicative), uniformize(b, k, multiplicative)),
        Formula::Exists(v, g) => Formula::exists(v, uniformize(g, k, multiplicative)),
        Formula::Forall(v, g) => Formula::forall(v, uniformize(g, k, multiplicative)),
        other => other.clone(),
    }
}

#[test]
fn scaling_atoms_does_not_change_the_elimination() {
    for (id, multiplicative) in [("z-add", false), ("q-add", false), ("rpos-mul", true), ("qpos-mul", true)] {
        let theory: TheoryId = id.parse().unwrap();
        for seed in 0..40 {
            let f = random(theory, seed, &GenConfig::default());
            let k = 2 + (seed % 3) as i64;
            let g1 = qe(&f, theory).unwrap();
            let g2 = qe(&uniformize(&f, k, multiplicative), theory).unwrap();
            let r = fuzz_equiv(&g1, &g2, theory, 20, seed).unwrap();
            assert!(r.passed(), "{theory}: {f} with k = {k}: {g1} vs {g2} at {:?}", r.fail);
        }
    }
}

#[test]
fn natural_relativization_decides_through_the_integers() {
    let f = parse("forall x. exists y. x < y", TheoryId::NAdd);
    assert!(decide(&f, TheoryId::NAdd).unwrap());
}

// Propositional structure ---------------------------------------------------

/// Quantifier-free formulas over the atoms `a{i} < b{i}`, `i < 6`.
fn prop_formula() -> impl Strategy<Value = Formula> {
    let leaf = (0..6usize).prop_map(|i| {
        Formula::lt(Term::var(&format!("a{i}")), Term::var(&format!("b{i}")))
    });
    leaf.prop_recursive(5, 40, 4, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Formula::And),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Formula::Or),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::iff(a, b)),
        ]
    })
}

fn truth(f: &Formula, v: &BTreeMap<Atom, bool>) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(a) => v[a],
        Formula::Not(g) => !truth(g, v),
        Formula::And(gs) => gs.iter().all(|g| truth(g, v)),
        Formula::Or(gs) => gs.iter().any(|g| truth(g, v)),
        Formula::Implies(a, b) => !truth(a, v) || truth(b, v),
        Formula::Iff(a, b) => truth(a, v) == truth(b, v),
        Formula::Exists(..) | Formula::Forall(..) => unreachable!("quantifier-free"),
    }
}

fn all_valuations() -> Vec<BTreeMap<Atom, bool>> {
    (0u32..64)
        .map(|bits| {
            (0..6)
                .map(|i| {
                    let a = Atom::Lt(Term::var(&format!("a{i}")), Term::var(&format!("b{i}")));
                    (a, bits >> i & 1 == 1)
                })
                .collect()
        })
        .collect()
}

fn has_negated_order_atom(f: &Formula) -> bool {
    match f {
        Formula::Not(g) => matches!(**g, Formula::Atom(Atom::Lt(..) | Atom::Eq(..))) || has_negated_order_atom(g),
        Formula::And(gs) | Formula::Or(gs) => gs.iter().any(has_negated_order_atom),
        Formula::Implies(a, b) | Formula::Iff(a, b) => has_negated_order_atom(a) || has_negated_order_atom(b),
        Formula::Exists(_, g) | Formula::Forall(_, g) => has_negated_order_atom(g),
        _ => false,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dnf_preserves_truth_tables(f in prop_formula()) {
        let clauses = to_dnf(&to_nnf(&f), 100_000, &|_| None).unwrap();
        for v in all_valuations() {
            let dnf = clauses.iter().any(|c| c.iter().all(|l| v[&l.atom] == l.positive));
            prop_assert_eq!(dnf, truth(&f, &v), "{}", f);
        }
    }

    #[test]
    fn nnf_preserves_truth_tables(f in prop_formula()) {
        let g = to_nnf(&f);
        for v in all_valuations() {
            prop_assert_eq!(truth(&g, &v), truth(&f, &v));
        }
    }

    #[test]
    fn rewrites_keep_free_variables(theory in theory_strategy(), seed in any::<u64>()) {
        let f = random(theory, seed, &GenConfig::default());
        let n = to_nnf(&f);
        let r = remove_order_negations(&n, theory);
        let c = expand_congruence_negations(&r);
        prop_assert!(!has_negated_order_atom(&r), "{}", r);
        for g in [&n, &r, &c] {
            prop_assert_eq!(g.free_variables(), f.free_variables());
        }
    }

    #[test]
    fn substituting_a_variable_for_itself_is_identity(theory in theory_strategy(), seed in any::<u64>()) {
        let f = random(theory, seed, &GenConfig::default());
        for v in f.free_variables() {
            prop_assert_eq!(&substitute(&f, &v, &Term::var(&v)), &f);
        }
    }

    #[test]
    fn evaluation_is_deterministic(theory in theory_strategy(), seed in any::<u64>()) {
        let f = random(theory, seed, &GenConfig { max_free: 0, ..GenConfig::default() });
        let g = qe(&f, theory).unwrap();
        let a = Assignment::new();
        prop_assert_eq!(eval_qf(&g, &a, theory).unwrap(), eval_qf(&g, &a, theory).unwrap());
    }
}
