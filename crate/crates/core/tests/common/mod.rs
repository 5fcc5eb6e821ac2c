//! Helpers shared by the integration tests.
#![allow(dead_code)]

use qelim::oracle::{fuzz_equiv, random_formula, GenConfig, Report};
use qelim::{parse_formula, qe, Formula, TheoryId};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn parse(text: &str, theory: TheoryId) -> Formula {
    parse_formula(text, theory).unwrap_or_else(|e| panic!("{text}: {e}"))
}

/// Sorts the children of every `&`/`|` by their rendering and unwraps
/// single-child connectives, so formulas differing only in literal order
/// compare equal.
pub fn canon(f: &Formula) -> Formula {
    let sorted = |fs: &[Formula]| {
        let mut v: Vec<Formula> = fs.iter().map(canon).collect();
        v.sort_by_key(|g| g.to_string());
        v
    };
    match f {
        Formula::And(fs) | Formula::Or(fs) if fs.len() == 1 => canon(&fs[0]),
        Formula::And(fs) => Formula::And(sorted(fs)),
        Formula::Or(fs) => Formula::Or(sorted(fs)),
        Formula::Not(g) => Formula::Not(Box::new(canon(g))),
        Formula::Implies(a, b) => Formula::Implies(Box::new(canon(a)), Box::new(canon(b))),
        Formula::Iff(a, b) => Formula::Iff(Box::new(canon(a)), Box::new(canon(b))),
        Formula::Exists(v, g) => Formula::Exists(v.clone(), Box::new(canon(g))),
        Formula::Forall(v, g) => Formula::Forall(v.clone(), Box::new(canon(g))),
        other => other.clone(),
    }
}

pub struct Outcome {
    pub formulas: usize,
    pub report: Report,
    pub failures: Vec<(Formula, Formula)>,
}

impl Outcome {
    pub fn inconclusive_rate(&self) -> f64 {
        self.report.inconclusive as f64 / self.report.samples.max(1) as f64
    }
}

/// Eliminates `formulas` random formulas and compares each with its
/// elimination on `samples` assignments.
pub fn soundness_run(theory: TheoryId, formulas: usize, samples: usize, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = GenConfig::default();
    let mut total = Report::default();
    let mut failures = Vec::new();
    for i in 0..formulas {
        let f = random_formula(theory, &cfg, &mut rng);
        let g = qe(&f, theory).unwrap_or_else(|e| panic!("{theory}: {f}: {e}"));
        assert!(g.is_quantifier_free(), "{theory}: {f} => {g}");
        let r = fuzz_equiv(&f, &g, theory, samples, seed ^ i as u64)
            .unwrap_or_else(|e| panic!("{theory}: {f}: {e}"));
        if !r.passed() {
            failures.push((f, g));
        }
        total.merge(&r);
    }
    Outcome {
        formulas,
        report: total,
        failures,
    }
}

/// One corpus line: `theory | expected | sentence | note`. The sentence may
/// itself contain ` | `.
pub struct CorpusEntry {
    pub theory: TheoryId,
    pub expected: bool,
    pub sentence: String,
    pub note: String,
}

pub fn corpus() -> Vec<CorpusEntry> {
    include_str!("../data/corpus.txt")
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let (theory, rest) = l.split_once(" | ").expect("theory field");
            let (expected, rest) = rest.split_once(" | ").expect("expected field");
            let (sentence, note) = rest.rsplit_once(" | ").expect("note field");
            CorpusEntry {
                theory: theory.parse().expect("theory id"),
                expected: expected.parse().expect("true or false"),
                sentence: sentence.to_string(),
                note: note.to_string(),
            }
        })
        .collect()
}
