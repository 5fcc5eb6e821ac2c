//! Equivalence fuzzing between a formula and a candidate equivalent.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use num_rational::BigRational;

use crate::error::Result;
use crate::syntax::Formula;
use crate::theory::{Domain, TheoryId};

use super::eval::{eval_bounded, eval_qf, Assignment, EvalVerdict, SearchBudget};
use super::value::{PowerProduct, Value};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub samples: usize,
    pub agree: usize,
    /// Assignments on which both sides were definite and differed.
    pub fail: Vec<Assignment>,
    pub inconclusive: usize,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.fail.is_empty()
    }

    pub fn merge(&mut self, o: &Report) {
        self.samples += o.samples;
        self.agree += o.agree;
        self.fail.extend(o.fail.iter().cloned());
        self.inconclusive += o.inconclusive;
    }
}

/// A random element of the sampling grid of `theory`.
pub fn sample_value(theory: TheoryId, budget: &SearchBudget, rng: &mut impl Rng) -> Value {
    let r = budget.int_range;
    match theory.domain() {
        Domain::Integers => Value::int(rng.gen_range(-r..=r)),
        Domain::Naturals => Value::int(rng.gen_range(0..=r)),
        Domain::Rationals => {
            let m = budget.max_num as i64;
            let n = rng.gen_range(-m..=m);
            let d = if rng.gen_bool(0.3) {
                1
            } else {
                rng.gen_range(1..=budget.max_den as i64)
            };
            Value::Rat(BigRational::new(n.into(), d.into()))
        }
        dom => {
            let signed = matches!(dom, Domain::Reals | Domain::SignedRationals);
            if signed && rng.gen_bool(0.125) {
                return Value::Mul(PowerProduct::zero());
            }
            let real = matches!(dom, Domain::Reals | Domain::PosReals);
            let exps: Vec<(u64, BigRational)> = budget
                .primes
                .iter()
                .map(|p| {
                    let e = if rng.gen_bool(0.5) {
                        0
                    } else {
                        rng.gen_range(-budget.max_exp..=budget.max_exp)
                    };
                    let d = if real && rng.gen_bool(0.15) { 2 } else { 1 };
                    (*p, BigRational::new(e.into(), d.into()))
                })
                .collect();
            let sign = if signed && rng.gen_bool(0.5) { -1 } else { 1 };
            Value::Mul(PowerProduct::new(sign, exps))
        }
    }
}

/// Samples `samples` assignments and compares `f` (searched) with `g`.
pub fn fuzz_equiv(
    f: &Formula,
    g: &Formula,
    theory: TheoryId,
    samples: usize,
    seed: u64,
) -> Result<Report> {
    fuzz_equiv_with(f, g, theory, samples, seed, &SearchBudget::default())
}

pub fn fuzz_equiv_with(
    f: &Formula,
    g: &Formula,
    theory: TheoryId,
    samples: usize,
    seed: u64,
    budget: &SearchBudget,
) -> Result<Report> {
    let mut vars = f.free_variables();
    vars.extend(g.free_variables());
    // Assignments are drawn up front so that the parallel evaluation sees
    // exactly the sequence a sequential run would.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let assignments: Vec<Assignment> = (0..samples)
        .map(|_| {
            vars.iter()
                .map(|v| (v.clone(), sample_value(theory, budget, &mut rng)))
                .collect()
        })
        .collect();
    let verdicts: Vec<(EvalVerdict, EvalVerdict)> = assignments
        .par_iter()
        .map(|a| -> Result<_> {
            let left = eval_bounded(f, a, theory, budget)?;
            let right = if g.is_quantifier_free() {
                eval_qf(g, a, theory)?.into()
            } else {
                eval_bounded(g, a, theory, budget)?
            };
            Ok((left, right))
        })
        .collect::<Result<_>>()?;
    let mut report = Report {
        samples,
        ..Report::default()
    };
    for (a, (l, r)) in assignments.into_iter().zip(verdicts) {
        match (l.as_bool(), r.as_bool()) {
            (Some(x), Some(y)) if x == y => report.agree += 1,
            (Some(_), Some(_)) => report.fail.push(a),
            _ => report.inconclusive += 1,
        }
    }
    Ok(report)
}
