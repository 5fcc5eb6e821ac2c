//! Acceptance suite: prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qelim::arith::{
    crt_compatible_merge, crt_solve, gcd_ext, is_nth_power, lattice_identities,
    power_merge_exponents, CongruenceSystem,
};
use qelim::normalize::{expand_congruence_negations, remove_order_negations, simplify, to_nnf};
use qelim::oracle::{
    check_identity, eval_bounded, four_squares, fuzz_equiv, lab_check, lab_member, Assignment,
    ClaimParams, IdentityId, LabStructure, SearchBudget,
};
use qelim::qe::{qe_bare, relativize_to_naturals, BareStructure};
use qelim::{decide, qe, substitute, Error, Formula, Term, TheoryId};

use common::{canon, corpus, parse, soundness_run};

type Criterion = fn() -> Result<String, String>;

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 8] = [
        ("golden eliminations", goldens),
        ("soundness fuzzing", soundness),
        ("decision corpus", decision_corpus),
        ("number theory", number_theory),
        ("power-predicate lemmas", power_lemmas),
        ("counterexample structures", lab_facts),
        ("definability identities", identities),
        ("negative controls", negative_controls),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into());
            Err(msg)
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} ({name}): PASS — {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL — {detail} [{secs:.1}s]", i + 1)
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn th(id: &str) -> TheoryId {
    id.parse().expect("theory id")
}

// 1 ------------------------------------------------------------------------

fn goldens() -> Result<String, String> {
    let mut count = 0;
    let mut same = |what: &str, got: &Formula, want: &Formula| {
        count += 1;
        ensure(canon(got) == canon(want), || {
            format!("{what}: got `{got}`, expected `{want}`")
        })
    };

    let zadd = th("z-add");
    same(
        "substitute",
        &substitute(&parse("y < x", th("dlo")), "x", &Term::var("u0")),
        &parse("y < u0", th("dlo")),
    )?;
    let rm = |s: &str| remove_order_negations(&to_nnf(&parse(s, zadd)), zadd);
    same("~(s = t)", &rm("~(s = t)"), &parse("s < t | t < s", zadd))?;
    same("~(s < t)", &rm("~(s < t)"), &parse("t < s | t = s", zadd))?;
    same(
        "~cong(x, 0, 2)",
        &expand_congruence_negations(&to_nnf(&parse("~cong(x, 0, 2)", zadd))),
        &parse("cong(x, 1, 2)", zadd),
    )?;
    same("x < x", &simplify(&parse("x < x", th("dlo")), th("dlo")), &Formula::False)?;

    // Congruence between bounds: with r = u − t and s = v − t − 1 the
    // elimination is ⋁_{i<3} (s ≡₃ i ∧ r + i < s).
    let cong_expected = simplify(
        &parse(
            "cong(v - t - 1, 0, 3) & u - t < v - t - 1 \
             | cong(v - t - 1, 1, 3) & u - t + 1 < v - t - 1 \
             | cong(v - t - 1, 2, 3) & u - t + 2 < v - t - 1",
            zadd,
        ),
        zadd,
    );

    let eliminations: Vec<(&str, &str, Formula)> = vec![
        ("dlo", "exists x. y < x & x < z", parse("y < z", th("dlo"))),
        ("dlo", "exists x. y < x", Formula::True),
        ("dlo", "exists x. x = u & y < x", parse("y < u", th("dlo"))),
        ("z-order", "exists x. y < x & x < z", parse("s(y) < z", th("z-order"))),
        ("n-order", "exists y. y < a & y < b", parse("0 < a & 0 < b", th("n-order"))),
        ("n-order", "exists x. t < x", Formula::True),
        ("q-add", "exists x. a < x & x < b & x = c", parse("a < c & c < b", th("q-add"))),
        ("z-add", "exists x. cong(x, t, 3) & u < x & x < v", cong_expected),
        ("rpos-mul", "exists x. t < x & x < s", parse("t < s", th("rpos-mul"))),
        ("r-mul", "exists t. 0 < t & 0 < s & -t = s", Formula::False),
        (
            "qpos-mul",
            "exists x. pow(2, x * t) & ~pow(2, x * s)",
            parse("~pow(2, s * t^-1)", th("qpos-mul")),
        ),
        ("qpos-mul", "exists x. u < x & x < v & pow(3, x * t)", parse("u < v", th("qpos-mul"))),
    ];
    for (id, text, want) in &eliminations {
        let theory = th(id);
        let f = parse(text, theory);
        let g = qe(&f, theory).map_err(|e| format!("{id}: {text}: {e}"))?;
        same(&format!("{id}: {text}"), &g, want)?;
        let r = fuzz_equiv(&f, &g, theory, 40, 3).map_err(|e| e.to_string())?;
        ensure(r.passed(), || format!("{id}: {text}: oracle disagrees at {:?}", r.fail[0]))?;
    }

    let nadd = th("n-add");
    same(
        "relativize exists",
        &relativize_to_naturals(&parse("exists x. x < y", nadd)),
        &parse("exists x. 0 <= x & x < y", nadd),
    )?;
    same(
        "relativize forall",
        &relativize_to_naturals(&parse("forall x. x < y", nadd)),
        &parse("forall x. 0 <= x -> x < y", nadd),
    )?;
    let n = count;
    Ok(format!("{n} goldens reproduced, eliminations confirmed by the oracle"))
}

// 2 ------------------------------------------------------------------------

fn soundness() -> Result<String, String> {
    let mut worst: (f64, TheoryId) = (0.0, TheoryId::Dlo);
    let mut slowest = (Duration::ZERO, TheoryId::Dlo);
    let mut samples = 0;
    for theory in TheoryId::ALL {
        let t = Instant::now();
        let o = soundness_run(theory, 500, 8, 1);
        let el = t.elapsed();
        if let Some((f, g)) = o.failures.first() {
            return Err(format!("{theory}: {f} => {g} disagrees with the oracle"));
        }
        let rate = o.inconclusive_rate();
        ensure(rate < 0.2, || format!("{theory}: {:.1}% inconclusive", 100.0 * rate))?;
        ensure(el < Duration::from_secs(120), || format!("{theory}: took {el:?}"))?;
        if rate > worst.0 {
            worst = (rate, theory);
        }
        if el > slowest.0 {
            slowest = (el, theory);
        }
        samples += o.report.samples;
    }
    Ok(format!(
        "{} theories × 500 formulas, {samples} samples, 0 disagreements; \
         max inconclusive {:.1}%{}, slowest {} {:.1}s",
        TheoryId::ALL.len(),
        100.0 * worst.0,
        if worst.0 > 0.0 { format!(" ({})", worst.1) } else { String::new() },
        slowest.1,
        slowest.0.as_secs_f64()
    ))
}

// 3 ------------------------------------------------------------------------

fn decision_corpus() -> Result<String, String> {
    let entries = corpus();
    let budget = SearchBudget::default();
    let mut confirmed = 0;
    let mut families = BTreeSet::new();
    for e in &entries {
        let f = parse(&e.sentence, e.theory);
        let got = decide(&f, e.theory).map_err(|err| format!("{}: {}: {err}", e.theory, e.sentence))?;
        ensure(got == e.expected, || {
            format!("{}: {} decided {got}, expected {} ({})", e.theory, e.sentence, e.expected, e.note)
        })?;
        let v = eval_bounded(&f, &Assignment::new(), e.theory, &budget).map_err(|err| err.to_string())?;
        if let Some(b) = v.as_bool() {
            ensure(b == e.expected, || format!("{}: {}: oracle says {b}", e.theory, e.sentence))?;
            confirmed += 1;
        }
        families.insert(format!("{:?}", e.theory.family()));
    }
    Ok(format!(
        "{} sentences over {} families decided correctly, {confirmed} also settled by bounded search",
        entries.len(),
        families.len()
    ))
}

// 4 ------------------------------------------------------------------------

fn number_theory() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);

    for _ in 0..10_000 {
        let a: i64 = rng.gen_range(-1_000_000_000..=1_000_000_000);
        let b: i64 = rng.gen_range(-1_000_000_000..=1_000_000_000);
        if a == 0 && b == 0 {
            continue;
        }
        let r = gcd_ext(&a, &b).map_err(|e| e.to_string())?;
        let ok = r.d > 0
            && r.d == a.gcd(&b)
            && i128::from(a) * i128::from(r.u) + i128::from(b) * i128::from(r.v) == i128::from(r.d);
        ensure(ok, || format!("gcd_ext({a}, {b}) = {r:?}"))?;
    }

    let mut systems = 0;
    let mut solvable = 0;
    while systems < 1000 {
        let k = rng.gen_range(1..=4);
        let cs: Vec<(i64, i64)> = (0..k)
            .map(|_| {
                let n = rng.gen_range(2..=30);
                (n, rng.gen_range(-40..=40))
            })
            .collect();
        let period = cs.iter().fold(1i64, |acc, (n, _)| acc.lcm(n));
        if period > 1_000_000 {
            continue;
        }
        systems += 1;
        let brute = (0..period).find(|x| cs.iter().all(|(n, t)| (x - t).mod_floor(n) == 0));
        let sys = CongruenceSystem::new(cs.clone()).map_err(|e| e.to_string())?;
        let solved = crt_solve(&sys).map(|x| x.mod_floor(&period));
        ensure(solved == brute, || format!("crt_solve {cs:?}: {solved:?} vs {brute:?}"))?;
        let merged = crt_compatible_merge(&sys);
        ensure(merged == brute.map(|x| (period, x)), || {
            format!("crt_compatible_merge {cs:?}: {merged:?} vs {brute:?}")
        })?;
        solvable += usize::from(brute.is_some());
    }

    for _ in 0..1000 {
        let len = rng.gen_range(1..=6);
        let ns: Vec<i64> = (0..len).map(|_| rng.gen_range(1..=5000)).collect();
        ensure(lattice_identities(&ns), || format!("lattice_identities {ns:?}"))?;
    }

    // Full reduced-fraction grid against an independent integer root search.
    let mut grid = 0;
    for num in -200i64..=200 {
        for den in 1i64..=200 {
            if num == 0 || num.gcd(&den) != 1 {
                continue;
            }
            let q = BigRational::new(num.into(), den.into());
            for n in 2u32..=10 {
                grid += 1;
                let root = |m: i64| {
                    let r = m.abs().nth_root(n);
                    r.pow(n) == m.abs()
                };
                let sign_ok = num > 0 || n % 2 == 1;
                let expected = sign_ok && root(num) && root(den);
                ensure(is_nth_power(&q, u64::from(n)) == expected, || {
                    format!("is_nth_power({q}, {n}) should be {expected}")
                })?;
            }
        }
    }
    Ok(format!(
        "gcd_ext on 10000 pairs; CRT on 1000 systems ({solvable} solvable) against brute force; \
         lattice identities on 1000 tuples; is_nth_power on {grid} grid points"
    ))
}

// 5 ------------------------------------------------------------------------

fn random_positive(rng: &mut ChaCha8Rng) -> BigRational {
    let pick = |rng: &mut ChaCha8Rng| {
        let mut v = BigInt::one();
        for p in [2u32, 3, 5, 7] {
            v *= BigInt::from(p).pow(rng.gen_range(0..=3));
        }
        v
    };
    BigRational::new(pick(rng), pick(rng))
}

fn rpow(q: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        num_traits::pow(q.clone(), e as usize)
    } else {
        num_traits::pow(q.recip(), (-e) as usize)
    }
}

fn power_lemmas() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);

    // Ρ_{n₁}(q) ∧ Ρ_{n₂}(q) ⟺ Ρ_{lcm}(q)
    let mut lem1 = [0usize; 2];
    for _ in 0..1000 {
        let (n1, n2) = (rng.gen_range(2u64..=12), rng.gen_range(2u64..=12));
        let l = n1.lcm(&n2);
        let base = random_positive(&mut rng);
        let q = match rng.gen_range(0..3) {
            0 => rpow(&base, l as i64),
            1 => rpow(&base, n1 as i64),
            _ => base,
        };
        let lhs = is_nth_power(&q, n1) && is_nth_power(&q, n2);
        ensure(lhs == is_nth_power(&q, l), || format!("lcm rule fails for {q}, {n1}, {n2}"))?;
        lem1[usize::from(lhs)] += 1;
    }

    // ⋀ Ρ_{nᵢ}(y·tᵢ) ⟺ Ρₙ(y·β) ∧ ⋀_{i<j} Ρ_{gcd(nᵢ,nⱼ)}(tᵢ·tⱼ⁻¹), β = ∏ tᵢ^{eᵢ}.
    let mut lem1qe = [0usize; 2];
    for _ in 0..1000 {
        let p = rng.gen_range(1..=3);
        let ns: Vec<u64> = (0..p).map(|_| rng.gen_range(2..=8)).collect();
        let (n, es) = power_merge_exponents(&ns).map_err(|e| e.to_string())?;
        let (ts, y) = if rng.gen_bool(0.5) {
            // tᵢ = r·uᵢ^{nᵢ} and y = r⁻¹·wⁿ make every conjunct true.
            let r = random_positive(&mut rng);
            let ts: Vec<BigRational> = ns
                .iter()
                .map(|&ni| &r * rpow(&random_positive(&mut rng), ni as i64))
                .collect();
            let y = r.recip() * rpow(&random_positive(&mut rng), n as i64);
            (ts, y)
        } else {
            let ts = (0..p).map(|_| random_positive(&mut rng)).collect();
            (ts, random_positive(&mut rng))
        };
        let beta = ts
            .iter()
            .zip(&es)
            .fold(BigRational::one(), |acc, (t, &e)| acc * rpow(t, e));
        let lhs = ts.iter().zip(&ns).all(|(t, &ni)| is_nth_power(&(&y * t), ni));
        let mut rhs = is_nth_power(&(&y * &beta), n);
        for i in 0..p {
            for j in i + 1..p {
                let d = ns[i].gcd(&ns[j]);
                rhs &= d == 1 || is_nth_power(&(&ts[i] / &ts[j]), d);
            }
        }
        ensure(lhs == rhs, || {
            format!("merge fails for n = {ns:?}, t = {ts:?}, y = {y}: {lhs} vs {rhs}")
        })?;
        lem1qe[usize::from(lhs)] += 1;
    }
    ensure(lem1.iter().chain(&lem1qe).all(|&c| c > 0), || {
        format!("a direction went unexercised: {lem1:?} {lem1qe:?}")
    })?;
    Ok(format!(
        "lcm rule on 1000 instances ({} true, {} false); merged predicate on 1000 instances ({} true, {} false)",
        lem1[1], lem1[0], lem1qe[1], lem1qe[0]
    ))
}

// 6 ------------------------------------------------------------------------

fn lab_facts() -> Result<String, String> {
    let claim = |s: &str, c: &str, x: Option<&str>| {
        let st: LabStructure = s.parse().map_err(|e: Error| e.to_string())?;
        let params = ClaimParams {
            x: x.map(str::to_string),
            ..ClaimParams::default()
        };
        lab_check(st, &c.parse().map_err(|e: Error| e.to_string())?, &params)
            .map_err(|e| format!("{s} {c}: {e}"))
    };
    let holds = |s: &str, c: &str| -> Result<usize, String> {
        let r = claim(s, c, None)?;
        ensure(r.holds, || format!("{s} should satisfy {c}: {}", r.reason))?;
        Ok(r.checked)
    };
    let fails_at = |s: &str, c: &str, x: Option<&str>, w: &str| -> Result<(), String> {
        let r = claim(s, c, x)?;
        ensure(!r.holds && r.witness.as_deref() == Some(w), || {
            format!("{s} {c}: expected failure at {w}, got {r:?}")
        })
    };
    let member = |s: &str, e: &str| lab_member(s.parse().unwrap(), e).map_err(|e| e.to_string());

    let mut checked = 0;
    checked += holds("QDivNFact(3)", "closure")?;
    checked += holds("QDivNFact(3)", "divisible_by(3)")?;
    fails_at("QDivNFact(3)", "divisible_by(5)", Some("1"), "1")?;
    ensure(member("QDivNFact(3)", "5/36")? && !member("QDivNFact(3)", "1/5")?, || {
        "ℚ/6 membership".into()
    })?;

    checked += holds("LexGroup(3)", "closure")?;
    checked += holds("LexGroup(3)", "discreteness")?;
    fails_at("LexGroup(3)", "divisible_by(7)", Some("(1, 0)"), "(1, 0)")?;

    checked += holds("PowTwoGroup(3)", "closure")?;
    checked += holds("PowTwoGroup(3)", "roots(3)")?;
    let r = claim("PowTwoGroup(3)", "roots(5)", None)?;
    ensure(!r.holds && r.witness.is_some(), || format!("fifth roots should fail: {r:?}"))?;

    checked += holds("QModPStar(5)", "closure")?;
    checked += holds("QModPStar(5)", "all_elements_are_pth_powers")?;
    for n in [2, 3, 4, 6] {
        checked += holds("QModPStar(5)", &format!("m10({n})"))?;
    }
    fails_at("QModPStar(5)", "m11", None, "x_0 = 1")?;
    ensure(member("QModPStar(5)", "2^(3/5)*3^(-1/25)")?, || "(ℚ/5)* membership".into())?;
    Ok(format!(
        "4 structures: {checked} sampled instances hold; divisibility by 5 and 7, fifth roots and M11 fail at the stated witnesses"
    ))
}

// 7 ------------------------------------------------------------------------

fn identities() -> Result<String, String> {
    let mut points = 0;
    for (id, range) in [
        (IdentityId::RobinsonN, 30),
        (IdentityId::RobinsonZ, 30),
        (IdentityId::RobinsonVariantZ, 30),
        (IdentityId::FourSquareZ, 200),
        (IdentityId::FourSquareQ, 50),
        (IdentityId::OrderDefN, 30),
        (IdentityId::OrderDefZ, 30),
    ] {
        let rep = check_identity(id, range);
        ensure(rep.holds(), || format!("{id}: exceptions {:?}", &rep.exceptions[..rep.exceptions.len().min(3)]))?;
        points += rep.checked;
    }
    ensure(four_squares(7) == [2, 1, 1, 1], || "7 = 4 + 1 + 1 + 1".into())?;
    let s = |v: i64| v + 1;
    ensure(s(21) * s(28) == 638 && s(49 * s(12)) == 638, || "Robinson spot value".into())?;
    Ok(format!("7 identities, {points} grid points, no exceptions; 7 = 2² + 1² + 1² + 1²"))
}

// 8 ------------------------------------------------------------------------

fn negative_controls() -> Result<String, String> {
    let z = th("z-order");
    let f = parse("exists x. y < x & x < z", z);
    let wrong = parse("y < z", z);
    let r = fuzz_equiv(&f, &wrong, z, 1000, 7).map_err(|e| e.to_string())?;
    let gap_one = r.fail.iter().find(|a| {
        match (a["y"].as_rational(), a["z"].as_rational()) {
            (Some(y), Some(zv)) => zv - y == BigRational::one(),
            _ => false,
        }
    });
    let Some(a) = gap_one else {
        return Err(format!("wrong elimination not caught at z = y + 1: {r:?}"));
    };
    let at = format!("y = {}, z = {}", a["y"], a["z"]);

    let mut rejected = Vec::new();
    for st in BareStructure::ALL {
        match qe_bare(&st.witness(), st) {
            Err(Error::BareSignature { symbol, .. }) => rejected.push(format!("{st} needs `{symbol}`")),
            other => return Err(format!("{st}: expected a signature error, got {other:?}")),
        }
    }
    ensure(r.fail.iter().all(|a| {
        let (y, zv) = (a["y"].as_rational().unwrap(), a["z"].as_rational().unwrap());
        (zv - y - BigRational::one()).is_zero()
    }), || "a failure away from z = y + 1".into())?;
    Ok(format!("{} failures of y < z, e.g. at {at}; {}", r.fail.len(), rejected.join(", ")))
}
