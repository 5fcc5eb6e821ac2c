//! `qelim`: quantifier elimination, decision and oracle checks from the
//! command line.
//!
//! Exit status: 0 on success, 1 when an engine fails, 2 on bad input, 3 when
//! a check finds a definite disagreement.

use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use qelim::oracle::{
    check_identity, fuzz_equiv_with, lab_check, lab_member, ClaimId, ClaimParams, IdentityId,
    LabStructure, SearchBudget,
};
use qelim::{decide_with, parse_formula, qe_with, render, Error, Format, QeOptions, TheoryId};

#[derive(Parser)]
#[command(name = "qelim", version, about = "Quantifier elimination for ordered number structures")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: OutFormat,

    /// Abort when an intermediate DNF exceeds this many literals.
    #[arg(long, global = true)]
    dnf_limit: Option<usize>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print a quantifier-free equivalent.
    Qe {
        #[arg(long)]
        theory: TheoryId,
        /// The formula, or `-` to read it from stdin.
        formula: String,
    },
    /// Print the truth value of a sentence.
    Decide {
        #[arg(long)]
        theory: TheoryId,
        sentence: String,
    },
    /// Compare a formula with its own elimination on random assignments.
    Check {
        #[arg(long)]
        theory: TheoryId,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        budget: BudgetArgs,
        formula: String,
    },
    /// Check a schema instance in a counterexample structure, e.g.
    /// `lab 'QDivNFact(3)' --claim 'divisible_by(5)' --x 1`.
    Lab {
        /// QDivNFact(N), LexGroup(N), PowTwoGroup(N) or QModPStar(p).
        structure: LabStructure,
        /// closure, divisible_by(n), discreteness, roots(k),
        /// all_elements_are_pth_powers, m10(n) or m11[(n, m0, ...)].
        #[arg(long, required_unless_present = "member")]
        claim: Option<ClaimId>,
        /// Test membership of an encoded element instead of a claim.
        #[arg(long, conflicts_with = "claim")]
        member: Option<String>,
        /// Encoded element to test the claim at.
        #[arg(long)]
        x: Option<String>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Verify a definability identity on a grid.
    Identity {
        id: IdentityId,
        #[arg(long, default_value_t = 30)]
        range: u64,
    },
}

#[derive(Args)]
struct BudgetArgs {
    /// Integer witnesses are searched in [-N, N].
    #[arg(long)]
    int_range: Option<i64>,
    #[arg(long)]
    max_num: Option<u64>,
    #[arg(long)]
    max_den: Option<u64>,
    /// Exponent bound of the multiplicative grid.
    #[arg(long)]
    max_exp: Option<i64>,
}

impl BudgetArgs {
    fn budget(&self) -> SearchBudget {
        let mut b = SearchBudget::default();
        if let Some(v) = self.int_range {
            b.int_range = v;
        }
        if let Some(v) = self.max_num {
            b.max_num = v;
        }
        if let Some(v) = self.max_den {
            b.max_den = v;
        }
        if let Some(v) = self.max_exp {
            b.max_exp = v;
        }
        b
    }
}

enum Failure {
    Engine(Error),
    Usage(String),
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::DnfBlowup { .. } | Error::FactorBudget(_) | Error::Unsupported(_) => Failure::Engine(e),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            emit(&out);
            ExitCode::SUCCESS
        }
        Err(Failure::Engine(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check) => ExitCode::from(3),
    }
}

/// Writes a line to stdout; a closed pipe (`qelim ... | head`) is not an error.
fn emit(out: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{out}");
}

fn read_formula(arg: &str) -> Result<String, Failure> {
    if arg != "-" {
        return Ok(arg.to_string());
    }
    let mut s = String::new();
    std::io::stdin()
        .read_to_string(&mut s)
        .map_err(|e| Failure::Usage(format!("cannot read stdin: {e}")))?;
    Ok(s.trim().to_string())
}

/// Parses, pointing at the offending column on a syntax or signature error.
fn parse(text: &str, theory: TheoryId) -> Result<qelim::Formula, Failure> {
    parse_formula(text, theory).map_err(|e| match e {
        Error::Syntax { pos, .. } | Error::Signature { pos, .. } | Error::Modulus { pos, .. } => {
            let col = text[..pos.min(text.len())].chars().count();
            Failure::Usage(format!("{e}\n  {text}\n  {}^", " ".repeat(col)))
        }
        other => other.into(),
    })
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let json = cli.format == OutFormat::Json;
    let mut opts = QeOptions::default();
    if let Some(n) = cli.dnf_limit {
        opts.dnf_limit = n;
    }
    match &cli.cmd {
        Cmd::Qe { theory, formula } => {
            let f = parse(&read_formula(formula)?, *theory)?;
            let g = qe_with(&f, *theory, &opts)?;
            Ok(render(&g, if json { Format::Json } else { Format::Text }))
        }
        Cmd::Decide { theory, sentence } => {
            let f = parse(&read_formula(sentence)?, *theory)?;
            let v = decide_with(&f, *theory, &opts)?;
            Ok(if json {
                json!({ "theory": theory, "value": v }).to_string()
            } else {
                v.to_string()
            })
        }
        Cmd::Check {
            theory,
            samples,
            seed,
            budget,
            formula,
        } => {
            let f = parse(&read_formula(formula)?, *theory)?;
            let g = qe_with(&f, *theory, &opts)?;
            // Over ℕ the elimination is phrased in the ℤ signature; it is
            // evaluated at the same (natural) assignments.
            let report = fuzz_equiv_with(&f, &g, *theory, *samples, *seed, &budget.budget())?;
            let out = if json {
                json!({ "qe": g.to_string(), "report": report }).to_string()
            } else {
                let mut s = format!(
                    "qe: {g}\nsamples {}  agree {}  fail {}  inconclusive {}",
                    report.samples,
                    report.agree,
                    report.fail.len(),
                    report.inconclusive
                );
                for a in &report.fail {
                    let parts: Vec<String> = a.iter().map(|(k, v)| format!("{k} = {v}")).collect();
                    s.push_str(&format!("\nfailure at {{{}}}", parts.join(", ")));
                }
                s
            };
            if report.passed() {
                Ok(out)
            } else {
                emit(&out);
                Err(Failure::Check)
            }
        }
        Cmd::Lab {
            structure,
            claim,
            member,
            x,
            samples,
            seed,
        } => {
            if let Some(m) = member {
                let v = lab_member(*structure, m)?;
                return Ok(if json {
                    json!({ "structure": structure.to_string(), "element": m, "member": v }).to_string()
                } else {
                    v.to_string()
                });
            }
            let claim = claim.as_ref().expect("clap requires --claim without --member");
            let params = ClaimParams {
                x: x.clone(),
                samples: *samples,
                seed: *seed,
            };
            let r = lab_check(*structure, claim, &params)?;
            Ok(if json {
                serde_json::to_string(&r).expect("serializable")
            } else if r.holds {
                format!("holds ({} checked): {}", r.checked, r.reason)
            } else {
                format!(
                    "fails at {}: {}",
                    r.witness.as_deref().unwrap_or("?"),
                    r.reason
                )
            })
        }
        Cmd::Identity { id, range } => {
            let rep = check_identity(*id, *range);
            let out = if json {
                serde_json::to_string(&rep).expect("serializable")
            } else {
                let mut s = format!(
                    "{id} on range {range}: {} ({} points checked)",
                    if rep.holds() { "holds" } else { "FAILS" },
                    rep.checked
                );
                for e in &rep.exceptions {
                    s.push_str(&format!("\nexception at {e}"));
                }
                for w in &rep.witnesses {
                    let sq: Vec<String> = w.roots.iter().map(|r| format!("({r})²")).collect();
                    s.push_str(&format!("\n{} = {}", w.value, sq.join(" + ")));
                }
                s
            };
            if rep.holds() {
                Ok(out)
            } else {
                emit(&out);
                Err(Failure::Check)
            }
        }
    }
}
