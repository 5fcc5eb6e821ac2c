use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::theory::{Signature, TheoryId};

use super::ast::{Formula, Term};
use super::subst::fresh_name;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(BigInt),
    /// `p/q`, written without spaces.
    Frac(BigInt, BigInt),
    Sym(&'static str),
    End,
}

const SYMBOLS: [&str; 18] = [
    "<->", "->", "<=", "!=", "<", "=", "~", "&", "|", "(", ")", ",", ".", "+", "-", "*", "^", "/",
];

const KEYWORDS: [&str; 7] = ["exists", "forall", "true", "false", "cong", "pow", "inv"];

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    'outer: while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_lowercase() {
            let start = i;
            while i < bytes.len()
                && (bytes[i].is_ascii_lowercase() || bytes[i].is_ascii_digit() || bytes[i] == b'_')
            {
                i += 1;
            }
            out.push((Tok::Ident(text[start..i].to_string()), start));
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = text[start..i].parse().unwrap();
            if i + 1 < bytes.len() && bytes[i] == b'/' && bytes[i + 1].is_ascii_digit() {
                let dstart = i + 1;
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let d: BigInt = text[dstart..i].parse().unwrap();
                if d.is_zero() {
                    return Err(Error::Syntax {
                        pos: dstart,
                        msg: "zero denominator".into(),
                    });
                }
                out.push((Tok::Frac(n, d), start));
            } else {
                out.push((Tok::Num(n), start));
            }
            continue;
        }
        for s in SYMBOLS {
            if text[i..].starts_with(s) {
                out.push((Tok::Sym(s), i));
                i += s.len();
                continue 'outer;
            }
        }
        let ch = text[i..].chars().next().unwrap();
        return Err(Error::Syntax {
            pos: i,
            msg: format!("unexpected character `{ch}`"),
        });
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    theory: TheoryId,
    sig: Signature,
}

const RELATIONS: [&str; 4] = ["<", "<=", "=", "!="];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.at + k).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(t) if *t == s)
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{s}`")))
        }
    }

    fn error(&self, msg: String) -> Error {
        let found = match self.peek() {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(n) => format!("`{n}`"),
            Tok::Frac(n, d) => format!("`{n}/{d}`"),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::End => "end of input".to_string(),
        };
        Error::Syntax {
            pos: self.pos(),
            msg: format!("{msg}, found {found}"),
        }
    }

    fn deny(&self, pos: usize, symbol: &str) -> Error {
        Error::Signature {
            pos,
            symbol: symbol.to_string(),
            theory: self.theory,
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let mut lhs = self.implication()?;
        while self.eat("<->") {
            let rhs = self.implication()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.eat("->") {
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut parts = vec![self.conjunction()?];
        while self.eat("|") {
            parts.push(self.conjunction()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::Or(parts)
        })
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut parts = vec![self.unary()?];
        while self.eat("&") {
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::And(parts)
        })
    }

    fn unary(&mut self) -> Result<Formula> {
        if self.eat("~") {
            return Ok(Formula::not(self.unary()?));
        }
        if let Tok::Ident(kw) = self.peek().clone() {
            match kw.as_str() {
                "exists" | "forall" => {
                    self.bump();
                    let v = self.variable()?;
                    self.expect(".")?;
                    let body = self.formula()?;
                    return Ok(if kw == "exists" {
                        Formula::exists(&v, body)
                    } else {
                        Formula::forall(&v, body)
                    });
                }
                "true" => {
                    self.bump();
                    return Ok(Formula::True);
                }
                "false" => {
                    self.bump();
                    return Ok(Formula::False);
                }
                _ => {}
            }
        }
        if self.is_sym("(") {
            // Either a parenthesized formula or a term such as `(x + y) < z`.
            let save = self.at;
            self.bump();
            if let Ok(f) = self.formula() {
                if self.eat(")") && !self.continues_term() {
                    return Ok(f);
                }
            }
            self.at = save;
        }
        self.atom()
    }

    fn continues_term(&self) -> bool {
        match self.peek() {
            Tok::Sym(s) => RELATIONS.contains(s) || ["+", "-", "*", "^"].contains(s),
            _ => false,
        }
    }

    fn variable(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(v) if !KEYWORDS.contains(&v.as_str()) => {
                self.bump();
                Ok(v)
            }
            _ => Err(self.error("expected a variable".into())),
        }
    }

    fn natural(&mut self) -> Result<(BigInt, usize)> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok((n, pos))
            }
            _ => Err(self.error("expected a natural number".into())),
        }
    }

    fn atom(&mut self) -> Result<Formula> {
        if let Tok::Ident(kw) = self.peek().clone() {
            if kw == "cong" && matches!(self.peek_at(1), Tok::Sym("(")) {
                let pos = self.pos();
                if !self.sig.congruence {
                    return Err(self.deny(pos, "cong"));
                }
                self.bump();
                self.bump();
                let a = self.term()?;
                self.expect(",")?;
                let b = self.term()?;
                self.expect(",")?;
                let (n, npos) = self.natural()?;
                if n < BigInt::from(2) {
                    return Err(Error::Modulus {
                        pos: npos,
                        modulus: n.to_string(),
                    });
                }
                self.expect(")")?;
                return Ok(Formula::cong(a, b, n));
            }
            if kw == "pow" && matches!(self.peek_at(1), Tok::Sym("(")) {
                let pos = self.pos();
                if !self.sig.power_predicate {
                    return Err(self.deny(pos, "pow"));
                }
                self.bump();
                self.bump();
                let (n, npos) = self.natural()?;
                let n = match n.to_u64() {
                    Some(n) if n >= 2 => n,
                    _ => {
                        return Err(Error::Modulus {
                            pos: npos,
                            modulus: n.to_string(),
                        })
                    }
                };
                self.expect(",")?;
                let a = self.term()?;
                self.expect(")")?;
                return Ok(Formula::power(n, a));
            }
        }
        let lhs = self.term()?;
        let rel = match self.peek() {
            Tok::Sym(s) if RELATIONS.contains(s) => *s,
            _ => return Err(self.error("expected a relation".into())),
        };
        self.bump();
        let rhs = self.term()?;
        Ok(match rel {
            "<" => Formula::lt(lhs, rhs),
            "=" => Formula::eq(lhs, rhs),
            "<=" => Formula::le(lhs, rhs),
            _ => Formula::Or(vec![
                Formula::lt(lhs.clone(), rhs.clone()),
                Formula::lt(rhs, lhs),
            ]),
        })
    }

    fn term(&mut self) -> Result<Term> {
        let mut lhs = self.product()?;
        loop {
            let pos = self.pos();
            if self.eat("+") {
                if !self.sig.additive {
                    return Err(self.deny(pos, "+"));
                }
                let rhs = self.product()?;
                lhs = Term::add(lhs, rhs);
            } else if self.is_sym("-") {
                if !(self.sig.additive && self.sig.negation) {
                    return Err(self.deny(pos, "-"));
                }
                self.bump();
                let rhs = self.product()?;
                lhs = Term::sub(lhs, rhs);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn product(&mut self) -> Result<Term> {
        let mut lhs = self.signed()?;
        loop {
            let pos = self.pos();
            if !self.eat("*") {
                return Ok(lhs);
            }
            let rhs = self.signed()?;
            lhs = if self.sig.multiplicative {
                Term::mul(lhs, rhs)
            } else if self.sig.additive {
                match (integer_literal(&lhs), integer_literal(&rhs)) {
                    (Some(n), _) => Term::Scale(n, Box::new(rhs)),
                    (None, Some(n)) => Term::Scale(n, Box::new(lhs)),
                    _ => return Err(self.deny(pos, "*")),
                }
            } else {
                return Err(self.deny(pos, "*"));
            };
        }
    }

    fn signed(&mut self) -> Result<Term> {
        let pos = self.pos();
        if self.eat("-") {
            let inner = self.signed()?;
            if let Term::Const(q) = &inner {
                if !self.sig.negative_literals && !q.is_zero() {
                    return Err(self.deny(pos, "-"));
                }
                return Ok(Term::Const(-q));
            }
            if !self.sig.negation {
                return Err(self.deny(pos, "-"));
            }
            return Ok(Term::neg(inner));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Term> {
        let base = self.primary()?;
        let pos = self.pos();
        if !self.eat("^") {
            return Ok(base);
        }
        if !self.sig.multiplicative {
            return Err(self.deny(pos, "^"));
        }
        let negative = self.eat("-");
        let (k, kpos) = self.natural()?;
        let k = k
            .to_i64()
            .filter(|k| *k != 0)
            .ok_or_else(|| Error::Syntax {
                pos: kpos,
                msg: "exponent must be a nonzero machine integer".into(),
            })?;
        Ok(Term::pow(base, if negative { -k } else { k }))
    }

    fn primary(&mut self) -> Result<Term> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                self.check_literal(pos, &BigRational::from_integer(n.clone()))?;
                Ok(Term::Const(BigRational::from_integer(n)))
            }
            Tok::Frac(n, d) => {
                self.bump();
                let q = BigRational::new(n, d);
                self.check_literal(pos, &q)?;
                Ok(Term::Const(q))
            }
            Tok::Sym("(") => {
                self.bump();
                let t = self.term()?;
                self.expect(")")?;
                Ok(t)
            }
            Tok::Ident(name) => {
                let call = matches!(self.peek_at(1), Tok::Sym("("));
                if call && name == "s" {
                    if !self.sig.succ {
                        return Err(self.deny(pos, "s"));
                    }
                    self.bump();
                    self.bump();
                    let t = self.term()?;
                    self.expect(")")?;
                    return Ok(Term::succ(t));
                }
                if call && name == "inv" {
                    if !self.sig.multiplicative {
                        return Err(self.deny(pos, "inv"));
                    }
                    self.bump();
                    self.bump();
                    let t = self.term()?;
                    self.expect(")")?;
                    return Ok(Term::inv(t));
                }
                if KEYWORDS.contains(&name.as_str()) {
                    return Err(self.error("expected a term".into()));
                }
                self.bump();
                Ok(Term::Var(name))
            }
            _ => Err(self.error("expected a term".into())),
        }
    }

    fn check_literal(&self, pos: usize, q: &BigRational) -> Result<()> {
        let ok = if q.is_zero() {
            self.sig.zero
        } else if !q.is_integer() {
            self.sig.fractions
        } else if q.is_one() && self.sig.multiplicative {
            true
        } else {
            self.sig.integers
        };
        if ok {
            Ok(())
        } else {
            Err(self.deny(pos, &q.to_string()))
        }
    }
}

fn integer_literal(t: &Term) -> Option<BigInt> {
    match t {
        Term::Const(q) if q.is_integer() => Some(q.to_integer()),
        _ => None,
    }
}

/// Parses `text` as a formula over `theory`'s signature.
///
/// Binders that shadow an enclosing binder, or reuse a name already bound
/// elsewhere, are renamed apart (`x` becomes `x_1`).
pub fn parse_formula(text: &str, theory: TheoryId) -> Result<Formula> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        theory,
        sig: theory.signature(),
    };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return Err(p.error("expected end of input".into()));
    }
    Ok(rename_binders(&f))
}

/// Parses a single term.
pub fn parse_term(text: &str, theory: TheoryId) -> Result<Term> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        theory,
        sig: theory.signature(),
    };
    let t = p.term()?;
    if *p.peek() != Tok::End {
        return Err(p.error("expected end of input".into()));
    }
    Ok(t)
}

fn rename_binders(f: &Formula) -> Formula {
    let mut used = f.all_names();
    let mut seen = BTreeSet::new();
    go(f, &mut used, &mut seen, &mut Vec::new())
}

fn go(
    f: &Formula,
    used: &mut BTreeSet<String>,
    seen: &mut BTreeSet<String>,
    env: &mut Vec<(String, String)>,
) -> Formula {
    let lookup = |env: &Vec<(String, String)>, v: &str| -> Term {
        env.iter()
            .rev()
            .find(|(from, _)| from == v)
            .map(|(_, to)| Term::var(to))
            .unwrap_or_else(|| Term::var(v))
    };
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(a) => Formula::Atom(a.map_terms(&|t| t.map_vars(&|v| lookup(env, v)))),
        Formula::Not(g) => Formula::not(go(g, used, seen, env)),
        Formula::And(gs) => Formula::And(gs.iter().map(|g| go(g, used, seen, env)).collect()),
        Formula::Or(gs) => Formula::Or(gs.iter().map(|g| go(g, used, seen, env)).collect()),
        Formula::Implies(a, b) => {
            let a = go(a, used, seen, env);
            Formula::implies(a, go(b, used, seen, env))
        }
        Formula::Iff(a, b) => {
            let a = go(a, used, seen, env);
            Formula::iff(a, go(b, used, seen, env))
        }
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            let name = if seen.contains(v) {
                let n = fresh_name(v, used);
                used.insert(n.clone());
                n
            } else {
                v.clone()
            };
            seen.insert(name.clone());
            env.push((v.clone(), name.clone()));
            let body = go(g, used, seen, env);
            env.pop();
            if matches!(f, Formula::Exists(..)) {
                Formula::Exists(name, Box::new(body))
            } else {
                Formula::Forall(name, Box::new(body))
            }
        }
    }
}
