use std::fmt::Write;

use num_traits::Signed;

use super::ast::{Atom, Formula, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    /// `{"text": …, "ast": …}`.
    Json,
}

/// Text or JSON rendering. The text form parses back to an α-equivalent
/// formula.
pub fn render(f: &Formula, format: Format) -> String {
    match format {
        Format::Text => {
            let mut out = String::new();
            formula(f, 0, &mut out);
            out
        }
        Format::Json => serde_json::json!({ "text": render(f, Format::Text), "ast": f }).to_string(),
    }
}

pub fn render_term(t: &Term) -> String {
    let mut out = String::new();
    term(t, 0, &mut out);
    out
}

impl std::fmt::Display for Formula {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&render(self, Format::Text))
    }
}

impl std::fmt::Display for Term {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&render_term(self))
    }
}

// Formula levels: quantifier 0, <-> 1, -> 2, | 3, & 4, unary/atom 5.
fn level(f: &Formula) -> u8 {
    match f {
        Formula::Exists(..) | Formula::Forall(..) => 0,
        Formula::Iff(..) => 1,
        Formula::Implies(..) => 2,
        Formula::Or(xs) if xs.len() >= 2 && sugar(xs).is_none() => 3,
        Formula::And(xs) if xs.len() >= 2 => 4,
        _ => 5,
    }
}

/// `a <= b` and `a != b` are stored as two-element disjunctions.
fn sugar(xs: &[Formula]) -> Option<(&Term, &'static str, &Term)> {
    match xs {
        [Formula::Atom(Atom::Lt(a, b)), Formula::Atom(Atom::Eq(c, d))] if a == c && b == d => {
            Some((a, "<=", b))
        }
        [Formula::Atom(Atom::Lt(a, b)), Formula::Atom(Atom::Lt(c, d))] if a == d && b == c => {
            Some((a, "!=", b))
        }
        _ => None,
    }
}

fn formula(f: &Formula, ctx: u8, out: &mut String) {
    let paren = level(f) < ctx;
    if paren {
        out.push('(');
    }
    match f {
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Atom(a) => atom(a, out),
        Formula::Not(g) => {
            out.push('~');
            formula(g, 5, out);
        }
        Formula::And(xs) | Formula::Or(xs) if xs.len() < 2 => match xs.first() {
            Some(x) => formula(x, ctx, out),
            None if matches!(f, Formula::And(_)) => out.push_str("true"),
            None => out.push_str("false"),
        },
        Formula::Or(xs) if sugar(xs).is_some() => {
            let (a, rel, b) = sugar(xs).unwrap();
            term(a, 0, out);
            let _ = write!(out, " {rel} ");
            term(b, 0, out);
        }
        Formula::And(xs) | Formula::Or(xs) => {
            let (sep, sub) = if matches!(f, Formula::And(_)) {
                (" & ", 5)
            } else {
                (" | ", 4)
            };
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    out.push_str(sep);
                }
                formula(x, sub, out);
            }
        }
        Formula::Implies(a, b) => {
            formula(a, 3, out);
            out.push_str(" -> ");
            formula(b, 2, out);
        }
        Formula::Iff(a, b) => {
            formula(a, 1, out);
            out.push_str(" <-> ");
            formula(b, 2, out);
        }
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            let q = if matches!(f, Formula::Exists(..)) {
                "exists"
            } else {
                "forall"
            };
            let _ = write!(out, "{q} {v}. ");
            formula(g, 0, out);
        }
    }
    if paren {
        out.push(')');
    }
}

fn atom(a: &Atom, out: &mut String) {
    match a {
        Atom::Lt(x, y) | Atom::Eq(x, y) => {
            term(x, 0, out);
            out.push_str(if matches!(a, Atom::Lt(..)) { " < " } else { " = " });
            term(y, 0, out);
        }
        Atom::Cong(x, y, n) => {
            out.push_str("cong(");
            term(x, 0, out);
            out.push_str(", ");
            term(y, 0, out);
            let _ = write!(out, ", {n})");
        }
        Atom::Pow(n, x) => {
            let _ = write!(out, "pow({n}, ");
            term(x, 0, out);
            out.push(')');
        }
    }
}

// Term levels: sum 0, product 1, signed 2, power 3, primary 4.
fn term_level(t: &Term) -> u8 {
    match t {
        Term::Add(..) | Term::Sub(..) => 0,
        Term::Mul(..) | Term::Scale(..) => 1,
        Term::Neg(_) => 2,
        Term::Const(q) if q.is_negative() => 2,
        Term::Const(q) if !q.is_integer() => 3,
        Term::Pow(..) => 3,
        _ => 4,
    }
}

fn term(t: &Term, ctx: u8, out: &mut String) {
    let paren = term_level(t) < ctx;
    if paren {
        out.push('(');
    }
    match t {
        Term::Var(v) => out.push_str(v),
        Term::Const(q) => {
            let _ = write!(out, "{q}");
        }
        Term::Add(a, b) | Term::Sub(a, b) => {
            term(a, 0, out);
            out.push_str(if matches!(t, Term::Add(..)) { " + " } else { " - " });
            term(b, 1, out);
        }
        Term::Mul(a, b) => {
            term(a, 1, out);
            out.push_str(" * ");
            term(b, 2, out);
        }
        Term::Scale(n, a) => {
            let _ = write!(out, "{n} * ");
            term(a, 2, out);
        }
        Term::Neg(a) => {
            out.push('-');
            term(a, 3, out);
        }
        Term::Inv(a) => {
            out.push_str("inv(");
            term(a, 0, out);
            out.push(')');
        }
        Term::Pow(a, k) => {
            term(a, 4, out);
            let _ = write!(out, "^{k}");
        }
        Term::Succ(a) => {
            out.push_str("s(");
            term(a, 0, out);
            out.push(')');
        }
    }
    if paren {
        out.push(')');
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;
    use crate::theory::TheoryId;

    #[test]
    fn examples() {
        let f = Formula::exists("x", Formula::lt(Term::var("y"), Term::var("x")));
        assert_eq!(render(&f, Format::Text), "exists x. y < x");
        assert_eq!(render(&Formula::True, Format::Text), "true");
        let c = Formula::cong(Term::var("t"), Term::var("s"), 6);
        assert_eq!(render(&c, Format::Text), "cong(t, s, 6)");
    }

    #[test]
    fn quantifier_operands_are_parenthesized() {
        let f = Formula::And(vec![
            Formula::exists("x", Formula::lt(Term::var("x"), Term::var("y"))),
            Formula::lt(Term::var("y"), Term::var("z")),
        ]);
        let text = render(&f, Format::Text);
        assert_eq!(text, "(exists x. x < y) & y < z");
        assert_eq!(parse_formula(&text, TheoryId::Dlo).unwrap(), f);

        let g = Formula::not(Formula::exists("x", Formula::lt(Term::var("x"), Term::var("y"))));
        assert_eq!(render(&g, Format::Text), "~(exists x. x < y)");
    }

    #[test]
    fn terms() {
        let t = Term::sub(
            Term::var("a"),
            Term::add(Term::scale(-2, Term::var("b")), Term::int(-3)),
        );
        assert_eq!(render_term(&t), "a - (-2 * b + -3)");
        let p = Term::mul(Term::pow(Term::int(-2), 3), Term::pow(Term::var("x"), -1));
        assert_eq!(render_term(&p), "(-2)^3 * x^-1");
    }

    #[test]
    fn json_carries_text() {
        let f = Formula::lt(Term::var("y"), Term::var("x"));
        let v: serde_json::Value = serde_json::from_str(&render(&f, Format::Json)).unwrap();
        assert_eq!(v["text"], "y < x");
        let back: Formula = serde_json::from_value(v["ast"].clone()).unwrap();
        assert_eq!(back, f);
    }
}
