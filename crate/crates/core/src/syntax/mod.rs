//! Terms, formulas, and their text form.

mod ast;
mod parse;
mod print;
mod sig;
mod subst;

pub use ast::{Atom, Formula, Term};
pub use parse::{parse_formula, parse_term};
pub use print::{render, render_term, Format};
pub use sig::{check_signature, check_signature_of};
pub use subst::{alpha_eq, fresh_name, substitute};
