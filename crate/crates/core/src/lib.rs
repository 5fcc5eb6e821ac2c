//! Quantifier elimination for the ordered structures ℕ, ℤ, ℚ, ℝ under
//! `<`, `<` with addition, and `<` with multiplication.
//!
//! ```
//! use qelim::{parse_formula, qe, TheoryId};
//!
//! let f = parse_formula("exists x. y < x & x < z", TheoryId::ZOrder).unwrap();
//! assert_eq!(qe(&f, TheoryId::ZOrder).unwrap().to_string(), "s(y) < z");
//! ```

pub mod arith;
pub mod error;
pub mod normalize;
pub mod oracle;
pub mod qe;
pub mod scalar;
mod serde_num;
pub mod syntax;
pub mod theory;

pub use error::{Error, Result};
pub use qe::{decide, decide_with, qe, qe_with, QeOptions};
pub use syntax::{parse_formula, render, substitute, Atom, Format, Formula, Term};
pub use theory::TheoryId;

/// Arbitrary-precision integer used throughout.
pub type Int = num_bigint::BigInt;
/// Arbitrary-precision rational used throughout.
pub type Rational = num_rational::BigRational;
