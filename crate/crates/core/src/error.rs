use thiserror::Error;

use crate::theory::TheoryId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("symbol `{symbol}` at {pos} is not in the signature of {theory}")]
    Signature {
        pos: usize,
        symbol: String,
        theory: TheoryId,
    },

    #[error("symbol `{symbol}` is not in the signature of {structure}")]
    BareSignature { symbol: String, structure: String },

    #[error("modulus {modulus} at {pos} must be at least 2")]
    Modulus { pos: usize, modulus: String },

    #[error("unknown theory `{0}`")]
    UnknownTheory(String),

    #[error("gcd of two zeros is undefined")]
    BothZero,

    #[error("factorization budget exceeded: {0} has a cofactor above the prime table")]
    FactorBudget(String),

    #[error("DNF blowup: limit of {limit} literals exceeded")]
    DnfBlowup { limit: usize },

    #[error("value {value} for `{var}` lies outside the domain of {theory}")]
    Domain {
        var: String,
        value: String,
        theory: TheoryId,
    },

    #[error("variable `{0}` has no value in the assignment")]
    Unassigned(String),

    #[error("formula is not quantifier-free")]
    NotQuantifierFree,

    #[error("formula has free variables: {0}")]
    NotASentence(String),

    #[error("claim `{claim}` does not apply to {structure}")]
    InapplicableClaim { structure: String, claim: String },

    #[error("invalid lab structure: {0}")]
    Structure(String),

    #[error("malformed element: {0}")]
    MalformedElement(String),

    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
