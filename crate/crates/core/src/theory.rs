use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// The structures the engines know how to handle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoryId {
    /// ⟨ℚ;<⟩ (equivalently ⟨ℝ;<⟩).
    Dlo,
    /// ⟨ℤ;<,s⟩.
    ZOrder,
    /// ⟨ℕ;<,s,0⟩.
    NOrder,
    QAdd,
    RAdd,
    /// Presburger arithmetic with congruences.
    ZAdd,
    NAdd,
    RMul,
    RPosMul,
    QMul,
    QPosMul,
}

/// Where variables range when a formula is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Domain {
    Rationals,
    Integers,
    Naturals,
    /// Positive reals under multiplication; sampled through power products.
    PosReals,
    Reals,
    PosRationals,
    SignedRationals,
}

/// Rough grouping used by the engines and by the corpus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Order,
    Additive,
    Multiplicative,
}

impl TheoryId {
    pub const ALL: [TheoryId; 11] = [
        TheoryId::Dlo,
        TheoryId::ZOrder,
        TheoryId::NOrder,
        TheoryId::QAdd,
        TheoryId::RAdd,
        TheoryId::ZAdd,
        TheoryId::NAdd,
        TheoryId::RMul,
        TheoryId::RPosMul,
        TheoryId::QMul,
        TheoryId::QPosMul,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoryId::Dlo => "dlo",
            TheoryId::ZOrder => "z-order",
            TheoryId::NOrder => "n-order",
            TheoryId::QAdd => "q-add",
            TheoryId::RAdd => "r-add",
            TheoryId::ZAdd => "z-add",
            TheoryId::NAdd => "n-add",
            TheoryId::RMul => "r-mul",
            TheoryId::RPosMul => "rpos-mul",
            TheoryId::QMul => "q-mul",
            TheoryId::QPosMul => "qpos-mul",
        }
    }

    pub fn family(self) -> Family {
        use TheoryId::*;
        match self {
            Dlo | ZOrder | NOrder => Family::Order,
            QAdd | RAdd | ZAdd | NAdd => Family::Additive,
            RMul | RPosMul | QMul | QPosMul => Family::Multiplicative,
        }
    }

    pub fn domain(self) -> Domain {
        use TheoryId::*;
        match self {
            Dlo | QAdd | RAdd => Domain::Rationals,
            ZOrder | ZAdd => Domain::Integers,
            NOrder | NAdd => Domain::Naturals,
            RPosMul => Domain::PosReals,
            RMul => Domain::Reals,
            QPosMul => Domain::PosRationals,
            QMul => Domain::SignedRationals,
        }
    }

    pub fn signature(self) -> Signature {
        use TheoryId::*;
        let base = Signature::default();
        match self {
            Dlo => base,
            ZOrder => Signature { succ: true, ..base },
            NOrder => Signature {
                succ: true,
                zero: true,
                ..base
            },
            QAdd | RAdd => Signature {
                additive: true,
                negation: true,
                zero: true,
                integers: true,
                fractions: true,
                negative_literals: true,
                ..base
            },
            ZAdd => Signature {
                additive: true,
                negation: true,
                zero: true,
                integers: true,
                negative_literals: true,
                congruence: true,
                ..base
            },
            NAdd => Signature {
                additive: true,
                zero: true,
                integers: true,
                congruence: true,
                ..base
            },
            RPosMul => Signature {
                multiplicative: true,
                integers: true,
                fractions: true,
                ..base
            },
            QPosMul => Signature {
                multiplicative: true,
                integers: true,
                fractions: true,
                power_predicate: true,
                ..base
            },
            RMul => Signature {
                multiplicative: true,
                negation: true,
                zero: true,
                integers: true,
                fractions: true,
                negative_literals: true,
                ..base
            },
            QMul => Signature {
                multiplicative: true,
                negation: true,
                zero: true,
                integers: true,
                fractions: true,
                negative_literals: true,
                power_predicate: true,
                ..base
            },
        }
    }

    /// True for the discrete structures (ℤ and ℕ).
    pub fn is_discrete(self) -> bool {
        matches!(self.domain(), Domain::Integers | Domain::Naturals)
    }
}

impl fmt::Display for TheoryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoryId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        TheoryId::ALL
            .iter()
            .copied()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::UnknownTheory(s.to_string()))
    }
}

/// Symbols a theory admits beyond `<`, `=` and variables.
///
/// `zero` covers the literal `0` in every theory; in the multiplicative
/// theories `1` is always available (it is the group identity).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub succ: bool,
    pub zero: bool,
    /// `+`, `n * t`; subtraction and unary minus need `negation` too.
    pub additive: bool,
    pub negation: bool,
    /// `*`, `inv( )`, `^`.
    pub multiplicative: bool,
    /// Integer literals other than `0`.
    pub integers: bool,
    /// `p/q` literals.
    pub fractions: bool,
    pub negative_literals: bool,
    pub congruence: bool,
    pub power_predicate: bool,
}
