//! Order structures without the constants that make elimination possible.
//!
//! ⟨ℤ;<⟩, ⟨ℕ;<⟩ and ⟨ℕ;<,𝔰⟩ do not admit quantifier elimination: each has
//! a formula whose only quantifier-free equivalents need `𝔰` or `0`.
//! [`qe_bare`] eliminates in the enriched theory and then reports the
//! symbol the result needed but the bare signature lacks.

use std::fmt;

use crate::error::Result;
use crate::syntax::{check_signature_of, parse_formula, Formula};
use crate::theory::{Signature, TheoryId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BareStructure {
    /// ⟨ℤ;<⟩
    ZOrder,
    /// ⟨ℕ;<⟩
    NOrder,
    /// ⟨ℕ;<,𝔰⟩
    NOrderSucc,
}

impl BareStructure {
    pub const ALL: [BareStructure; 3] = [
        BareStructure::ZOrder,
        BareStructure::NOrder,
        BareStructure::NOrderSucc,
    ];

    pub fn signature(self) -> Signature {
        match self {
            BareStructure::NOrderSucc => Signature {
                succ: true,
                ..Signature::default()
            },
            _ => Signature::default(),
        }
    }

    /// The theory that does eliminate quantifiers over the same domain.
    pub fn enriched(self) -> TheoryId {
        match self {
            BareStructure::ZOrder => TheoryId::ZOrder,
            _ => TheoryId::NOrder,
        }
    }

    /// A formula with no quantifier-free equivalent in this signature.
    pub fn witness(self) -> Formula {
        let text = match self {
            BareStructure::ZOrder => "exists x. y < x & x < z",
            BareStructure::NOrder => "exists x. x < y",
            BareStructure::NOrderSucc => "exists x. s(x) = y",
        };
        parse_formula(text, self.enriched()).expect("witness parses")
    }
}

impl fmt::Display for BareStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BareStructure::ZOrder => "⟨ℤ;<⟩",
            BareStructure::NOrder => "⟨ℕ;<⟩",
            BareStructure::NOrderSucc => "⟨ℕ;<,𝔰⟩",
        })
    }
}

/// Eliminates in [`BareStructure::enriched`] and keeps the result only if it
/// stays inside the bare signature; otherwise fails with
/// [`Error::BareSignature`](crate::Error::BareSignature) naming the symbol.
pub fn qe_bare(f: &Formula, st: BareStructure) -> Result<Formula> {
    let name = st.to_string();
    check_signature_of(f, &st.signature(), &name)?;
    let g = super::qe(f, st.enriched())?;
    check_signature_of(&g, &st.signature(), &name)?;
    Ok(g)
}
