//! Normal forms: NNF, DNF, negation removal, and the per-theory literal
//! shapes the engines work on.

mod consistency;
mod dnf;
mod fold;
mod linear;
mod monomial;
mod nnf;
mod shift;

pub use consistency::{drop_subsumed, plausibly_consistent, prune, Bounds};
pub use dnf::{to_dnf, to_dnf_pruned, Clause, Literal, DEFAULT_DNF_LIMIT};
pub use fold::{canonical_atom, decide_trivially, eval_ground_atom, eval_ground_term, simplify};
pub use linear::{LinRel, LinearAtom, LinearTerm};
pub use monomial::{MonAtom, MonRel, Monomial};
pub use nnf::{expand_congruence_negations, remove_order_negations, to_nnf};
pub use shift::{ShiftAtom, ShiftTerm};
