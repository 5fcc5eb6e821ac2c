//! Independent semantics: exact evaluation, witness search, equivalence
//! fuzzing, the counterexample structures and the definability identities.

mod closure;
mod eval;
mod fuzz;
mod gen;
mod identity;
mod lab;
mod value;

pub use eval::{
    base_grid, eval_bounded, eval_qf, normalize_value, Assignment, EvalVerdict, SearchBudget,
};
pub use fuzz::{fuzz_equiv, fuzz_equiv_with, sample_value, Report};
pub use lab::{
    in_q_over, lab_check, lab_member, n_factorial, ClaimId, ClaimParams, ClaimResult, LabElement,
    LabStructure,
};
pub use identity::{check_identity, four_squares, FourSquares, IdentityId, IdentityReport};
pub use gen::{random_formula, GenConfig};
pub use value::{rational_between, PowerProduct, Value};
