//! Circuits, clauses, the `df_C` encoding and R(1,w) / ER proof checking.

mod circuit;
mod clause;
mod proof;
mod substitute;
pub mod text;
mod uniqueness;

pub use circuit::{gate_clauses, Circuit, Evaluation, Gate, Instruction};
pub use clause::{Clause, CopyTag, Lit, Var};
pub use proof::{check_step, er_premises, ErRefutation, Justification, ProofStep, Refutation, Violation};
pub use substitute::{restrict_clause, substitute_constants};
pub use uniqueness::{uniqueness_proof, UniquenessProof, STEPS_PER_GATE, UNIQUENESS_SLOPE};
