//! From ER refutations to clause-substitutions of `Γ`, and back.

mod build;
mod normalize;
mod oracle;
mod subst;
mod verify;

pub use build::{build_substitution, gamma_params_for};
pub use normalize::{normalize_er, NormalizedEr, StepRole, NORMALIZE_SLOPE};
pub use oracle::{apply_oracle, OracleAnswer};
pub use subst::{code_bits, sel, ClauseSubstitution, SubstItem};
pub use verify::{
    check_record, classify, key_at, verify_reduction, write_certificate, Case, ReductionReport,
};
