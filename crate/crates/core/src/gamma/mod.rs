//! The clause family `Γ(n,s,k)`.
//!
//! Step `u ≤ 3s` of the encoded refutation holds one of the three definition
//! clauses of `y_{⌈u/3⌉}`; later steps are 1-axioms, weakenings or
//! resolutions. `q^u_i` records membership of literal `i` in step `u` and the
//! selector `p_u` (t bits) names the instruction or inference.

mod codebook;
mod dimacs;
mod implicit;
mod params;
mod search;
mod stream;

pub use codebook::Inference;
pub use dimacs::{write_dimacs, DIMACS_HEADER_LINES};
pub use implicit::{
    find_falsified_implicit, ImplicitAnswer, ImplicitAssignment, ImplicitParams, DEFAULT_M_CAP,
};
pub use params::{selector_bits, GammaLit, GammaParams, GammaVar, MAX_K};
pub use search::{
    brute_force_falsified, find_falsified, ExplicitAssignment, FalsifiedClause, GammaAssignment,
};
pub use stream::{resolution_block_len, ClauseCounts, RES_PIVOTS, ClauseKey, GammaClause, Group, Segment};
