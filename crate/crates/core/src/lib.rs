//! Tooling around the `Γ(n,s,k)` clause family: formulas stating that some
//! size-`s` circuit definition has a `k`-step refutation in resolution with
//! weakening and 1-axioms.
//!
//! * [`logic`]: circuits, the `df_C` CNF encoding, proof checkers for R(1,w)
//!   and Extended Resolution.
//! * [`gamma`]: parameters, codebooks, the streamed clause family, DIMACS
//!   export and the total search-problem evaluators (explicit and
//!   circuit-described assignments).
//! * [`reduction`]: reductions of ER-refutable CNFs to `Γ(0,s,k)` by
//!   clause-substitution, with certificates and the oracle reduction.
//! * [`randgen`]: the random always-unsatisfiable `Γ(0,s,k)(C_r)` process and
//!   an external-solver benchmark harness.

pub mod error;
pub mod fixtures;
pub mod gamma;
pub mod logic;
pub mod randgen;
pub mod reduction;

pub use error::{Error, Result};
pub use gamma::{GammaParams, GammaVar};
pub use logic::{Circuit, Clause, Gate, Lit, Refutation, Var};
