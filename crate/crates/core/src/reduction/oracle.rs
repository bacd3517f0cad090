//! Answering the search problem for `Δ` through a reduction from `Γ`.

use std::cell::{Cell, RefCell};
use std::collections::HashMap;

use super::subst::ClauseSubstitution;
use super::verify::{classify, Case};
use crate::error::{Error, Result};
use crate::gamma::{find_falsified, FalsifiedClause, GammaAssignment, GammaVar};
use crate::logic::{Clause, Var};

/// Result of [`apply_oracle`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleAnswer {
    pub gamma_clause: FalsifiedClause,
    /// Index into `Δ` (0-based) and the clause itself.
    pub delta_index: usize,
    pub delta_clause: Clause,
    /// Largest number of `α` queries made to evaluate one `Γ` variable.
    pub max_queries_per_var: usize,
    pub total_queries: u64,
}

/// `α ∘ σ`, evaluated lazily and memoized per `Γ` variable.
struct Composed<'a> {
    sigma: &'a ClauseSubstitution,
    alpha: &'a [bool],
    cache: RefCell<HashMap<GammaVar, bool>>,
    max_queries: Cell<usize>,
    total: Cell<u64>,
}

impl GammaAssignment for Composed<'_> {
    fn value(&self, var: GammaVar) -> bool {
        if let Some(&b) = self.cache.borrow().get(&var) {
            return b;
        }
        let mut queries = 0usize;
        let b = self.sigma.get(var).eval(|v| {
            queries += 1;
            match v {
                Var::X(i) => self.alpha[i as usize - 1],
                _ => unreachable!("substitution items range over x"),
            }
        });
        self.max_queries.set(self.max_queries.get().max(queries));
        self.total.set(self.total.get() + queries as u64);
        self.cache.borrow_mut().insert(var, b);
        b
    }
}

/// Finds a clause of `Δ` falsified by `α` (`alpha[i-1]` is `x_i`) by
/// locating a clause of `Γ` falsified by `α ∘ σ`.
pub fn apply_oracle(delta: &[Clause], sigma: &ClauseSubstitution, alpha: &[bool]) -> Result<OracleAnswer> {
    let needed = sigma.max_input() as usize;
    if alpha.len() < needed {
        return Err(Error::Substitution(format!(
            "assignment gives {} values, σ mentions x{needed}",
            alpha.len()
        )));
    }
    let a = Composed {
        sigma,
        alpha,
        cache: RefCell::new(HashMap::new()),
        max_queries: Cell::new(0),
        total: Cell::new(0),
    };
    let p = *sigma.params();
    let gamma_clause = find_falsified(&p, &a)?;
    let lits = &gamma_clause.clause.lits;
    let case = classify(lits, sigma, delta);
    let Some(Case::C { delta: d }) = case else {
        return Err(Error::Certification(format!(
            "clause at position {} is falsified by α∘σ but classified as {:?}",
            gamma_clause.position, case
        )));
    };
    let index = d;
    let falsified = |c: &Clause| !c.eval(|v| alpha[v.index() as usize - 1]);
    let delta_clause = delta[index].clone();
    if !falsified(&delta_clause) {
        return Err(Error::Certification(
            "the contained clause of Δ is satisfied by α".into(),
        ));
    }
    Ok(OracleAnswer {
        gamma_clause,
        delta_index: index,
        delta_clause,
        max_queries_per_var: a.max_queries.get(),
        total_queries: a.total.get(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{ErRefutation, Justification::*, ProofStep};
    use crate::reduction::{build_substitution, gamma_params_for, normalize_er};

    #[test]
    fn one_variable_contradiction() {
        let x1 = Var::X(1);
        let delta = vec![Clause::new([x1.pos()]), Clause::new([x1.neg()])];
        let steps = vec![
            ProofStep::new(delta[0].clone(), Initial(0)),
            ProofStep::new(delta[1].clone(), Initial(1)),
            ProofStep::new(Clause::empty(), Resolution(0, 1, x1.pos())),
        ];
        let nr = normalize_er(&ErRefutation::new(1, delta.clone(), vec![], steps)).unwrap();
        let sigma = build_substitution(&nr, gamma_params_for(&nr).unwrap()).unwrap();
        let ans = apply_oracle(&delta, &sigma, &[false]).unwrap();
        assert_eq!(ans.delta_clause, delta[0]);
        let ans = apply_oracle(&delta, &sigma, &[true]).unwrap();
        assert_eq!(ans.delta_clause, delta[1]);
        assert!(ans.max_queries_per_var <= 1);
    }
}
