use std::collections::HashMap;

use super::clause::{Clause, Var};
use super::proof::{Justification, ProofStep, Refutation};

/// `C|ρ`: literals false under `ρ` are deleted, a literal true under `ρ`
/// turns into the constant 1.
pub fn restrict_clause(c: &Clause, rho: &HashMap<Var, bool>) -> Clause {
    let mut one = c.has_one();
    let mut lits = Vec::with_capacity(c.width());
    for l in c.lits() {
        match rho.get(&l.var) {
            Some(&v) => one |= l.eval(v),
            None => lits.push(l),
        }
    }
    Clause::with_one(lits, one)
}

/// Substitutes constants into an R(1,w) derivation.
///
/// Every line is restricted by `ρ`; resolutions on assigned variables become
/// weakenings of the premise whose pivot literal is falsified. Initial steps
/// point at the restricted premise set, so premises satisfied by `ρ` simply
/// become clauses containing 1. The result is a valid derivation of
/// `final|ρ` from the restricted premises whenever the input is valid.
pub fn substitute_constants(r: &Refutation, rho: &HashMap<Var, bool>) -> Refutation {
    let premises = r.premises.iter().map(|c| restrict_clause(c, rho)).collect();
    let steps = r
        .steps
        .iter()
        .map(|step| {
            let clause = restrict_clause(&step.clause, rho);
            let rule = match step.rule {
                Justification::Resolution(v, w, pivot) => match rho.get(&pivot.var) {
                    None => step.rule,
                    // the pivot is true, so ¬pivot vanishes from D_w
                    Some(&val) if pivot.eval(val) => Justification::Weakening(w),
                    Some(_) => Justification::Weakening(v),
                },
                other => other,
            };
            ProofStep::new(clause, rule)
        })
        .collect();
    Refutation::new(premises, steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Lit;
    use Justification::*;

    fn lit(v: Var, p: bool) -> Lit {
        v.lit(p)
    }

    fn sample() -> Refutation {
        let (x, y) = (Var::X(1), Var::X(2));
        let premises = vec![
            Clause::new([lit(x, true)]),
            Clause::new([lit(x, false), lit(y, true)]),
            Clause::new([lit(y, false)]),
        ];
        let steps = vec![
            ProofStep::new(premises[0].clone(), Initial(0)),
            ProofStep::new(premises[1].clone(), Initial(1)),
            ProofStep::new(premises[2].clone(), Initial(2)),
            ProofStep::new(Clause::new([lit(y, true)]), Resolution(0, 1, lit(x, true))),
            ProofStep::new(Clause::empty(), Resolution(3, 2, lit(y, true))),
        ];
        Refutation::new(premises, steps)
    }

    #[test]
    fn empty_rho_is_identity() {
        let r = sample();
        assert_eq!(substitute_constants(&r, &HashMap::new()), r);
    }

    #[test]
    fn every_assignment_keeps_validity() {
        let r = sample();
        r.check().unwrap();
        for bits in 0..9u32 {
            let mut rho = HashMap::new();
            for (k, v) in [Var::X(1), Var::X(2)].into_iter().enumerate() {
                match (bits / 3u32.pow(k as u32)) % 3 {
                    0 => {}
                    1 => {
                        rho.insert(v, false);
                    }
                    _ => {
                        rho.insert(v, true);
                    }
                }
            }
            substitute_constants(&r, &rho).check().unwrap();
        }
    }

    #[test]
    fn resolution_on_true_pivot_becomes_weakening() {
        let r = sample();
        let rho = HashMap::from([(Var::X(1), true)]);
        let out = substitute_constants(&r, &rho);
        assert_eq!(out.steps[3].rule, Weakening(1));
        assert_eq!(out.premises[0], Clause::one());
    }
}
