//! Resolution proof that a circuit computation is unique.
//!
//! From `df_C(x, y) ∪ df_C(x, z)` we derive, gate by gate, the two clauses
//! `{y_i, ¬z_i}` and `{¬y_i, z_i}`. The premises are listed first as initial
//! steps, then each gate costs at most [`STEPS_PER_GATE`] inferences.

use super::circuit::{Circuit, Gate};
use super::clause::{Clause, CopyTag, Lit, Var};
use super::proof::{Justification, ProofStep, Refutation};

/// Upper bound on the number of inferences added per gate.
pub const STEPS_PER_GATE: usize = 6;

/// Total steps are at most `UNIQUENESS_SLOPE * s` (6 initial + 6 derived per gate).
pub const UNIQUENESS_SLOPE: usize = 6 + STEPS_PER_GATE;

#[derive(Clone, Debug)]
pub struct UniquenessProof {
    pub derivation: Refutation,
    /// Step indices of `({y_i, ¬z_i}, {¬y_i, z_i})` for `i = 1..=s`.
    pub equivalences: Vec<(usize, usize)>,
}

impl UniquenessProof {
    pub fn output_equivalence(&self) -> (usize, usize) {
        *self.equivalences.last().expect("non-empty circuit")
    }
}

struct Builder {
    steps: Vec<ProofStep>,
}

impl Builder {
    fn clause(&self, u: usize) -> &Clause {
        &self.steps[u].clause
    }

    fn res(&mut self, v: usize, w: usize, pivot: Lit) -> usize {
        let c = self.clause(v).resolve(self.clause(w), pivot);
        self.steps
            .push(ProofStep::new(c, Justification::Resolution(v, w, pivot)));
        self.steps.len() - 1
    }

    fn weak(&mut self, v: usize, c: Clause) -> usize {
        self.steps.push(ProofStep::new(c, Justification::Weakening(v)));
        self.steps.len() - 1
    }
}

pub fn uniqueness_proof(circuit: &Circuit) -> UniquenessProof {
    let s = circuit.s() as usize;
    let mut premises = circuit.encode_df(CopyTag::Y);
    premises.extend(circuit.encode_df(CopyTag::Z));
    let mut b = Builder {
        steps: premises
            .iter()
            .enumerate()
            .map(|(k, c)| ProofStep::new(c.clone(), Justification::Initial(k)))
            .collect(),
    };
    let ytrip = |i: u32, p: usize| 3 * (i as usize - 1) + p;
    let ztrip = |i: u32, p: usize| 3 * s + 3 * (i as usize - 1) + p;
    let y = |i: u32| Var::Y(i).pos();
    let z = |i: u32| Var::Z(i).pos();

    let mut eq: Vec<(usize, usize)> = Vec::with_capacity(s);
    for ins in circuit.instructions() {
        let i = ins.target;
        let (e1, e2) = match ins.gate {
            Gate::Const0 => (
                b.weak(ztrip(i, 0), Clause::new([y(i), !z(i)])),
                b.weak(ytrip(i, 0), Clause::new([!y(i), z(i)])),
            ),
            Gate::Const1 => (
                b.weak(ytrip(i, 0), Clause::new([y(i), !z(i)])),
                b.weak(ztrip(i, 0), Clause::new([!y(i), z(i)])),
            ),
            Gate::Input(u) => {
                let x = Var::X(u).pos();
                (
                    b.res(ztrip(i, 1), ytrip(i, 0), x),
                    b.res(ytrip(i, 1), ztrip(i, 0), x),
                )
            }
            Gate::Not(j) => {
                let (ej1, ej2) = eq[j as usize - 1];
                let a = b.res(ytrip(i, 0), ej2, y(j));
                let e1 = b.res(a, ztrip(i, 1), z(j));
                let c = b.res(ztrip(i, 0), ej1, z(j));
                let e2 = b.res(c, ytrip(i, 1), y(j));
                (e1, e2)
            }
            Gate::Or(j, l) => {
                let (ej1, ej2) = eq[j as usize - 1];
                let (el1, el2) = eq[l as usize - 1];
                // {¬z_j, y_i}, {¬z_l, y_i}
                let aj = b.res(ej1, ytrip(i, 0), y(j));
                let al = if l == j { aj } else { b.res(el1, ytrip(i, 1), y(l)) };
                let mut e1 = b.res(ztrip(i, 2), aj, z(j));
                if l != j {
                    e1 = b.res(e1, al, z(l));
                }
                // {¬y_j, z_i}, {¬y_l, z_i}
                let cj = b.res(ej2, ztrip(i, 0), z(j));
                let cl = if l == j { cj } else { b.res(el2, ztrip(i, 1), z(l)) };
                let mut e2 = b.res(ytrip(i, 2), cj, y(j));
                if l != j {
                    e2 = b.res(e2, cl, y(l));
                }
                (e1, e2)
            }
            Gate::And(j, l) => {
                let (ej1, ej2) = eq[j as usize - 1];
                let (el1, el2) = eq[l as usize - 1];
                // {y_j, ¬z_i}, {y_l, ¬z_i}
                let aj = b.res(ztrip(i, 0), ej1, z(j));
                let al = if l == j { aj } else { b.res(ztrip(i, 1), el1, z(l)) };
                let mut e1 = b.res(aj, ytrip(i, 2), y(j));
                if l != j {
                    e1 = b.res(al, e1, y(l));
                }
                // {z_j, ¬y_i}, {z_l, ¬y_i}
                let cj = b.res(ytrip(i, 0), ej2, y(j));
                let cl = if l == j { cj } else { b.res(ytrip(i, 1), el2, y(l)) };
                let mut e2 = b.res(cj, ztrip(i, 2), z(j));
                if l != j {
                    e2 = b.res(cl, e2, z(l));
                }
                (e1, e2)
            }
        };
        eq.push((e1, e2));
    }
    UniquenessProof {
        derivation: Refutation::new(premises, b.steps),
        equivalences: eq,
    }
}
