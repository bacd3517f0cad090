//! The clause-substitution `σ` turning `Γ(0,s,k)` into a reduction to `Δ`.

use super::normalize::{NormalizedEr, StepRole};
use super::subst::{code_bits, sel, ClauseSubstitution, SubstItem};
use crate::error::{Error, Result};
use crate::gamma::{GammaParams, GammaVar, Inference};
use crate::logic::{Clause, Gate, Justification, Var};

/// `Γ` parameters matching a normalized refutation: `n = 0`, its `s` and `k`.
pub fn gamma_params_for(nr: &NormalizedEr) -> Result<GammaParams> {
    GammaParams::new(0, nr.s(), nr.k())
}

fn set_clause(sigma: &mut ClauseSubstitution, u: u32, c: &Clause) {
    let p = *sigma.params();
    for i in (-p.span()..=p.span()).filter(|&i| i != 0) {
        sigma.set(GammaVar::Q { u, i }, SubstItem::Zero);
    }
    for l in c.lits() {
        if let Var::Y(_) = l.var {
            sigma.set(GammaVar::Q { u, i: p.literal_index(l) }, SubstItem::One);
        }
    }
    let x = SubstItem::disjunction(c.x_part(), c.has_one());
    sigma.set(GammaVar::Q { u, i: 0 }, x);
}

fn set_code(sigma: &mut ClauseSubstitution, u: u32, items: Vec<SubstItem>) {
    for (v, it) in items.into_iter().enumerate() {
        sigma.set(GammaVar::P { u, v: v as u32 + 1 }, it);
    }
}

fn constant_code(t: u32, code: u64) -> Vec<SubstItem> {
    code_bits(code, t).into_iter().map(SubstItem::constant).collect()
}

/// Builds `σ` for `Γ(params)` from a normalized refutation.
pub fn build_substitution(nr: &NormalizedEr, params: GammaParams) -> Result<ClauseSubstitution> {
    if params.n() != 0 || params.s() != nr.s() || params.k() != nr.k() {
        return Err(Error::Substitution(format!(
            "parameters Γ({params}) do not match the refutation (s={}, k={})",
            nr.s(),
            nr.k()
        )));
    }
    let p = params;
    let t = p.t();
    let mut sigma = ClauseSubstitution::new(p);
    let inference = |u: u32, inf: Inference| -> Result<u64> {
        p.encode_inference(u, inf)
            .ok_or_else(|| Error::Substitution(format!("step {u}: no code for {inf:?}")))
    };

    for (k, (step, role)) in nr.steps.iter().zip(&nr.roles).enumerate() {
        let u = k as u32 + 1;
        match *role {
            StepRole::Definition { gate, pos } => {
                let g = nr.circuit.gate(gate);
                if let Gate::Input(j) = g {
                    let one = p.encode_instruction(gate, Gate::Const1).unwrap();
                    let zero = p.encode_instruction(gate, Gate::Const0).unwrap();
                    set_code(&mut sigma, u, sel(Var::X(j), &code_bits(one, t), &code_bits(zero, t))?);
                    for i in -p.span()..=p.span() {
                        sigma.set(GammaVar::Q { u, i }, SubstItem::Zero);
                    }
                    let y = gate as i32;
                    if pos == 0 {
                        sigma.set(GammaVar::Q { u, i: y }, SubstItem::Lit(Var::X(j).pos()));
                        sigma.set(GammaVar::Q { u, i: -y }, SubstItem::Lit(Var::X(j).neg()));
                    } else {
                        sigma.set(GammaVar::Q { u, i: 0 }, SubstItem::One);
                    }
                } else {
                    let code = p.encode_instruction(gate, g).ok_or_else(|| {
                        Error::Substitution(format!("gate {gate}: {g:?} is not in the codebook"))
                    })?;
                    set_code(&mut sigma, u, constant_code(t, code));
                    set_clause(&mut sigma, u, &step.clause);
                }
            }
            StepRole::Delta(_) => {
                set_code(&mut sigma, u, constant_code(t, inference(u, Inference::OneAxiom)?));
                set_clause(&mut sigma, u, &step.clause);
            }
            StepRole::CopyPositive { gate } | StepRole::CopyNegative { gate } => {
                let Gate::Input(j) = nr.circuit.gate(gate) else {
                    return Err(Error::Substitution(format!("gate {gate} is not a copy-gate")));
                };
                let weak = code_bits(inference(u, Inference::Weakening(3 * gate - 2))?, t);
                let one = code_bits(inference(u, Inference::OneAxiom)?, t);
                let items = if matches!(role, StepRole::CopyPositive { .. }) {
                    sel(Var::X(j), &weak, &one)?
                } else {
                    sel(Var::X(j), &one, &weak)?
                };
                set_code(&mut sigma, u, items);
                set_clause(&mut sigma, u, &step.clause);
            }
            StepRole::Body => {
                let items = match step.rule {
                    Justification::Weakening(v) => {
                        constant_code(t, inference(u, Inference::Weakening(v as u32 + 1))?)
                    }
                    Justification::Resolution(v, w, l) => match l.var {
                        Var::Y(_) => {
                            let inf = Inference::Resolution {
                                v: v as u32 + 1,
                                w: w as u32 + 1,
                                i: p.literal_index(l),
                            };
                            constant_code(t, inference(u, inf)?)
                        }
                        Var::X(i) => {
                            let (e, f) = if l.positive { (v, w) } else { (w, v) };
                            let from_f = inference(u, Inference::Weakening(f as u32 + 1))?;
                            let from_e = inference(u, Inference::Weakening(e as u32 + 1))?;
                            sel(Var::X(i), &code_bits(from_f, t), &code_bits(from_e, t))?
                        }
                        Var::Z(_) => {
                            return Err(Error::Substitution(format!("step {u}: z variable")))
                        }
                    },
                    _ => {
                        return Err(Error::Substitution(format!(
                            "step {u}: body steps are resolutions or weakenings"
                        )))
                    }
                };
                set_code(&mut sigma, u, items);
                set_clause(&mut sigma, u, &step.clause);
            }
        }
    }
    Ok(sigma)
}
