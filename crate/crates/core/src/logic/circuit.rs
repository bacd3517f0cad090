use std::fmt;

use super::clause::{Clause, CopyTag, Var};
use crate::error::{Error, Result};

/// Right-hand side of one straight-line instruction `y_i := ...`.
///
/// Gate indices are 1-based and refer to earlier gates; `Input(u)` reads `x_u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    Const0,
    Const1,
    Input(u32),
    Not(u32),
    Or(u32, u32),
    And(u32, u32),
}

/// An instruction together with its target index `i` (computing `y_i`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Instruction {
    pub target: u32,
    pub gate: Gate,
}

impl Instruction {
    pub fn validate(&self, n: u32) -> Result<()> {
        let i = self.target;
        let bad = |msg: String| Err(Error::Circuit(format!("y{i}: {msg}")));
        if i == 0 {
            return bad("gate indices start at 1".into());
        }
        match self.gate {
            Gate::Const0 | Gate::Const1 => Ok(()),
            Gate::Input(u) if u == 0 || u > n => bad(format!("input x{u} out of range 1..={n}")),
            Gate::Input(_) => Ok(()),
            Gate::Not(j) if j == 0 || j >= i => bad(format!("reference y{j} is not earlier")),
            Gate::Or(j, l) | Gate::And(j, l) if j == 0 || l == 0 || j >= i || l >= i => {
                bad(format!("references y{j}, y{l} must be earlier"))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} := ", self.target)?;
        match self.gate {
            Gate::Const0 => write!(f, "0"),
            Gate::Const1 => write!(f, "1"),
            Gate::Input(u) => write!(f, "x{u}"),
            Gate::Not(j) => write!(f, "not y{j}"),
            Gate::Or(j, l) => write!(f, "or y{j} y{l}"),
            Gate::And(j, l) => write!(f, "and y{j} y{l}"),
        }
    }
}

/// A straight-line program computing `y_1..y_s` from `x_1..x_n`; the output is `y_s`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Circuit {
    n: u32,
    gates: Vec<Gate>,
}

/// Result of running a circuit on an input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub y: Vec<bool>,
    pub output: bool,
}

impl Circuit {
    pub fn new(n: u32, gates: Vec<Gate>) -> Result<Self> {
        if gates.is_empty() {
            return Err(Error::Circuit("a circuit needs at least one instruction".into()));
        }
        let c = Circuit { n, gates };
        for ins in c.instructions() {
            ins.validate(n)?;
        }
        Ok(c)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn s(&self) -> u32 {
        self.gates.len() as u32
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Gate of `y_i` (1-based).
    pub fn gate(&self, i: u32) -> Gate {
        self.gates[i as usize - 1]
    }

    pub fn instructions(&self) -> impl Iterator<Item = Instruction> + '_ {
        self.gates.iter().enumerate().map(|(k, &gate)| Instruction {
            target: k as u32 + 1,
            gate,
        })
    }

    pub fn evaluate(&self, input: &[bool]) -> Result<Evaluation> {
        if input.len() != self.n as usize {
            return Err(Error::Circuit(format!(
                "expected {} input bits, got {}",
                self.n,
                input.len()
            )));
        }
        let mut y: Vec<bool> = Vec::with_capacity(self.gates.len());
        for &g in &self.gates {
            let at = |j: u32| y[j as usize - 1];
            let v = match g {
                Gate::Const0 => false,
                Gate::Const1 => true,
                Gate::Input(u) => input[u as usize - 1],
                Gate::Not(j) => !at(j),
                Gate::Or(j, l) => at(j) || at(l),
                Gate::And(j, l) => at(j) && at(l),
            };
            y.push(v);
        }
        let output = *y.last().expect("non-empty circuit");
        Ok(Evaluation { y, output })
    }

    /// The `df_C` encoding: exactly three clauses per instruction, instruction
    /// `r` occupying positions `3r-2, 3r-1, 3r`, padded with `{1}`.
    pub fn encode_df(&self, tag: CopyTag) -> Vec<Clause> {
        let mut out = Vec::with_capacity(3 * self.gates.len());
        for ins in self.instructions() {
            out.extend(gate_clauses(ins, tag));
        }
        out
    }
}

/// The clause triple of a single instruction.
pub fn gate_clauses(ins: Instruction, tag: CopyTag) -> [Clause; 3] {
    let yi = tag.var(ins.target);
    let y = |j: u32| tag.var(j);
    match ins.gate {
        Gate::Const0 => [Clause::new([yi.neg()]), Clause::one(), Clause::one()],
        Gate::Const1 => [Clause::new([yi.pos()]), Clause::one(), Clause::one()],
        Gate::Input(u) => {
            let x = Var::X(u);
            [
                Clause::new([yi.pos(), x.neg()]),
                Clause::new([yi.neg(), x.pos()]),
                Clause::one(),
            ]
        }
        Gate::Not(j) => [
            Clause::new([yi.pos(), y(j).pos()]),
            Clause::new([yi.neg(), y(j).neg()]),
            Clause::one(),
        ],
        Gate::Or(j, l) => [
            Clause::new([y(j).neg(), yi.pos()]),
            Clause::new([y(l).neg(), yi.pos()]),
            Clause::new([yi.neg(), y(j).pos(), y(l).pos()]),
        ],
        // dual of the Or triple
        Gate::And(j, l) => [
            Clause::new([y(j).pos(), yi.neg()]),
            Clause::new([y(l).pos(), yi.neg()]),
            Clause::new([yi.pos(), y(j).neg(), y(l).neg()]),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: u32, gates: &[Gate]) -> Circuit {
        Circuit::new(n, gates.to_vec()).unwrap()
    }

    #[test]
    fn df_examples() {
        let (y1, y2, x1) = (Var::Y(1), Var::Y(2), Var::X(1));
        assert_eq!(
            c(0, &[Gate::Const0]).encode_df(CopyTag::Y),
            vec![Clause::new([y1.neg()]), Clause::one(), Clause::one()]
        );
        let or = c(0, &[Gate::Const1, Gate::Or(1, 1)]).encode_df(CopyTag::Y);
        assert_eq!(
            or[3..].to_vec(),
            vec![
                Clause::new([y1.neg(), y2.pos()]),
                Clause::new([y1.neg(), y2.pos()]),
                Clause::new([y2.neg(), y1.pos()]),
            ]
        );
        assert_eq!(
            c(1, &[Gate::Input(1)]).encode_df(CopyTag::Y),
            vec![
                Clause::new([y1.pos(), x1.neg()]),
                Clause::new([y1.neg(), x1.pos()]),
                Clause::one()
            ]
        );
        let and = c(0, &[Gate::Const1, Gate::And(1, 1)]).encode_df(CopyTag::Y);
        assert_eq!(
            and[3..].to_vec(),
            vec![
                Clause::new([y2.neg(), y1.pos()]),
                Clause::new([y2.neg(), y1.pos()]),
                Clause::new([y2.pos(), y1.neg()]),
            ]
        );
    }

    /// Every clause of a triple is implied by the gate semantics, and together
    /// they force the gate value (truth-table check).
    #[test]
    fn triples_match_truth_tables() {
        let gates = [Gate::Not(1), Gate::Or(1, 2), Gate::And(1, 2), Gate::Or(2, 2), Gate::And(1, 1)];
        for g in gates {
            let ins = Instruction { target: 3, gate: g };
            let triple = gate_clauses(ins, CopyTag::Y);
            for bits in 0u8..8 {
                let (a, b, out) = (bits & 1 != 0, bits & 2 != 0, bits & 4 != 0);
                let val = |v: Var| match v {
                    Var::Y(1) => a,
                    Var::Y(2) => b,
                    Var::Y(3) => out,
                    _ => unreachable!(),
                };
                let want = match g {
                    Gate::Not(1) => !a,
                    Gate::Or(j, l) => val(Var::Y(j)) || val(Var::Y(l)),
                    Gate::And(j, l) => val(Var::Y(j)) && val(Var::Y(l)),
                    _ => unreachable!(),
                };
                let sat = triple.iter().all(|cl| cl.eval(val));
                assert_eq!(sat, out == want, "{g:?} bits {bits:03b}");
            }
        }
    }

    #[test]
    fn evaluate_examples() {
        let e = c(0, &[Gate::Const1]).evaluate(&[]).unwrap();
        assert_eq!((e.y, e.output), (vec![true], true));
        let e = c(1, &[Gate::Input(1), Gate::Not(1)]).evaluate(&[false]).unwrap();
        assert_eq!((e.y, e.output), (vec![false, true], true));
        assert!(c(1, &[Gate::Input(1)]).evaluate(&[]).is_err());
    }

    #[test]
    fn rejects_malformed() {
        assert!(Circuit::new(0, vec![Gate::Input(1)]).is_err());
        assert!(Circuit::new(0, vec![Gate::Not(1)]).is_err());
        assert!(Circuit::new(0, vec![Gate::Const0, Gate::Or(1, 2)]).is_err());
        assert!(Circuit::new(0, vec![]).is_err());
    }
}
