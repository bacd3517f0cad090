use std::fmt;

use super::circuit::{gate_clauses, Gate, Instruction};
use super::clause::{Clause, CopyTag, Lit, Var};
use crate::error::{Error, Result};

/// How a proof line was obtained. Step references are 0-based indices of
/// earlier lines; `Initial` indexes the premise list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Justification {
    Initial(usize),
    OneAxiom,
    Weakening(usize),
    /// `Resolution(v, w, ℓ)`: `ℓ ∈ D_v`, `¬ℓ ∈ D_w`.
    Resolution(usize, usize, Lit),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProofStep {
    pub clause: Clause,
    pub rule: Justification,
}

impl ProofStep {
    pub fn new(clause: Clause, rule: Justification) -> Self {
        ProofStep { clause, rule }
    }
}

/// Why a single step was rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    PremiseOutOfRange { index: usize, premises: usize },
    PremiseMismatch { index: usize },
    NoConstantOne,
    ForwardReference { rule: &'static str, reference: usize },
    NotWeakening { missing: Option<Lit> },
    PivotMissing { pivot: Lit },
    ComplementMissing { pivot: Lit },
    ResolventMismatch { literal: Option<Lit>, expected: bool },
    FinalNotEmpty,
    NoSteps,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::PremiseOutOfRange { index, premises } => {
                write!(f, "init: premise {} out of range ({} premises)", index + 1, premises)
            }
            Violation::PremiseMismatch { index } => {
                write!(f, "init: clause differs from premise {}", index + 1)
            }
            Violation::NoConstantOne => write!(f, "oneax: clause does not contain 1"),
            Violation::ForwardReference { rule, reference } => {
                write!(f, "{rule}: reference {} is not an earlier step", reference + 1)
            }
            Violation::NotWeakening { missing: Some(l) } => {
                write!(f, "weak: literal {l} of the source is missing")
            }
            Violation::NotWeakening { missing: None } => {
                write!(f, "weak: constant 1 of the source is missing")
            }
            Violation::PivotMissing { pivot } => write!(f, "res: pivot {pivot} not in first premise"),
            Violation::ComplementMissing { pivot } => {
                write!(f, "res: {} not in second premise", !*pivot)
            }
            Violation::ResolventMismatch { literal: Some(l), expected: true } => {
                write!(f, "res: resolvent lacks {l}")
            }
            Violation::ResolventMismatch { literal: Some(l), expected: false } => {
                write!(f, "res: unexpected literal {l}")
            }
            Violation::ResolventMismatch { literal: None, expected } => {
                if *expected {
                    write!(f, "res: resolvent lacks constant 1")
                } else {
                    write!(f, "res: unexpected constant 1")
                }
            }
            Violation::FinalNotEmpty => write!(f, "final clause is not empty"),
            Violation::NoSteps => write!(f, "proof has no steps"),
        }
    }
}

fn earlier<'a>(
    steps: &'a [ProofStep],
    rule: &'static str,
    v: usize,
) -> std::result::Result<&'a Clause, Violation> {
    steps
        .get(v)
        .map(|s| &s.clause)
        .ok_or(Violation::ForwardReference { rule, reference: v })
}

/// Check one R(1,w) step against the premises and the steps before it.
pub fn check_step(
    premises: &[Clause],
    earlier_steps: &[ProofStep],
    step: &ProofStep,
) -> std::result::Result<(), Violation> {
    let c = &step.clause;
    match step.rule {
        Justification::Initial(i) => match premises.get(i) {
            None => Err(Violation::PremiseOutOfRange {
                index: i,
                premises: premises.len(),
            }),
            Some(p) if p != c => Err(Violation::PremiseMismatch { index: i }),
            Some(_) => Ok(()),
        },
        Justification::OneAxiom => {
            if c.has_one() {
                Ok(())
            } else {
                Err(Violation::NoConstantOne)
            }
        }
        Justification::Weakening(v) => {
            let src = earlier(earlier_steps, "weak", v)?;
            if src.has_one() && !c.has_one() {
                return Err(Violation::NotWeakening { missing: None });
            }
            match src.lits().find(|&l| !c.contains(l)) {
                Some(l) => Err(Violation::NotWeakening { missing: Some(l) }),
                None => Ok(()),
            }
        }
        Justification::Resolution(v, w, pivot) => {
            let cv = earlier(earlier_steps, "res", v)?;
            let cw = earlier(earlier_steps, "res", w)?;
            if !cv.contains(pivot) {
                return Err(Violation::PivotMissing { pivot });
            }
            if !cw.contains(!pivot) {
                return Err(Violation::ComplementMissing { pivot });
            }
            let expected = cv.resolve(cw, pivot);
            if expected.has_one() != c.has_one() {
                return Err(Violation::ResolventMismatch {
                    literal: None,
                    expected: expected.has_one(),
                });
            }
            if let Some(l) = expected.lits().find(|&l| !c.contains(l)) {
                return Err(Violation::ResolventMismatch {
                    literal: Some(l),
                    expected: true,
                });
            }
            if let Some(l) = c.lits().find(|&l| !expected.contains(l)) {
                return Err(Violation::ResolventMismatch {
                    literal: Some(l),
                    expected: false,
                });
            }
            Ok(())
        }
    }
}

/// A premise set together with an R(1,w) derivation from it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Refutation {
    pub premises: Vec<Clause>,
    pub steps: Vec<ProofStep>,
}

impl Refutation {
    pub fn new(premises: Vec<Clause>, steps: Vec<ProofStep>) -> Self {
        Refutation { premises, steps }
    }

    pub fn final_clause(&self) -> Option<&Clause> {
        self.steps.last().map(|s| &s.clause)
    }

    /// Every step is valid; the final clause may be anything.
    pub fn check_derivation(&self) -> Result<()> {
        for (u, step) in self.steps.iter().enumerate() {
            check_step(&self.premises, &self.steps[..u], step)
                .map_err(|violation| Error::Proof { step: u + 1, violation })?;
        }
        Ok(())
    }

    /// Every step is valid and the last one is the empty clause.
    pub fn check(&self) -> Result<()> {
        self.check_derivation()?;
        match self.final_clause() {
            None => Err(Error::Proof {
                step: 0,
                violation: Violation::NoSteps,
            }),
            Some(c) if !c.is_empty() => Err(Error::Proof {
                step: self.steps.len(),
                violation: Violation::FinalNotEmpty,
            }),
            Some(_) => Ok(()),
        }
    }

    /// Largest literal width of any line.
    pub fn width(&self) -> usize {
        self.steps.iter().map(|s| s.clause.width()).max().unwrap_or(0)
    }
}

/// An Extended Resolution refutation of `delta` (clauses over `x_1..x_n`).
///
/// Extension variable `y_i` is introduced by `extensions[i-1]`, written like a
/// circuit instruction; its three defining clauses become premises. The
/// premise list of `proof` is `delta` followed by those clauses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErRefutation {
    pub n: u32,
    pub delta: Vec<Clause>,
    pub extensions: Vec<Gate>,
    pub proof: Refutation,
}

impl ErRefutation {
    /// Builds the premise list from `delta` and `extensions`.
    pub fn new(n: u32, delta: Vec<Clause>, extensions: Vec<Gate>, steps: Vec<ProofStep>) -> Self {
        let premises = er_premises(&delta, &extensions);
        ErRefutation {
            n,
            delta,
            extensions,
            proof: Refutation::new(premises, steps),
        }
    }

    pub fn check(&self) -> Result<()> {
        for (k, c) in self.delta.iter().enumerate() {
            if c.has_one() {
                return Err(Error::Extension(format!("clause {} of delta contains 1", k + 1)));
            }
            for l in c.lits() {
                match l.var {
                    Var::X(i) if i >= 1 && i <= self.n => {}
                    _ => {
                        return Err(Error::Extension(format!(
                            "clause {} of delta mentions {} outside x1..x{}",
                            k + 1,
                            l.var,
                            self.n
                        )))
                    }
                }
            }
        }
        for (k, &gate) in self.extensions.iter().enumerate() {
            Instruction {
                target: k as u32 + 1,
                gate,
            }
            .validate(self.n)
            .map_err(|e| Error::Extension(e.to_string()))?;
        }
        if self.proof.premises != er_premises(&self.delta, &self.extensions) {
            return Err(Error::Extension(
                "premises must be delta followed by the extension clauses".into(),
            ));
        }
        let s = self.extensions.len() as u32;
        for (u, step) in self.proof.steps.iter().enumerate() {
            if let Some(l) = step.clause.lits().find(|l| match l.var {
                Var::X(i) => i == 0 || i > self.n,
                Var::Y(i) => i == 0 || i > s,
                Var::Z(_) => true,
            }) {
                return Err(Error::Extension(format!(
                    "step {} uses undefined variable {}",
                    u + 1,
                    l.var
                )));
            }
        }
        self.proof.check()
    }
}

pub fn er_premises(delta: &[Clause], extensions: &[Gate]) -> Vec<Clause> {
    let mut premises = delta.to_vec();
    for (k, &gate) in extensions.iter().enumerate() {
        premises.extend(gate_clauses(
            Instruction {
                target: k as u32 + 1,
                gate,
            },
            CopyTag::Y,
        ));
    }
    premises
}
