//! Line-oriented text formats for circuits, proofs, ER refutations and
//! plain DIMACS CNFs over `x` variables.
//!
//! Blank lines and lines starting with `#` are ignored everywhere. Step and
//! premise numbers are 1-based in text and 0-based in memory.

use std::fmt::Write as _;

use super::circuit::{Circuit, Gate};
use super::clause::{Clause, Lit, Var};
use super::proof::{ErRefutation, Justification, ProofStep, Refutation};
use crate::error::{Error, Result};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn header_field(line: usize, tok: Option<&str>, key: &str) -> Result<u64> {
    let tok = tok.ok_or_else(|| Error::parse(line, format!("missing {key}=")))?;
    tok.strip_prefix(key)
        .and_then(|t| t.strip_prefix('='))
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::parse(line, format!("expected {key}=<number>, got {tok:?}")))
}

fn number(line: usize, tok: Option<&str>, what: &str) -> Result<u32> {
    tok.and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::parse(line, format!("expected {what}")))
}

fn gate_ref(line: usize, tok: Option<&str>) -> Result<u32> {
    tok.and_then(|t| t.strip_prefix('y'))
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::parse(line, "expected y<j>"))
}

pub fn parse_lit(tok: &str) -> Option<Lit> {
    let (positive, rest) = match tok.strip_prefix('-') {
        Some(r) => (false, r),
        None => (true, tok),
    };
    let mut chars = rest.chars();
    let fam = chars.next()?;
    let idx: u32 = chars.as_str().parse().ok()?;
    if idx == 0 {
        return None;
    }
    let var = match fam {
        'x' => Var::X(idx),
        'y' => Var::Y(idx),
        'z' => Var::Z(idx),
        _ => return None,
    };
    Some(var.lit(positive))
}

// ---------------------------------------------------------------- circuits

/// Parses `circuit n=<n> s=<s>` followed by `s` instruction lines.
pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut lines = content_lines(text);
    let (n, gates) = parse_circuit_block(&mut lines, false)?;
    if let Some((line, _)) = lines.next() {
        return Err(Error::parse(line, "trailing content after circuit"));
    }
    Circuit::new(n, gates)
}

fn parse_circuit_block<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    allow_empty: bool,
) -> Result<(u32, Vec<Gate>)> {
    let (line, header) = lines
        .next()
        .ok_or_else(|| Error::parse(0, "missing circuit header"))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("circuit") {
        return Err(Error::parse(line, "expected `circuit n=<n> s=<s>`"));
    }
    let n = header_field(line, toks.next(), "n")? as u32;
    let s = header_field(line, toks.next(), "s")? as u32;
    if s == 0 && !allow_empty {
        return Err(Error::parse(line, "s must be at least 1"));
    }
    let mut gates = Vec::with_capacity(s as usize);
    for r in 1..=s {
        let (line, l) = lines
            .next()
            .ok_or_else(|| Error::parse(line, format!("missing instruction {r}")))?;
        let mut toks = l.split_whitespace();
        let target = number(line, toks.next(), "instruction number")?;
        if target != r {
            return Err(Error::parse(line, format!("expected instruction {r}, got {target}")));
        }
        if toks.next() != Some(":=") {
            return Err(Error::parse(line, "expected `:=`"));
        }
        let gate = match toks.next() {
            Some("0") => Gate::Const0,
            Some("1") => Gate::Const1,
            Some("not") => Gate::Not(gate_ref(line, toks.next())?),
            Some("or") => Gate::Or(gate_ref(line, toks.next())?, gate_ref(line, toks.next())?),
            Some("and") => Gate::And(gate_ref(line, toks.next())?, gate_ref(line, toks.next())?),
            Some(t) if t.starts_with('x') => Gate::Input(
                t[1..]
                    .parse()
                    .map_err(|_| Error::parse(line, format!("bad input {t:?}")))?,
            ),
            other => return Err(Error::parse(line, format!("unknown instruction {other:?}"))),
        };
        if let Some(t) = toks.next() {
            return Err(Error::parse(line, format!("unexpected token {t:?}")));
        }
        gates.push(gate);
    }
    Ok((n, gates))
}

pub fn write_circuit(c: &Circuit) -> String {
    write_gates(c.n(), c.gates())
}

fn write_gates(n: u32, gates: &[Gate]) -> String {
    let mut out = format!("circuit n={} s={}\n", n, gates.len());
    for (k, &gate) in gates.iter().enumerate() {
        let ins = super::circuit::Instruction {
            target: k as u32 + 1,
            gate,
        };
        writeln!(out, "{ins}").unwrap();
    }
    out
}

/// Instructions joined with `;` on one line, for DIMACS comments.
pub fn circuit_inline(c: &Circuit) -> String {
    c.instructions()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

// ------------------------------------------------------------------ proofs

/// A proof file: `premises` is only the declared count; the clauses of
/// initial steps are whatever the file says.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofText {
    pub premise_count: usize,
    pub steps: Vec<ProofStep>,
}

impl ProofText {
    /// Premise list implied by the initial steps. Fails if two initial steps
    /// with the same index disagree or an index was never used.
    pub fn implied_premises(&self) -> Result<Vec<Clause>> {
        let mut slots: Vec<Option<Clause>> = vec![None; self.premise_count];
        for (u, s) in self.steps.iter().enumerate() {
            if let Justification::Initial(i) = s.rule {
                let slot = slots.get_mut(i).ok_or_else(|| {
                    Error::parse(0, format!("step {}: premise {} out of range", u + 1, i + 1))
                })?;
                match slot {
                    Some(c) if *c != s.clause => {
                        return Err(Error::parse(
                            0,
                            format!("step {}: premise {} used with two clauses", u + 1, i + 1),
                        ))
                    }
                    _ => *slot = Some(s.clause.clone()),
                }
            }
        }
        // unused premises are unconstrained; `{1}` keeps them harmless
        Ok(slots.into_iter().map(|c| c.unwrap_or_else(Clause::one)).collect())
    }

    pub fn into_refutation(self, premises: Vec<Clause>) -> Refutation {
        Refutation::new(premises, self.steps)
    }
}

pub fn parse_proof(text: &str) -> Result<ProofText> {
    let mut lines = content_lines(text);
    let p = parse_proof_block(&mut lines)?;
    if let Some((line, _)) = lines.next() {
        return Err(Error::parse(line, "trailing content after proof"));
    }
    Ok(p)
}

fn parse_proof_block<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>) -> Result<ProofText> {
    let (line, header) = lines
        .next()
        .ok_or_else(|| Error::parse(0, "missing proof header"))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("proof") {
        return Err(Error::parse(line, "expected `proof premises=<count>`"));
    }
    let premise_count = header_field(line, toks.next(), "premises")? as usize;
    let mut steps = Vec::new();
    for (line, l) in lines {
        let (lhs, rhs) = l
            .split_once(';')
            .ok_or_else(|| Error::parse(line, "missing `;` before justification"))?;
        let mut toks = lhs.split_whitespace();
        let num = number(line, toks.next(), "step number")? as usize;
        if num != steps.len() + 1 {
            return Err(Error::parse(line, format!("expected step {}, got {num}", steps.len() + 1)));
        }
        let mut clause = Clause::empty();
        let mut saw_empty = false;
        for t in toks {
            match t {
                "empty" => saw_empty = true,
                "1" => clause.set_one(true),
                _ => {
                    let lit = parse_lit(t)
                        .ok_or_else(|| Error::parse(line, format!("bad literal {t:?}")))?;
                    clause.insert(lit);
                }
            }
        }
        if saw_empty && !clause.is_empty() {
            return Err(Error::parse(line, "`empty` mixed with literals"));
        }
        let mut toks = rhs.split_whitespace();
        let idx = |t: Option<&str>, what: &str| -> Result<usize> {
            let n = number(line, t, what)? as usize;
            n.checked_sub(1)
                .ok_or_else(|| Error::parse(line, format!("{what} numbers start at 1")))
        };
        let rule = match toks.next() {
            Some("init") => Justification::Initial(idx(toks.next(), "premise")?),
            Some("oneax") => Justification::OneAxiom,
            Some("weak") => Justification::Weakening(idx(toks.next(), "step")?),
            Some("res") => {
                let v = idx(toks.next(), "step")?;
                let w = idx(toks.next(), "step")?;
                let pivot = toks
                    .next()
                    .and_then(parse_lit)
                    .ok_or_else(|| Error::parse(line, "expected pivot literal"))?;
                Justification::Resolution(v, w, pivot)
            }
            other => return Err(Error::parse(line, format!("unknown rule {other:?}"))),
        };
        if let Some(t) = toks.next() {
            return Err(Error::parse(line, format!("unexpected token {t:?}")));
        }
        steps.push(ProofStep::new(clause, rule));
    }
    Ok(ProofText {
        premise_count,
        steps,
    })
}

pub fn write_proof(r: &Refutation) -> String {
    write_steps(r.premises.len(), &r.steps)
}

pub fn write_steps(premise_count: usize, steps: &[ProofStep]) -> String {
    let mut out = format!("proof premises={premise_count}\n");
    for (u, s) in steps.iter().enumerate() {
        write!(out, "{} {} ; ", u + 1, s.clause).unwrap();
        match s.rule {
            Justification::Initial(i) => writeln!(out, "init {}", i + 1),
            Justification::OneAxiom => writeln!(out, "oneax"),
            Justification::Weakening(v) => writeln!(out, "weak {}", v + 1),
            Justification::Resolution(v, w, l) => writeln!(out, "res {} {} {l}", v + 1, w + 1),
        }
        .unwrap();
    }
    out
}

// --------------------------------------------------------- ER refutations

/// An ER file is a circuit block (the extension definitions, `s` may be 0)
/// followed by a proof block whose premises are `delta` then the extension
/// clauses.
pub fn parse_er(text: &str, delta: Vec<Clause>) -> Result<ErRefutation> {
    let mut lines = content_lines(text);
    let (n, gates) = parse_circuit_block(&mut lines, true)?;
    let proof = parse_proof_block(&mut lines)?;
    let er = ErRefutation::new(n, delta, gates, proof.steps);
    if proof.premise_count != er.proof.premises.len() {
        return Err(Error::parse(
            0,
            format!(
                "proof declares {} premises, delta and extensions give {}",
                proof.premise_count,
                er.proof.premises.len()
            ),
        ));
    }
    Ok(er)
}

pub fn write_er(er: &ErRefutation) -> String {
    let mut out = write_gates(er.n, &er.extensions);
    out.push_str(&write_proof(&er.proof));
    out
}

// ----------------------------------------------------------------- DIMACS

/// A CNF over `x_1..x_n` read from DIMACS.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: u32,
    pub clauses: Vec<Clause>,
}

pub fn parse_dimacs(text: &str) -> Result<Cnf> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Clause::empty();
    let mut open = false;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('c') || l.starts_with('%') {
            continue;
        }
        if l.starts_with('p') {
            let mut toks = l.split_whitespace().skip(1);
            if toks.next() != Some("cnf") {
                return Err(Error::parse(line, "expected `p cnf <vars> <clauses>`"));
            }
            let v = number(line, toks.next(), "variable count")?;
            let c = number(line, toks.next(), "clause count")? as usize;
            header = Some((v, c));
            continue;
        }
        for t in l.split_whitespace() {
            let x: i64 = t
                .parse()
                .map_err(|_| Error::parse(line, format!("bad literal {t:?}")))?;
            if x == 0 {
                clauses.push(std::mem::take(&mut current));
                open = false;
            } else {
                let var = Var::X(x.unsigned_abs() as u32);
                current.insert(var.lit(x > 0));
                open = true;
            }
        }
    }
    if open {
        clauses.push(current);
    }
    let (num_vars, declared) = header.ok_or_else(|| Error::parse(0, "missing `p cnf` header"))?;
    if declared != clauses.len() {
        return Err(Error::parse(
            0,
            format!("header declares {declared} clauses, found {}", clauses.len()),
        ));
    }
    if let Some(c) = clauses
        .iter()
        .find(|c| c.lits().any(|l| l.var.index() > num_vars))
    {
        return Err(Error::parse(0, format!("clause {c} exceeds {num_vars} variables")));
    }
    Ok(Cnf { num_vars, clauses })
}

pub fn write_dimacs(cnf: &Cnf) -> String {
    let mut out = format!("p cnf {} {}\n", cnf.num_vars, cnf.clauses.len());
    for c in &cnf.clauses {
        for l in c.lits() {
            let v = l.var.index() as i64;
            write!(out, "{} ", if l.positive { v } else { -v }).unwrap();
        }
        out.push_str("0\n");
    }
    out
}
