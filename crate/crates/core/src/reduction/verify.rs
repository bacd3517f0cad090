//! Checking that a clause-substitution reduces `Γ` to `Δ`.
//!
//! Under `σ` a clause of `Γ` becomes a sequent: a negative literal `¬v`
//! contributes the antecedent item `σ(v)`, a positive literal `v` the
//! succedent item `σ(v)`. The substituted clause is the disjunction of the
//! negated antecedent items and the succedent items. Its flat literal
//! content `F*` collects the succedent literals and `¬l` for every
//! antecedent item that is a single literal `l`. A clause is classified as
//!
//! * (a) an antecedent item is `0` or a succedent item is `1`;
//! * (b) the literals of some non-constant antecedent item lie in `F*`,
//!   where a succedent item that is a single literal `l` also counts as the
//!   antecedent item `¬l`;
//! * (c) `F*` contains every literal of some clause of `Δ`.

use std::fmt;
use std::io::Write;

use rayon::prelude::*;

use super::subst::{ClauseSubstitution, SubstItem};
use crate::error::{Error, Result};
use crate::gamma::{ClauseKey, GammaLit, GammaParams, GammaVar, Segment};
use crate::logic::{Clause, Lit};

/// How a substituted clause is seen to be valid or implied by `Δ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Case {
    A,
    /// Antecedent literal `ante` is covered by succedent literal `succ`, or
    /// by the flat content of the whole clause when `succ` is `None`.
    B { ante: usize, succ: Option<usize> },
    /// Contains clause `delta` of `Δ` (0-based).
    C { delta: usize },
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Case::A => f.write_str("a"),
            Case::B { ante, succ: Some(j) } => write!(f, "b {ante} {j}"),
            Case::B { ante, succ: None } => write!(f, "b {ante} *"),
            Case::C { delta } => write!(f, "c {delta}"),
        }
    }
}

impl Case {
    pub fn parse(text: &str) -> Option<Case> {
        let toks: Vec<&str> = text.split_whitespace().collect();
        match toks.as_slice() {
            ["a"] => Some(Case::A),
            ["b", i, "*"] => Some(Case::B { ante: i.parse().ok()?, succ: None }),
            ["b", i, j] => Some(Case::B { ante: i.parse().ok()?, succ: Some(j.parse().ok()?) }),
            ["c", d] => Some(Case::C { delta: d.parse().ok()? }),
            _ => None,
        }
    }
}

fn flat_content(lits: &[GammaLit], sigma: &ClauseSubstitution) -> Vec<Lit> {
    let mut f = Vec::new();
    for gl in lits {
        match (gl.positive, sigma.get(gl.var)) {
            (true, it) => f.extend_from_slice(it.lits()),
            (false, SubstItem::Lit(l)) => f.push(!*l),
            _ => {}
        }
    }
    f.sort();
    f.dedup();
    f
}

fn subset(small: &[Lit], sorted: &[Lit]) -> bool {
    small.iter().all(|l| sorted.binary_search(l).is_ok())
}

/// Literals of literal `i` read as an antecedent item: the item of a
/// negative literal, or `{¬l}` for a positive literal whose item is `l`.
fn antecedent_lits(lits: &[GammaLit], i: usize, sigma: &ClauseSubstitution) -> Option<Vec<Lit>> {
    let gl = lits.get(i)?;
    match (gl.positive, sigma.get(gl.var)) {
        (false, SubstItem::Lit(l)) => Some(vec![*l]),
        (false, SubstItem::Or(v)) => Some(v.clone()),
        (true, SubstItem::Lit(l)) => Some(vec![!*l]),
        _ => None,
    }
}

/// Classifies one clause of `Γ` given by its literals.
pub fn classify(lits: &[GammaLit], sigma: &ClauseSubstitution, delta: &[Clause]) -> Option<Case> {
    let trivially_true = lits.iter().any(|gl| {
        matches!(
            (gl.positive, sigma.get(gl.var)),
            (false, SubstItem::Zero) | (true, SubstItem::One)
        )
    });
    if trivially_true {
        return Some(Case::A);
    }
    let f = flat_content(lits, sigma);
    for i in 0..lits.len() {
        let Some(e) = antecedent_lits(lits, i, sigma) else {
            continue;
        };
        if !subset(&e, &f) {
            continue;
        }
        let single = lits.iter().enumerate().find(|&(j, h)| {
            j != i && h.positive && {
                let mut fl = sigma.get(h.var).lits().to_vec();
                fl.sort();
                subset(&e, &fl)
            }
        });
        return Some(Case::B { ante: i, succ: single.map(|(j, _)| j) });
    }
    delta
        .iter()
        .position(|c| !c.has_one() && c.lits().all(|l| f.binary_search(&l).is_ok()))
        .map(|delta| Case::C { delta })
}

/// Outcome of [`verify_reduction`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReductionReport {
    pub case_a: u64,
    pub case_b: u64,
    pub case_c: u64,
    pub total: u64,
    /// Positions of unclassifiable clauses, in stream order.
    pub failures: Vec<u64>,
}

impl ReductionReport {
    pub fn classified(&self) -> u64 {
        self.case_a + self.case_b + self.case_c
    }

    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }

    /// Errors with the first unclassifiable position.
    pub fn certify(&self) -> Result<()> {
        match self.failures.first() {
            Some(&pos) => Err(Error::UnclassifiableClause(pos)),
            None => Ok(()),
        }
    }

    fn add(&mut self, other: ReductionReport) {
        self.case_a += other.case_a;
        self.case_b += other.case_b;
        self.case_c += other.case_c;
        self.total += other.total;
        self.failures.extend(other.failures);
    }

    fn record(&mut self, pos: u64, case: Option<Case>) {
        self.total += 1;
        match case {
            Some(Case::A) => self.case_a += 1,
            Some(Case::B { .. }) => self.case_b += 1,
            Some(Case::C { .. }) => self.case_c += 1,
            None => self.failures.push(pos),
        }
    }
}

/// Largest number of non-constant selector items handled per step.
const MAX_FREE_SELECTOR_BITS: u32 = 20;

/// Codes of the owner's selector not ruled out by constant items of `σ`.
/// Clauses of every other code have an antecedent `0` or a succedent `1`.
fn consistent_codes(
    p: &GammaParams,
    sigma: &ClauseSubstitution,
    u: u32,
    lo: u64,
    hi: u64,
) -> Result<Vec<u64>> {
    let mut fixed = 0u64;
    let mut free = Vec::new();
    for v in 1..=p.t() {
        match sigma.get(GammaVar::P { u, v }).as_constant() {
            Some(true) => fixed |= 1 << (v - 1),
            Some(false) => {}
            None => free.push(v - 1),
        }
    }
    if free.len() as u32 > MAX_FREE_SELECTOR_BITS {
        return Err(Error::Substitution(format!(
            "step {u}: {} non-constant selector items",
            free.len()
        )));
    }
    let mut out = Vec::new();
    for mask in 0u64..1 << free.len() {
        let mut code = fixed;
        for (b, &bit) in free.iter().enumerate() {
            if (mask >> b) & 1 == 1 {
                code |= 1 << bit;
            }
        }
        if (lo..hi).contains(&code) {
            out.push(code);
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Classified clauses of one segment that are not covered by the code
/// argument, in stream order.
fn segment_cases(
    p: &GammaParams,
    seg: &Segment,
    sigma: &ClauseSubstitution,
    delta: &[Clause],
) -> Result<Vec<(u64, Option<Case>)>> {
    let mut lits = Vec::new();
    let mut out = Vec::new();
    match seg.code_range(p) {
        Some((lo, hi)) => {
            for code in consistent_codes(p, sigma, seg.owner, lo, hi)? {
                let start = seg.code_start(p, code);
                for (k, key) in seg.code_keys(p, code).into_iter().enumerate() {
                    key.write_lits(p, &mut lits);
                    out.push((start + k as u64, classify(&lits, sigma, delta)));
                }
            }
        }
        None => {
            for (k, key) in seg.keys(*p).enumerate() {
                key.write_lits(p, &mut lits);
                out.push((seg.start + k as u64, classify(&lits, sigma, delta)));
            }
        }
    }
    Ok(out)
}

fn verify_segment(
    p: &GammaParams,
    seg: &Segment,
    sigma: &ClauseSubstitution,
    delta: &[Clause],
) -> Result<ReductionReport> {
    let mut r = ReductionReport::default();
    let cases = segment_cases(p, seg, sigma, delta)?;
    let explicit = cases.len() as u64;
    for (pos, case) in cases {
        r.record(pos, case);
    }
    let rest = seg.len - explicit;
    r.case_a += rest;
    r.total += rest;
    Ok(r)
}

/// Classifies every clause of `Γ` under `σ`, in parallel over segments.
pub fn verify_reduction(delta: &[Clause], sigma: &ClauseSubstitution) -> Result<ReductionReport> {
    let p = *sigma.params();
    let parts: Vec<Result<ReductionReport>> = p
        .segments()
        .par_iter()
        .map(|seg| verify_segment(&p, seg, sigma, delta))
        .collect();
    let mut report = ReductionReport::default();
    for part in parts {
        report.add(part?);
    }
    Ok(report)
}

/// Writes one line `<pos> <case>` per stream position (`<pos> ?` for an
/// unclassifiable clause) and returns the report.
pub fn write_certificate(
    delta: &[Clause],
    sigma: &ClauseSubstitution,
    out: &mut impl Write,
) -> Result<ReductionReport> {
    let p = *sigma.params();
    let mut report = ReductionReport::default();
    for seg in p.segments() {
        let cases = segment_cases(&p, &seg, sigma, delta)?;
        let mut next = seg.start;
        for (pos, case) in cases {
            for q in next..pos {
                writeln!(out, "{q} a")?;
                report.record(q, Some(Case::A));
            }
            match case {
                Some(c) => writeln!(out, "{pos} {c}")?,
                None => writeln!(out, "{pos} ?")?,
            }
            report.record(pos, case);
            next = pos + 1;
        }
        for q in next..seg.start + seg.len {
            writeln!(out, "{q} a")?;
            report.record(q, Some(Case::A));
        }
    }
    Ok(report)
}

/// Re-checks one certificate record against the clause it names.
pub fn check_record(
    key: &ClauseKey,
    case: Case,
    sigma: &ClauseSubstitution,
    delta: &[Clause],
) -> bool {
    let p = sigma.params();
    let mut lits = Vec::new();
    key.write_lits(p, &mut lits);
    let item = |k: usize| lits.get(k).map(|gl| (gl.positive, sigma.get(gl.var)));
    match case {
        Case::A => lits.iter().any(|gl| {
            matches!(
                (gl.positive, sigma.get(gl.var)),
                (false, SubstItem::Zero) | (true, SubstItem::One)
            )
        }),
        Case::B { ante, succ } => {
            let Some(e) = antecedent_lits(&lits, ante, sigma) else { return false };
            match succ {
                Some(j) if j != ante => match item(j) {
                    Some((true, f)) => e.iter().all(|l| f.lits().contains(l)),
                    _ => false,
                },
                Some(_) => false,
                None => subset(&e, &flat_content(&lits, sigma)),
            }
        }
        Case::C { delta: d } => match delta.get(d) {
            Some(c) => {
                let f = flat_content(&lits, sigma);
                c.lits().all(|l| f.binary_search(&l).is_ok())
            }
            None => false,
        },
    }
}

/// The clause at stream position `pos`.
pub fn key_at(p: &GammaParams, pos: u64) -> Option<ClauseKey> {
    let seg = p
        .segments()
        .into_iter()
        .find(|s| (s.start..s.start + s.len).contains(&pos))?;
    let off = pos - seg.start;
    match seg.code_range(p) {
        Some((lo, _)) => {
            let b = seg.block_len(p);
            seg.code_keys(p, lo + off / b).get((off % b) as usize).copied()
        }
        None => seg.keys(*p).nth(off as usize),
    }
}
