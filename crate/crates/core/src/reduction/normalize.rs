//! Bringing an ER refutation into the shape the reduction needs.
//!
//! The output lists the definition clauses of all extension variables
//! first (three per variable), then the clauses of `Δ`, then for every
//! copy-gate `y_r := x_j` the two clauses `{y_r, ¬x_j}` and `{¬y_r, x_j}`
//! re-derived by weakening, then the body. Body lines are resolutions whose
//! resolvent never contains the pivot variable, plus trailing weakenings of
//! the empty clause. Every line has width at most `max(w, 3)` and at most
//! `w` literals over `x`.
//!
//! Width is bounded with prefix chains: a line `{l_1..l_m}` with `m ≥ W` is
//! represented by a unit `{e_m}` where `e_1 := r_1 ∨ r_1` and
//! `e_p := e_{p-1} ∨ r_p`, and `r_p` is an extension variable equivalent to
//! `l_p` (`y` itself, `¬y` via a negation gate, `x_j` via a copy-gate,
//! `¬x_j` via a negated copy-gate).

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::logic::{
    er_premises, gate_clauses, Circuit, Clause, CopyTag, ErRefutation, Gate, Instruction,
    Justification, Lit, ProofStep, Refutation, Var,
};

/// `k ≤ NORMALIZE_SLOPE · (n + s_π + 1) · k(π) + |Δ|` for the output of
/// [`normalize_er`], where `s_π` counts the extension variables of `π`.
pub const NORMALIZE_SLOPE: usize = 20;

/// What a line of a [`NormalizedEr`] is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StepRole {
    /// Clause `pos ∈ 0..3` of the definition of `y_gate`.
    Definition { gate: u32, pos: u8 },
    Delta(usize),
    /// `{y_r, ¬x_j}` re-derived from the first definition clause of copy-gate `r`.
    CopyPositive { gate: u32 },
    /// `{¬y_r, x_j}` re-derived from the second definition clause of copy-gate `r`.
    CopyNegative { gate: u32 },
    Body,
}

/// An ER refutation in the layout used by the reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedEr {
    pub n: u32,
    pub delta: Vec<Clause>,
    pub circuit: Circuit,
    pub steps: Vec<ProofStep>,
    pub roles: Vec<StepRole>,
    /// Width of `Δ`.
    pub w: usize,
}

impl NormalizedEr {
    pub fn s(&self) -> u32 {
        self.circuit.s()
    }

    pub fn k(&self) -> u32 {
        self.steps.len() as u32
    }

    /// `max(w, 3)`.
    pub fn width_bound(&self) -> usize {
        self.w.max(3)
    }

    pub fn refutation(&self) -> Refutation {
        Refutation::new(
            er_premises(&self.delta, self.circuit.gates()),
            self.steps.clone(),
        )
    }

    pub fn to_er(&self) -> ErRefutation {
        ErRefutation::new(
            self.n,
            self.delta.clone(),
            self.circuit.gates().to_vec(),
            self.steps.clone(),
        )
    }

    /// Copy-gates `(r, j)` in gate order.
    pub fn copy_gates(&self) -> Vec<(u32, u32)> {
        copy_gates(self.circuit.gates())
    }

    /// Pads with weakenings of the empty clause up to `k` steps.
    pub fn pad_to(&mut self, k: u32) {
        while self.k() < k {
            let last = self.steps.len() - 1;
            self.steps
                .push(ProofStep::new(Clause::empty(), Justification::Weakening(last)));
            self.roles.push(StepRole::Body);
        }
    }

    /// The refutation checks and the layout, width and pivot invariants hold.
    pub fn check(&self) -> Result<()> {
        self.to_er().check()?;
        let s = self.s() as usize;
        let d = self.delta.len();
        let copies = self.copy_gates();
        let fail = |u: usize, msg: &str| Err(Error::Normalize(format!("step {}: {msg}", u + 1)));
        let bound = self.width_bound();
        for (u, (step, role)) in self.steps.iter().zip(&self.roles).enumerate() {
            let expected = if u < 3 * s {
                StepRole::Definition {
                    gate: (u / 3) as u32 + 1,
                    pos: (u % 3) as u8,
                }
            } else if u < 3 * s + d {
                StepRole::Delta(u - 3 * s)
            } else if u < 3 * s + d + 2 * copies.len() {
                let (r, _) = copies[(u - 3 * s - d) / 2];
                if (u - 3 * s - d) % 2 == 0 {
                    StepRole::CopyPositive { gate: r }
                } else {
                    StepRole::CopyNegative { gate: r }
                }
            } else {
                StepRole::Body
            };
            if *role != expected {
                return fail(u, "role does not match the layout");
            }
            let rule_ok = match (role, step.rule) {
                (StepRole::Definition { gate, pos }, Justification::Initial(i)) => {
                    i == d + 3 * (*gate as usize - 1) + *pos as usize
                }
                (StepRole::Delta(k), Justification::Initial(i)) => i == *k,
                (StepRole::CopyPositive { gate }, Justification::Weakening(v)) => {
                    v == 3 * (*gate as usize - 1)
                }
                (StepRole::CopyNegative { gate }, Justification::Weakening(v)) => {
                    v == 3 * (*gate as usize - 1) + 1
                }
                (StepRole::Body, Justification::Resolution(..)) => true,
                (StepRole::Body, Justification::Weakening(_)) => step.clause.is_empty(),
                _ => false,
            };
            if !rule_ok {
                return fail(u, "justification does not match the role");
            }
            if step.clause.width() > bound {
                return fail(u, "line wider than max(w, 3)");
            }
            if step.clause.x_part().count() > self.w {
                return fail(u, "line has more than w literals over x");
            }
            if let Justification::Resolution(_, _, pivot) = step.rule {
                if step.clause.mentions(pivot.var) {
                    return fail(u, "resolvent contains the pivot variable");
                }
            }
        }
        Ok(())
    }
}

fn copy_gates(gates: &[Gate]) -> Vec<(u32, u32)> {
    gates
        .iter()
        .enumerate()
        .filter_map(|(k, g)| match *g {
            Gate::Input(j) => Some((k as u32 + 1, j)),
            _ => None,
        })
        .collect()
}

/// Symbolic reference to a line before the layout is fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Ref {
    Def(u32, u8),
    Delta(usize),
    Body(usize),
}

#[derive(Clone, Copy, Debug)]
enum BodyRule {
    Res(Ref, Ref, Lit),
    Weak(Ref),
}

/// A line of the refutation after removing tautologies and 1-lines.
#[derive(Clone, Debug)]
struct TLine {
    clause: Clause,
    kind: TKind,
}

#[derive(Clone, Copy, Debug)]
enum TKind {
    Premise(Ref),
    Res(usize, usize, Lit),
}

/// Drops lines that contain 1 or are tautologies, and shrinks the others so
/// every resolution is on a pivot present in both premises. Returns the
/// lines and the index of the empty clause.
fn trim(er: &ErRefutation) -> Result<(Vec<TLine>, usize)> {
    let d = er.delta.len();
    let premise_ref = |i: usize| {
        if i < d {
            Ref::Delta(i)
        } else {
            let k = i - d;
            Ref::Def(k as u32 / 3 + 1, (k % 3) as u8)
        }
    };
    let trivial = |c: &Clause| c.has_one() || c.is_tautology();
    let mut lines: Vec<TLine> = Vec::new();
    let mut premise_line: HashMap<usize, usize> = HashMap::new();
    let mut map: Vec<Option<usize>> = Vec::with_capacity(er.proof.steps.len());
    for step in &er.proof.steps {
        let c = &step.clause;
        let t = match step.rule {
            _ if trivial(c) => None,
            Justification::OneAxiom => None,
            Justification::Initial(i) => Some(*premise_line.entry(i).or_insert_with(|| {
                lines.push(TLine {
                    clause: c.clone(),
                    kind: TKind::Premise(premise_ref(i)),
                });
                lines.len() - 1
            })),
            Justification::Weakening(v) => map[v],
            Justification::Resolution(v, w, l) => {
                let (tv, tw) = (map[v], map[w]);
                match (tv, tw) {
                    (Some(a), _) if !lines[a].clause.contains(l) => Some(a),
                    (_, Some(b)) if !lines[b].clause.contains(!l) => Some(b),
                    (None, Some(b)) => Some(b),
                    (Some(a), None) => Some(a),
                    (None, None) => {
                        return Err(Error::Normalize(
                            "resolution of two trivial lines yields a non-trivial clause".into(),
                        ))
                    }
                    (Some(a), Some(b)) => {
                        let r = lines[a].clause.resolve(&lines[b].clause, l);
                        debug_assert!(r.is_subset(c) && !trivial(&r));
                        lines.push(TLine {
                            clause: r,
                            kind: TKind::Res(a, b, l),
                        });
                        Some(lines.len() - 1)
                    }
                }
            }
        };
        if let Some(t) = t {
            if !lines[t].clause.is_subset(c) {
                return Err(Error::Normalize("trimmed line is not a subclause".into()));
            }
        }
        map.push(t);
    }
    let last = map
        .last()
        .copied()
        .flatten()
        .ok_or_else(|| Error::Normalize("refutation has no non-trivial final line".into()))?;
    Ok((lines, last))
}

/// How a trimmed line is available in the body under construction.
#[derive(Clone, Debug)]
enum Repr {
    Explicit(Ref),
    Chained(Chain),
}

#[derive(Clone, Debug)]
struct Chain {
    /// `e_1..e_m` (gate indices) over the literals `lits`.
    gates: Vec<u32>,
    lits: Vec<Lit>,
    unit: Ref,
}

/// Per-chain memo of derived two-literal clauses.
struct ChainMemo {
    /// `{¬e_p, e_m}` for `p < m`.
    up: Vec<Option<Ref>>,
    /// `{¬r(l_p), e_m}`.
    rep_in: Vec<Option<Ref>>,
    /// `{¬l_p, e_m}`.
    lit_in: Vec<Option<Ref>>,
}

struct Builder<'a> {
    delta: &'a [Clause],
    gates: Vec<Gate>,
    body: Vec<(Clause, BodyRule)>,
    reps: HashMap<Lit, u32>,
}

impl<'a> Builder<'a> {
    fn clause(&self, r: Ref) -> Clause {
        match r {
            Ref::Def(g, pos) => {
                let ins = Instruction {
                    target: g,
                    gate: self.gates[g as usize - 1],
                };
                gate_clauses(ins, CopyTag::Y)[pos as usize].clone()
            }
            Ref::Delta(i) => self.delta[i].clone(),
            Ref::Body(i) => self.body[i].0.clone(),
        }
    }

    fn res(&mut self, a: Ref, b: Ref, pivot: Lit) -> Ref {
        let (ca, cb) = (self.clause(a), self.clause(b));
        assert!(ca.contains(pivot) && cb.contains(!pivot), "bad resolution on {pivot}");
        let r = ca.resolve(&cb, pivot);
        assert!(!r.mentions(pivot.var), "resolvent keeps the pivot {pivot}");
        self.body.push((r, BodyRule::Res(a, b, pivot)));
        Ref::Body(self.body.len() - 1)
    }

    fn push_gate(&mut self, g: Gate) -> u32 {
        self.gates.push(g);
        self.gates.len() as u32
    }

    /// Positive literal of an extension variable equivalent to `l`.
    fn rep(&mut self, l: Lit) -> Lit {
        if let (Var::Y(_), true) = (l.var, l.positive) {
            return l;
        }
        if let Some(&g) = self.reps.get(&l) {
            return Var::Y(g).pos();
        }
        let g = match (l.var, l.positive) {
            (Var::Y(j), false) => self.push_gate(Gate::Not(j)),
            (Var::X(j), true) => self.push_gate(Gate::Input(j)),
            (Var::X(_), false) => {
                let c = self.rep(!l).var.index();
                self.push_gate(Gate::Not(c))
            }
            _ => unreachable!("z variables do not occur in ER refutations"),
        };
        self.reps.insert(l, g);
        Var::Y(g).pos()
    }

    /// Line `r` contains `rep(l)`; returns a line with `l` in its place.
    fn rep_to_lit(&mut self, r: Ref, l: Lit) -> Ref {
        let rp = self.rep(l);
        match (l.var, l.positive) {
            (Var::Y(_), true) => r,
            (Var::Y(_), false) | (Var::X(_), true) => self.res(r, Ref::Def(rp.var.index(), 1), rp),
            (Var::X(_), false) => {
                let c = self.rep(!l);
                let r1 = self.res(r, Ref::Def(rp.var.index(), 1), rp);
                self.res(Ref::Def(c.var.index(), 0), r1, c)
            }
            _ => unreachable!(),
        }
    }

    /// Line `r` contains `¬rep(l)`; returns a line with `¬l` in its place.
    fn neg_rep_to_lit(&mut self, r: Ref, l: Lit) -> Ref {
        let rp = self.rep(l);
        match (l.var, l.positive) {
            (Var::Y(_), true) => r,
            (Var::Y(_), false) | (Var::X(_), true) => self.res(Ref::Def(rp.var.index(), 0), r, rp),
            (Var::X(_), false) => {
                let c = self.rep(!l);
                let r1 = self.res(Ref::Def(rp.var.index(), 0), r, rp);
                self.res(r1, Ref::Def(c.var.index(), 1), c)
            }
            _ => unreachable!(),
        }
    }

    fn new_chain(&mut self, lits: &[Lit]) -> (Vec<u32>, ChainMemo) {
        let reps: Vec<u32> = lits.iter().map(|&l| self.rep(l).var.index()).collect();
        let mut gates = Vec::with_capacity(lits.len());
        for (p, &r) in reps.iter().enumerate() {
            let g = if p == 0 {
                Gate::Or(r, r)
            } else {
                Gate::Or(gates[p - 1], r)
            };
            gates.push(self.push_gate(g));
        }
        let m = lits.len();
        let memo = ChainMemo {
            up: vec![None; m],
            rep_in: vec![None; m],
            lit_in: vec![None; m],
        };
        (gates, memo)
    }

    /// `{¬e_p, e_m}` (0-based `p < m-1`).
    fn chain_up(&mut self, gates: &[u32], memo: &mut ChainMemo, p: usize) -> Ref {
        if let Some(r) = memo.up[p] {
            return r;
        }
        let m = gates.len();
        let r = if p + 2 == m {
            Ref::Def(gates[p + 1], 0)
        } else {
            let above = self.chain_up(gates, memo, p + 1);
            self.res(Ref::Def(gates[p + 1], 0), above, Var::Y(gates[p + 1]).pos())
        };
        memo.up[p] = Some(r);
        r
    }

    /// `{¬r(l_p), e_m}`.
    fn chain_rep_in(&mut self, gates: &[u32], memo: &mut ChainMemo, p: usize) -> Ref {
        if let Some(r) = memo.rep_in[p] {
            return r;
        }
        let base = Ref::Def(gates[p], if p == 0 { 0 } else { 1 });
        let r = if p + 1 == gates.len() {
            base
        } else {
            let up = self.chain_up(gates, memo, p);
            self.res(base, up, Var::Y(gates[p]).pos())
        };
        memo.rep_in[p] = Some(r);
        r
    }

    /// `{¬l_p, e_m}`.
    fn chain_lit_in(&mut self, gates: &[u32], lits: &[Lit], memo: &mut ChainMemo, p: usize) -> Ref {
        if let Some(r) = memo.lit_in[p] {
            return r;
        }
        let rep_in = self.chain_rep_in(gates, memo, p);
        let r = self.neg_rep_to_lit(rep_in, lits[p]);
        memo.lit_in[p] = Some(r);
        r
    }

    /// From line `t` containing pivot `l`, derives `{e_u, l}` (or `{l}`),
    /// where `e_u` tops the chain of the resolvent.
    fn gadget(
        &mut self,
        t: &Repr,
        l: Lit,
        ugates: &[u32],
        ulits: &[Lit],
        umemo: &mut ChainMemo,
    ) -> Ref {
        let pos_in_u = |x: Lit| ulits.iter().position(|&y| y == x).expect("literal passes to resolvent");
        match t {
            Repr::Explicit(r) => {
                let mut cur = *r;
                let lits: Vec<Lit> = self.clause(*r).lits().filter(|&x| x != l).collect();
                for x in lits {
                    let p = pos_in_u(x);
                    let li = self.chain_lit_in(ugates, ulits, umemo, p);
                    cur = self.res(cur, li, x);
                }
                cur
            }
            Repr::Chained(c) => {
                let mut k: Option<Ref> = None;
                for (p, &x) in c.lits.iter().enumerate() {
                    let e = c.gates[p];
                    let def = Ref::Def(e, 2);
                    let step = if x != l {
                        let q = pos_in_u(x);
                        let ri = self.chain_rep_in(ugates, umemo, q);
                        let rp = self.rep(x);
                        self.res(def, ri, rp)
                    } else {
                        def
                    };
                    k = Some(match k {
                        None => step,
                        Some(prev) => self.res(step, prev, Var::Y(c.gates[p - 1]).pos()),
                    });
                }
                let top = Var::Y(*c.gates.last().unwrap()).pos();
                let g = self.res(c.unit, k.unwrap(), top);
                self.rep_to_lit(g, l)
            }
        }
    }

    /// Line `r` contains `l`; returns a line with `rep(l)` in its place.
    fn lit_to_rep(&mut self, r: Ref, l: Lit) -> Ref {
        let rp = self.rep(l);
        match (l.var, l.positive) {
            (Var::Y(_), true) => r,
            (Var::Y(y), false) => self.res(Ref::Def(rp.var.index(), 0), r, Var::Y(y).pos()),
            (Var::X(_), true) => self.res(r, Ref::Def(rp.var.index(), 0), l),
            (Var::X(_), false) => {
                let c = self.rep(!l);
                let r1 = self.res(Ref::Def(c.var.index(), 1), r, !l);
                self.res(Ref::Def(rp.var.index(), 0), r1, c)
            }
            _ => unreachable!(),
        }
    }

    /// Line `r` contains `¬l`; returns a line with `¬rep(l)` in its place.
    fn neg_lit_to_neg_rep(&mut self, r: Ref, l: Lit) -> Ref {
        let rp = self.rep(l);
        match (l.var, l.positive) {
            (Var::Y(_), true) => r,
            (Var::Y(_), false) => self.res(r, Ref::Def(rp.var.index(), 1), !l),
            (Var::X(_), true) => self.res(Ref::Def(rp.var.index(), 1), r, l),
            (Var::X(_), false) => {
                let c = self.rep(!l);
                let r1 = self.res(r, Ref::Def(c.var.index(), 0), !l);
                self.res(r1, Ref::Def(rp.var.index(), 1), c)
            }
            _ => unreachable!(),
        }
    }

    /// Line `r` contains `rep(¬l)`; returns a line with `¬rep(l)` in its place.
    fn rep_of_neg_to_neg_rep(&mut self, r: Ref, l: Lit) -> Ref {
        let rp = self.rep(l);
        let rn = self.rep(!l);
        match (l.var, l.positive) {
            // rep(¬y) = ny, and ny → ¬y is exactly ¬rep(y)
            (Var::Y(_), true) => self.res(r, Ref::Def(rn.var.index(), 1), rn),
            // rep(y) = y, ¬rep(¬y) = ¬ny
            (Var::Y(_), false) => self.res(r, Ref::Def(rp.var.index(), 1), rn),
            // rep(¬x) = nc := ¬c, ¬rep(x) = ¬c
            (Var::X(_), true) => self.res(r, Ref::Def(rn.var.index(), 1), rn),
            // rep(x) = c, ¬rep(¬x) = ¬nc with nc := ¬c
            (Var::X(_), false) => self.res(r, Ref::Def(rp.var.index(), 1), rn),
            _ => unreachable!(),
        }
    }

    /// Explicit copy of a chained line, except that `keep` stays as `rep(keep)`.
    fn unfold(&mut self, c: &Chain, keep: Lit) -> Ref {
        let m = c.gates.len();
        let mut cur = c.unit;
        for p in (0..m).rev() {
            let e = Var::Y(c.gates[p]).pos();
            cur = self.res(cur, Ref::Def(c.gates[p], 2), e);
            if c.lits[p] != keep {
                cur = self.rep_to_lit(cur, c.lits[p]);
            }
        }
        cur
    }
}

/// Normalizes a checked ER refutation; see the module documentation for
/// the output layout.
pub fn normalize_er(er: &ErRefutation) -> Result<NormalizedEr> {
    er.check()
        .map_err(|e| Error::Normalize(format!("input does not check: {e}")))?;
    let w = er.delta.iter().map(Clause::width).max().unwrap_or(0);
    let bound = w.max(3);
    let (lines, last) = trim(er)?;

    // keep only lines the empty clause depends on
    let mut needed = vec![false; lines.len()];
    needed[last] = true;
    for t in (0..lines.len()).rev() {
        if needed[t] {
            if let TKind::Res(a, b, _) = lines[t].kind {
                needed[a] = true;
                needed[b] = true;
            }
        }
    }

    let mut b = Builder {
        delta: &er.delta,
        gates: er.extensions.clone(),
        body: Vec::new(),
        reps: HashMap::new(),
    };
    let mut repr: Vec<Option<Repr>> = vec![None; lines.len()];
    for t in 0..lines.len() {
        if !needed[t] {
            continue;
        }
        let r = match lines[t].kind {
            TKind::Premise(r) => Repr::Explicit(r),
            TKind::Res(a, c, l) => {
                let lits: Vec<Lit> = lines[t].clause.lits().collect();
                let xw = lits.iter().filter(|l| matches!(l.var, Var::X(_))).count();
                if lits.len() >= bound || xw > w {
                    let (gates, mut memo) = b.new_chain(&lits);
                    let ra = repr[a].clone().unwrap();
                    let rc = repr[c].clone().unwrap();
                    let gv = b.gadget(&ra, l, &gates, &lits, &mut memo);
                    let gw = b.gadget(&rc, !l, &gates, &lits, &mut memo);
                    let unit = b.res(gv, gw, l);
                    Repr::Chained(Chain { gates, lits, unit })
                } else {
                    match (repr[a].clone().unwrap(), repr[c].clone().unwrap()) {
                        (Repr::Explicit(ra), Repr::Explicit(rc)) => Repr::Explicit(b.res(ra, rc, l)),
                        (ra, rc) => {
                            let left = match ra {
                                Repr::Explicit(r) => b.lit_to_rep(r, l),
                                Repr::Chained(ch) => b.unfold(&ch, l),
                            };
                            let right = match rc {
                                Repr::Explicit(r) => b.neg_lit_to_neg_rep(r, l),
                                Repr::Chained(ch) => {
                                    let r = b.unfold(&ch, !l);
                                    b.rep_of_neg_to_neg_rep(r, l)
                                }
                            };
                            let rp = b.rep(l);
                            Repr::Explicit(b.res(left, right, rp))
                        }
                    }
                }
            }
        };
        repr[t] = Some(r);
    }
    let final_ref = match repr[last].as_ref().unwrap() {
        Repr::Explicit(r) => *r,
        Repr::Chained(_) => unreachable!("the empty clause is never chained"),
    };
    if final_ref != Ref::Body(b.body.len().wrapping_sub(1)) || b.body.is_empty() {
        b.body.push((Clause::empty(), BodyRule::Weak(final_ref)));
    }
    if b.gates.is_empty() {
        b.gates.push(Gate::Const0);
    }
    Ok(layout(er.n, &er.delta, w, b.gates, b.body))
}

fn layout(n: u32, delta: &[Clause], w: usize, gates: Vec<Gate>, body: Vec<(Clause, BodyRule)>) -> NormalizedEr {
    let s = gates.len();
    let d = delta.len();
    let copies = copy_gates(&gates);
    let copy_slot: HashMap<u32, usize> = copies.iter().enumerate().map(|(i, &(r, _))| (r, i)).collect();
    let body_base = 3 * s + d + 2 * copies.len();
    let index = |r: Ref| -> usize {
        match r {
            Ref::Def(g, pos) => match copy_slot.get(&g) {
                Some(&c) if pos < 2 => 3 * s + d + 2 * c + pos as usize,
                _ => 3 * (g as usize - 1) + pos as usize,
            },
            Ref::Delta(i) => 3 * s + i,
            Ref::Body(i) => body_base + i,
        }
    };
    let circuit = Circuit::new(n, gates).expect("extension gates are well-formed");
    let defs = circuit.encode_df(CopyTag::Y);
    let mut steps = Vec::with_capacity(body_base + body.len());
    let mut roles = Vec::with_capacity(steps.capacity());
    for (u, c) in defs.iter().enumerate() {
        steps.push(ProofStep::new(c.clone(), Justification::Initial(d + u)));
        roles.push(StepRole::Definition {
            gate: (u / 3) as u32 + 1,
            pos: (u % 3) as u8,
        });
    }
    for (i, c) in delta.iter().enumerate() {
        steps.push(ProofStep::new(c.clone(), Justification::Initial(i)));
        roles.push(StepRole::Delta(i));
    }
    for &(r, _) in &copies {
        let base = 3 * (r as usize - 1);
        steps.push(ProofStep::new(defs[base].clone(), Justification::Weakening(base)));
        roles.push(StepRole::CopyPositive { gate: r });
        steps.push(ProofStep::new(defs[base + 1].clone(), Justification::Weakening(base + 1)));
        roles.push(StepRole::CopyNegative { gate: r });
    }
    for (clause, rule) in body {
        let rule = match rule {
            BodyRule::Res(a, b, l) => Justification::Resolution(index(a), index(b), l),
            BodyRule::Weak(a) => Justification::Weakening(index(a)),
        };
        steps.push(ProofStep::new(clause, rule));
        roles.push(StepRole::Body);
    }
    NormalizedEr {
        n,
        delta: delta.to_vec(),
        circuit,
        steps,
        roles,
        w,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Justification::*;

    fn x(i: u32) -> Var {
        Var::X(i)
    }

    fn trivial_contradiction() -> ErRefutation {
        let delta = vec![Clause::new([x(1).pos()]), Clause::new([x(1).neg()])];
        let steps = vec![
            ProofStep::new(delta[0].clone(), Initial(0)),
            ProofStep::new(delta[1].clone(), Initial(1)),
            ProofStep::new(Clause::empty(), Resolution(0, 1, x(1).pos())),
        ];
        ErRefutation::new(1, delta, vec![], steps)
    }

    #[test]
    fn trivial_case() {
        let er = trivial_contradiction();
        let nr = normalize_er(&er).unwrap();
        nr.check().unwrap();
        assert_eq!(nr.s(), 1);
        assert_eq!(nr.k(), 3 + 2 + 1);
        assert!(nr.steps.last().unwrap().clause.is_empty());
    }

    #[test]
    fn wide_lines_are_chained() {
        // {x1,x2,x3} and {¬x1,x4,x5} resolve to a width-4 line, above max(w,3)
        let mut delta = vec![
            Clause::new([x(1).pos(), x(2).pos(), x(3).pos()]),
            Clause::new([x(1).neg(), x(4).pos(), x(5).pos()]),
        ];
        delta.extend((2..=5).map(|j| Clause::new([x(j).neg()])));
        let mut steps: Vec<ProofStep> = delta
            .iter()
            .enumerate()
            .map(|(i, c)| ProofStep::new(c.clone(), Initial(i)))
            .collect();
        let mut cur = delta[0].resolve(&delta[1], x(1).pos());
        steps.push(ProofStep::new(cur.clone(), Resolution(0, 1, x(1).pos())));
        for j in 2..=5u32 {
            cur.remove(x(j).pos());
            let at = steps.len() - 1;
            steps.push(ProofStep::new(cur.clone(), Resolution(at, j as usize, x(j).pos())));
        }
        let er = ErRefutation::new(5, delta, vec![], steps);
        er.check().unwrap();
        let nr = normalize_er(&er).unwrap();
        nr.check().unwrap();
        assert!(nr.s() > 4, "chain gates were added");
        assert!(nr.steps.iter().all(|s| s.clause.width() <= 3));
    }

    #[test]
    fn tautologies_and_one_lines_are_dropped() {
        let delta = vec![Clause::new([x(1).pos()]), Clause::new([x(1).neg()])];
        let steps = vec![
            ProofStep::new(Clause::with_one([x(1).pos()], true), OneAxiom),
            ProofStep::new(delta[0].clone(), Initial(0)),
            ProofStep::new(Clause::new([x(1).pos(), x(2).pos()]), Weakening(1)),
            ProofStep::new(delta[1].clone(), Initial(1)),
            ProofStep::new(Clause::new([x(2).pos()]), Resolution(2, 3, x(1).pos())),
            ProofStep::new(Clause::new([x(1).neg(), x(1).pos(), x(2).pos()]), Weakening(3)),
            ProofStep::new(Clause::new([x(1).pos(), x(2).pos()]), Resolution(1, 5, x(1).pos())),
            ProofStep::new(Clause::new([x(2).pos()]), Resolution(6, 3, x(1).pos())),
            ProofStep::new(Clause::empty(), Resolution(1, 3, x(1).pos())),
        ];
        let er = ErRefutation::new(2, delta, vec![], steps);
        er.check().unwrap();
        let nr = normalize_er(&er).unwrap();
        nr.check().unwrap();
    }
}
