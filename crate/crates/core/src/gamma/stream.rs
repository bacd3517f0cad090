//! The clause stream of `Γ(n,s,k)`.
//!
//! Clauses are identified by a small [`ClauseKey`] and materialized on demand.
//! Order is group-major (`γ1, γ2, γ2', γ3, γ4a, γ4b, γ4c, γ5`), then owner
//! step, then selector code, then payload. The stream is split into
//! [`Segment`]s (one per group and owner) whose start positions are known in
//! closed form, so positions can be computed without enumerating.

use std::fmt;

use super::codebook::Inference;
use super::params::{GammaLit, GammaParams, GammaVar};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Group {
    /// Invalid instruction selectors.
    G1,
    /// Content of definition steps.
    G2,
    /// Selector agreement within a definition triple.
    G2Agree,
    /// Invalid inference selectors.
    G3,
    /// Resolution.
    G4Res,
    /// Weakening.
    G4Weak,
    /// 1-axiom.
    G4One,
    /// Last step is empty.
    G5,
}

impl Group {
    pub const ALL: [Group; 8] = [
        Group::G1,
        Group::G2,
        Group::G2Agree,
        Group::G3,
        Group::G4Res,
        Group::G4Weak,
        Group::G4One,
        Group::G5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Group::G1 => "gamma1",
            Group::G2 => "gamma2",
            Group::G2Agree => "gamma2'",
            Group::G3 => "gamma3",
            Group::G4Res => "gamma4a",
            Group::G4Weak => "gamma4b",
            Group::G4One => "gamma4c",
            Group::G5 => "gamma5",
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Identifies one clause of the stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClauseKey {
    /// `p_u(ā) →` for an invalid code (γ1 if `u ≤ 3s`, γ3 otherwise).
    Invalid { u: u32, code: u64 },
    /// `p_u(ā) → (¬)q^u_i` for a valid instruction code.
    Def { u: u32, code: u64, i: i32 },
    /// Bit `v` of the selectors of gate `r`; `which` picks one of
    /// `p_{3r-2} → p_{3r-1}`, its converse, `p_{3r-2} → p_{3r}`, its converse.
    Agree { r: u32, v: u32, which: u8 },
    /// `which ∈ 0..6`: `→ q^v_i`, `→ q^w_{-i}`, `→ ¬q^u_i`, `→ ¬q^u_{-i}`,
    /// `→ ¬q^v_{-i}`, `→ ¬q^w_i`. The last two keep tautological premises
    /// from cancelling both polarities of the pivot.
    ResPivot { u: u32, code: u64, which: u8 },
    /// `which ∈ 0..3`: `q^v_j → q^u_j`, `q^w_j → q^u_j`, `q^u_j → q^v_j, q^w_j`
    /// for every `j ≠ ±i`, including `j = 0`.
    ResPass { u: u32, code: u64, j: i32, which: u8 },
    /// `p_u(ā), q^v_i → q^u_i`.
    Weak { u: u32, code: u64, i: i32 },
    /// `p_u(ā) → q^u_0`.
    One { u: u32, code: u64 },
    /// `→ ¬q^k_i`.
    Final { i: i32 },
}

impl ClauseKey {
    pub fn group(&self, p: &GammaParams) -> Group {
        match *self {
            ClauseKey::Invalid { u, .. } if u <= p.definition_steps() => Group::G1,
            ClauseKey::Invalid { .. } => Group::G3,
            ClauseKey::Def { .. } => Group::G2,
            ClauseKey::Agree { .. } => Group::G2Agree,
            ClauseKey::ResPivot { .. } | ClauseKey::ResPass { .. } => Group::G4Res,
            ClauseKey::Weak { .. } => Group::G4Weak,
            ClauseKey::One { .. } => Group::G4One,
            ClauseKey::Final { .. } => Group::G5,
        }
    }

    /// Step whose selector the clause is conditioned on (`k` for γ5,
    /// `3r-2` for agreement clauses).
    pub fn owner(&self, p: &GammaParams) -> u32 {
        match *self {
            ClauseKey::Invalid { u, .. }
            | ClauseKey::Def { u, .. }
            | ClauseKey::ResPivot { u, .. }
            | ClauseKey::ResPass { u, .. }
            | ClauseKey::Weak { u, .. }
            | ClauseKey::One { u, .. } => u,
            ClauseKey::Agree { r, .. } => 3 * r - 2,
            ClauseKey::Final { .. } => p.k(),
        }
    }

    pub fn code(&self) -> Option<u64> {
        match *self {
            ClauseKey::Invalid { code, .. }
            | ClauseKey::Def { code, .. }
            | ClauseKey::ResPivot { code, .. }
            | ClauseKey::ResPass { code, .. }
            | ClauseKey::Weak { code, .. }
            | ClauseKey::One { code, .. } => Some(code),
            ClauseKey::Agree { .. } | ClauseKey::Final { .. } => None,
        }
    }

    /// Writes the clause literals into `out` (cleared first): the negated
    /// selector literals, then the payload.
    pub fn write_lits(&self, p: &GammaParams, out: &mut Vec<GammaLit>) {
        out.clear();
        let q = |u: u32, i: i32| GammaVar::Q { u, i };
        let sel = |out: &mut Vec<GammaLit>, u: u32, code: u64| {
            for v in 1..=p.t() {
                let bit = (code >> (v - 1)) & 1 == 1;
                out.push(GammaLit::new(GammaVar::P { u, v }, !bit));
            }
        };
        match *self {
            ClauseKey::Invalid { u, code } => sel(out, u, code),
            ClauseKey::Def { u, code, i } => {
                sel(out, u, code);
                let gate = p
                    .decode_instruction(p.gate_of_step(u), code)
                    .expect("valid instruction code");
                let d = p.definition_clause(u, gate);
                let member = if i == 0 {
                    d.has_one()
                } else {
                    d.lits().any(|l| p.literal_index(l) == i)
                };
                out.push(GammaLit::new(q(u, i), member));
            }
            ClauseKey::Agree { r, v, which } => {
                let (a, b) = match which {
                    0 => (3 * r - 2, 3 * r - 1),
                    1 => (3 * r - 1, 3 * r - 2),
                    2 => (3 * r - 2, 3 * r),
                    _ => (3 * r, 3 * r - 2),
                };
                out.push(GammaLit::new(GammaVar::P { u: a, v }, false));
                out.push(GammaLit::new(GammaVar::P { u: b, v }, true));
            }
            ClauseKey::ResPivot { u, code, which } => {
                sel(out, u, code);
                let Some(Inference::Resolution { v, w, i }) = p.decode_inference(u, code) else {
                    panic!("resolution code expected")
                };
                out.push(match which {
                    0 => GammaLit::new(q(v, i), true),
                    1 => GammaLit::new(q(w, -i), true),
                    2 => GammaLit::new(q(u, i), false),
                    3 => GammaLit::new(q(u, -i), false),
                    4 => GammaLit::new(q(v, -i), false),
                    _ => GammaLit::new(q(w, i), false),
                });
            }
            ClauseKey::ResPass { u, code, j, which } => {
                sel(out, u, code);
                let Some(Inference::Resolution { v, w, .. }) = p.decode_inference(u, code) else {
                    panic!("resolution code expected")
                };
                match which {
                    0 => {
                        out.push(GammaLit::new(q(v, j), false));
                        out.push(GammaLit::new(q(u, j), true));
                    }
                    1 => {
                        out.push(GammaLit::new(q(w, j), false));
                        out.push(GammaLit::new(q(u, j), true));
                    }
                    _ => {
                        out.push(GammaLit::new(q(u, j), false));
                        out.push(GammaLit::new(q(v, j), true));
                        if w != v {
                            out.push(GammaLit::new(q(w, j), true));
                        }
                    }
                }
            }
            ClauseKey::Weak { u, code, i } => {
                sel(out, u, code);
                let Some(Inference::Weakening(v)) = p.decode_inference(u, code) else {
                    panic!("weakening code expected")
                };
                out.push(GammaLit::new(q(v, i), false));
                out.push(GammaLit::new(q(u, i), true));
            }
            ClauseKey::One { u, code } => {
                sel(out, u, code);
                out.push(GammaLit::new(q(u, 0), true));
            }
            ClauseKey::Final { i } => out.push(GammaLit::new(q(p.k(), i), false)),
        }
    }

    pub fn clause(&self, p: &GammaParams) -> GammaClause {
        let mut lits = Vec::with_capacity(p.t() as usize + 3);
        self.write_lits(p, &mut lits);
        GammaClause {
            group: self.group(p),
            key: *self,
            lits,
        }
    }

    pub fn describe(&self, p: &GammaParams) -> String {
        let code = |u: u32, c: u64| -> String {
            if u <= p.definition_steps() {
                match p.decode_instruction(p.gate_of_step(u), c) {
                    Some(g) => format!("code {c} = y{} := {:?}", p.gate_of_step(u), g),
                    None => format!("code {c} (invalid instruction for y{})", p.gate_of_step(u)),
                }
            } else {
                match p.decode_inference(u, c) {
                    Some(inf) => format!("code {c} = {inf:?}"),
                    None => format!("code {c} (invalid inference)"),
                }
            }
        };
        let g = self.group(p);
        match *self {
            ClauseKey::Invalid { u, code: c } => format!("{g}: step {u}, {}", code(u, c)),
            ClauseKey::Def { u, code: c, i } => {
                format!("{g}: step {u}, {}, q[{i}] disagrees with the definition", code(u, c))
            }
            ClauseKey::Agree { r, v, which } => {
                format!("{g}: selectors of gate {r} disagree on bit {v} (clause {which})")
            }
            ClauseKey::ResPivot { u, code: c, which } => {
                format!("{g}: step {u}, {}, pivot condition {which}", code(u, c))
            }
            ClauseKey::ResPass { u, code: c, j, which } => {
                format!("{g}: step {u}, {}, literal {j} passing condition {which}", code(u, c))
            }
            ClauseKey::Weak { u, code: c, i } => {
                format!("{g}: step {u}, {}, literal {i} not kept", code(u, c))
            }
            ClauseKey::One { u, code: c } => format!("{g}: step {u}, {}, lacks 1", code(u, c)),
            ClauseKey::Final { i } => format!("{g}: last step contains literal {i}"),
        }
    }
}

/// A materialized clause of `Γ(n,s,k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaClause {
    pub group: Group,
    pub key: ClauseKey,
    pub lits: Vec<GammaLit>,
}

impl GammaClause {
    pub fn width(&self) -> usize {
        self.lits.len()
    }

    pub fn eval(&self, mut value: impl FnMut(GammaVar) -> bool) -> bool {
        self.lits.iter().any(|l| l.eval(value(l.var)))
    }

    pub fn dimacs(&self, p: &GammaParams) -> Vec<i64> {
        self.lits
            .iter()
            .map(|l| {
                let v = p.var_number(l.var) as i64;
                if l.positive {
                    v
                } else {
                    -v
                }
            })
            .collect()
    }
}

/// A contiguous run of the stream: one group and one owner step
/// (for γ2' the owner is the gate `r`, for γ5 there is a single segment).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Segment {
    pub group: Group,
    pub owner: u32,
    pub start: u64,
    pub len: u64,
}

impl Segment {
    pub fn keys(self, p: GammaParams) -> Box<dyn Iterator<Item = ClauseKey> + Send> {
        let span = p.span();
        let u = self.owner;
        match self.code_range(&p) {
            Some((lo, hi)) => Box::new((lo..hi).flat_map(move |code| self.code_keys(&p, code))),
            None if self.group == Group::G2Agree => Box::new((1..=p.t()).flat_map(move |v| {
                (0..4).map(move |which| ClauseKey::Agree { r: u, v, which })
            })),
            None => Box::new((-span..=span).map(|i| ClauseKey::Final { i })),
        }
    }

    /// Codes `lo..hi` whose clauses make up the segment, for the groups
    /// conditioned on the owner's selector.
    pub fn code_range(&self, p: &GammaParams) -> Option<(u64, u64)> {
        let u = self.owner;
        match self.group {
            Group::G1 => Some((p.instruction_count(p.gate_of_step(u)), p.codes())),
            Group::G3 => Some((p.inference_count(u), p.codes())),
            Group::G2 => Some((0, p.instruction_count(p.gate_of_step(u)))),
            Group::G4Res => Some((u as u64, u as u64 + p.resolution_count(u))),
            Group::G4Weak => Some((1, u as u64)),
            Group::G4One => Some((0, 1)),
            Group::G2Agree | Group::G5 => None,
        }
    }

    /// Number of clauses per code.
    pub fn block_len(&self, p: &GammaParams) -> u64 {
        match self.group {
            Group::G1 | Group::G3 | Group::G4One => 1,
            Group::G2 | Group::G4Weak => p.q_per_step() as u64,
            Group::G4Res => resolution_block_len(p),
            Group::G2Agree => 4 * p.t() as u64,
            Group::G5 => p.q_per_step() as u64,
        }
    }

    /// Stream position of the first clause of `code`.
    pub fn code_start(&self, p: &GammaParams, code: u64) -> u64 {
        let (lo, _) = self.code_range(p).expect("segment is conditioned on a code");
        self.start + (code - lo) * self.block_len(p)
    }

    /// The clauses of one code in stream order.
    pub fn code_keys(&self, p: &GammaParams, code: u64) -> Vec<ClauseKey> {
        let span = p.span();
        let u = self.owner;
        match self.group {
            Group::G1 | Group::G3 => vec![ClauseKey::Invalid { u, code }],
            Group::G2 => (-span..=span).map(|i| ClauseKey::Def { u, code, i }).collect(),
            Group::G4Res => {
                let Some(Inference::Resolution { i, .. }) = p.decode_inference(u, code) else {
                    unreachable!("resolution segment holds resolution codes")
                };
                let mut out: Vec<ClauseKey> =
                    (0..RES_PIVOTS).map(|which| ClauseKey::ResPivot { u, code, which }).collect();
                for j in (-span..=span).filter(|&j| j != i && j != -i) {
                    out.extend((0..3).map(|which| ClauseKey::ResPass { u, code, j, which }));
                }
                out
            }
            Group::G4Weak => (-span..=span).map(|i| ClauseKey::Weak { u, code, i }).collect(),
            Group::G4One => vec![ClauseKey::One { u, code: 0 }],
            Group::G2Agree | Group::G5 => panic!("segment is not conditioned on a code"),
        }
    }
}

/// Pivot clauses per resolution code.
pub const RES_PIVOTS: u8 = 6;

/// Clauses in the resolution block of one code: [`RES_PIVOTS`] pivot clauses
/// and 3 passing clauses for every index other than `±i`, the constant slot
/// `j = 0` included.
pub fn resolution_block_len(p: &GammaParams) -> u64 {
    RES_PIVOTS as u64 + 3 * (2 * p.span() as u64 - 1)
}

fn segment_len(p: &GammaParams, group: Group, owner: u32) -> u64 {
    let w = p.q_per_step() as u64;
    match group {
        Group::G1 => p.codes() - p.instruction_count(p.gate_of_step(owner)),
        Group::G2 => p.instruction_count(p.gate_of_step(owner)) * w,
        Group::G2Agree => 4 * p.t() as u64,
        Group::G3 => p.codes() - p.inference_count(owner),
        Group::G4Res => p.resolution_count(owner) * resolution_block_len(p),
        Group::G4Weak => (owner as u64 - 1) * w,
        Group::G4One => 1,
        Group::G5 => w,
    }
}

fn owners(p: &GammaParams, group: Group) -> std::ops::RangeInclusive<u32> {
    let d = p.definition_steps();
    match group {
        Group::G1 | Group::G2 => 1..=d,
        Group::G2Agree => 1..=p.s(),
        Group::G3 | Group::G4Res | Group::G4Weak | Group::G4One => d + 1..=p.k(),
        Group::G5 => p.k()..=p.k(),
    }
}

impl GammaParams {
    /// Stream segments in order, with start positions.
    pub fn segments(&self) -> Vec<Segment> {
        let mut out = Vec::new();
        let mut pos = 0u64;
        for g in Group::ALL {
            for owner in owners(self, g) {
                let len = segment_len(self, g, owner);
                out.push(Segment {
                    group: g,
                    owner,
                    start: pos,
                    len,
                });
                pos += len;
            }
        }
        out
    }

    /// The whole clause stream, lazily.
    pub fn clause_keys(&self) -> impl Iterator<Item = ClauseKey> + Send {
        let p = *self;
        self.segments().into_iter().flat_map(move |seg| seg.keys(p))
    }

    pub fn clauses(&self) -> impl Iterator<Item = GammaClause> + Send {
        let p = *self;
        self.clause_keys().map(move |k| k.clause(&p))
    }

    /// Start of the segment `(group, owner)` in the stream.
    fn segment_start(&self, group: Group, owner: u32) -> u64 {
        let mut pos = 0u64;
        for g in Group::ALL {
            for o in owners(self, g) {
                if g == group && o == owner {
                    return pos;
                }
                pos += segment_len(self, g, o);
            }
        }
        panic!("no segment {group} / {owner}")
    }

    /// Stream position of a clause, without enumeration.
    pub fn position(&self, key: &ClauseKey) -> u64 {
        let span = self.span();
        let w = self.q_per_step() as u64;
        let group = key.group(self);
        let (owner, offset) = match *key {
            ClauseKey::Invalid { u, code } => {
                let lo = if u <= self.definition_steps() {
                    self.instruction_count(self.gate_of_step(u))
                } else {
                    self.inference_count(u)
                };
                (u, code - lo)
            }
            ClauseKey::Def { u, code, i } => (u, code * w + (i + span) as u64),
            ClauseKey::Agree { r, v, which } => (r, (v as u64 - 1) * 4 + which as u64),
            ClauseKey::ResPivot { u, code, which } => {
                (u, (code - u as u64) * resolution_block_len(self) + which as u64)
            }
            ClauseKey::ResPass { u, code, j, which } => {
                let Some(Inference::Resolution { i, .. }) = self.decode_inference(u, code) else {
                    panic!("resolution code expected")
                };
                // rank of j among the indices other than ±i
                let mut rank = 0u64;
                for jj in -span..=span {
                    if jj == j {
                        break;
                    }
                    if jj != i && jj != -i {
                        rank += 1;
                    }
                }
                (
                    u,
                    (code - u as u64) * resolution_block_len(self) + RES_PIVOTS as u64 + rank * 3 + which as u64,
                )
            }
            ClauseKey::Weak { u, code, i } => (u, (code - 1) * w + (i + span) as u64),
            ClauseKey::One { u, .. } => (u, 0),
            ClauseKey::Final { i } => (self.k(), (i + span) as u64),
        };
        self.segment_start(group, owner) + offset
    }
}

/// Exact per-group clause counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseCounts {
    pub per_group: Vec<(Group, u64)>,
    pub total: u64,
    pub max_width: u32,
}

impl GammaParams {
    /// Closed-form clause counts; errors if the total does not fit in `u64`.
    pub fn clause_count(&self) -> Result<ClauseCounts> {
        let w = self.q_per_step() as u128;
        let codes = 1u128 << self.t();
        let d = self.definition_steps();
        let mut per = [0u128; 8];
        for r in 1..=self.s() {
            let ins = self.instruction_count(r) as u128;
            per[0] += 3 * (codes - ins);
            per[1] += 3 * ins * w;
        }
        per[2] = 4 * self.t() as u128 * self.s() as u128;
        let block = resolution_block_len(self) as u128;
        for u in d + 1..=self.k() {
            let u1 = u as u128 - 1;
            per[3] += codes - self.inference_count(u) as u128;
            per[4] += 2 * self.span() as u128 * u1 * u1 * block;
            per[5] += u1 * w;
        }
        per[6] = (self.k() - d) as u128;
        per[7] = w;
        let total: u128 = per.iter().sum();
        if total > u64::MAX as u128 {
            return Err(Error::Overflow(format!("Γ({self}) has {total} clauses")));
        }
        let max_width = self.t() + if self.k() == d { 1 } else { 3 };
        Ok(ClauseCounts {
            per_group: Group::ALL.iter().copied().zip(per.map(|c| c as u64)).collect(),
            total: total as u64,
            max_width,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn tally(p: &GammaParams) -> BTreeMap<Group, u64> {
        let mut m = BTreeMap::new();
        for c in p.clauses() {
            *m.entry(c.group).or_insert(0) += 1;
        }
        m
    }

    #[test]
    fn counts_match_stream() {
        for (n, s, k) in [(0, 1, 3), (0, 2, 6), (0, 1, 4), (1, 2, 6)] {
            let p = GammaParams::new(n, s, k).unwrap();
            let counts = p.clause_count().unwrap();
            let t = tally(&p);
            for (g, c) in &counts.per_group {
                assert_eq!(t.get(g).copied().unwrap_or(0), *c, "{p} {g}");
            }
            assert_eq!(p.clause_keys().count() as u64, counts.total);
        }
    }

    #[test]
    fn final_group_small_case() {
        let p = GammaParams::new(0, 1, 3).unwrap();
        let fin: Vec<_> = p.clauses().filter(|c| c.group == Group::G5).collect();
        assert_eq!(fin.len(), 3);
        for (c, i) in fin.iter().zip(-1..=1) {
            assert_eq!(c.lits, vec![GammaLit::new(GammaVar::Q { u: 3, i }, false)]);
        }
    }

    #[test]
    fn resolution_block_size() {
        let p = GammaParams::new(1, 2, 7).unwrap();
        let code = p.encode_inference(7, Inference::Resolution { v: 2, w: 5, i: 3 }).unwrap();
        let n = p
            .clause_keys()
            .filter(|k| {
                matches!(k, ClauseKey::ResPivot { u: 7, code: c, .. } | ClauseKey::ResPass { u: 7, code: c, .. } if *c == code)
            })
            .count() as u64;
        assert_eq!(n, 6 + 3 * (2 * 3 - 1));
    }

    #[test]
    fn positions_match_enumeration() {
        let p = GammaParams::new(1, 2, 7).unwrap();
        for (pos, key) in p.clause_keys().enumerate() {
            if pos % 7 == 0 {
                assert_eq!(p.position(&key), pos as u64, "{key:?}");
            }
        }
    }

    #[test]
    fn width_bound() {
        for (n, s, k) in [(0, 2, 6), (0, 1, 4), (0, 2, 7)] {
            let p = GammaParams::new(n, s, k).unwrap();
            let max = p.clauses().map(|c| c.width()).max().unwrap();
            assert!(max <= 3 + p.t() as usize);
            assert_eq!(max as u32, p.clause_count().unwrap().max_width);
        }
    }
}
