//! Locating a clause of `Γ(n,s,k)` falsified by a total assignment.

use super::codebook::Inference;
use super::params::{GammaParams, GammaVar};
use super::stream::{ClauseKey, GammaClause};
use crate::error::{Error, Result};

/// A total evaluation of the `Γ` variables.
pub trait GammaAssignment {
    fn value(&self, var: GammaVar) -> bool;
}

impl<F: Fn(GammaVar) -> bool> GammaAssignment for F {
    fn value(&self, var: GammaVar) -> bool {
        self(var)
    }
}

/// Bit per variable, indexed by DIMACS number minus one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitAssignment {
    params: GammaParams,
    bits: Vec<bool>,
}

impl ExplicitAssignment {
    pub fn new(params: GammaParams, bits: Vec<bool>) -> Result<Self> {
        if bits.len() as u64 != params.num_vars() {
            return Err(Error::Params(format!(
                "assignment has {} bits, Γ({params}) has {} variables",
                bits.len(),
                params.num_vars()
            )));
        }
        Ok(ExplicitAssignment { params, bits })
    }

    pub fn from_fn(params: GammaParams, f: impl Fn(GammaVar) -> bool) -> Self {
        let bits = params.all_vars().map(f).collect();
        ExplicitAssignment { params, bits }
    }

    /// Parses a `0`/`1` string in variable-number order; whitespace is ignored.
    pub fn parse(params: GammaParams, text: &str) -> Result<Self> {
        let mut bits = Vec::new();
        for (n, line) in text.lines().enumerate() {
            for ch in line.chars() {
                match ch {
                    '0' => bits.push(false),
                    '1' => bits.push(true),
                    c if c.is_whitespace() => {}
                    c => return Err(Error::parse(n + 1, format!("unexpected character {c:?}"))),
                }
            }
        }
        Self::new(params, bits)
    }

    pub fn to_bitstring(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn set(&mut self, var: GammaVar, value: bool) {
        let i = self.params.var_number(var) as usize - 1;
        self.bits[i] = value;
    }
}

impl GammaAssignment for ExplicitAssignment {
    fn value(&self, var: GammaVar) -> bool {
        self.bits[self.params.var_number(var) as usize - 1]
    }
}

/// A clause of the stream that the assignment falsifies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FalsifiedClause {
    pub position: u64,
    pub clause: GammaClause,
    pub reason: String,
}

impl FalsifiedClause {
    fn new(p: &GammaParams, key: ClauseKey) -> Self {
        FalsifiedClause {
            position: p.position(&key),
            clause: key.clause(p),
            reason: key.describe(p),
        }
    }

    pub fn key(&self) -> ClauseKey {
        self.clause.key
    }
}

fn read_code(p: &GammaParams, a: &impl GammaAssignment, u: u32) -> u64 {
    (1..=p.t()).fold(0u64, |acc, v| {
        acc | (a.value(GammaVar::P { u, v }) as u64) << (v - 1)
    })
}

/// Finds the falsified clause with the smallest stream position.
///
/// Reads every selector once and then checks the groups in stream order, so
/// only `O(k·(n+s+t))` variables are inspected. Since `Γ` is unsatisfiable
/// a miss means the generator and the evaluator disagree, which is reported
/// as [`Error::InternalSoundness`].
pub fn find_falsified(p: &GammaParams, a: &impl GammaAssignment) -> Result<FalsifiedClause> {
    let key = first_falsified(p, a).ok_or_else(|| {
        Error::InternalSoundness(format!("assignment satisfies every clause of Γ({p})"))
    })?;
    Ok(FalsifiedClause::new(p, key))
}

fn first_falsified(p: &GammaParams, a: &impl GammaAssignment) -> Option<ClauseKey> {
    let span = p.span();
    let d = p.definition_steps();
    let q = |u: u32, i: i32| a.value(GammaVar::Q { u, i });
    let codes: Vec<u64> = (1..=p.k()).map(|u| read_code(p, a, u)).collect();
    let code = |u: u32| codes[u as usize - 1];

    for u in 1..=d {
        if code(u) >= p.instruction_count(p.gate_of_step(u)) {
            return Some(ClauseKey::Invalid { u, code: code(u) });
        }
    }
    for u in 1..=d {
        let gate = p.decode_instruction(p.gate_of_step(u), code(u))?;
        let member = p.clause_membership(&p.definition_clause(u, gate));
        for i in -span..=span {
            if q(u, i) != member[(i + span) as usize] {
                return Some(ClauseKey::Def { u, code: code(u), i });
            }
        }
    }
    for r in 1..=p.s() {
        let (a0, a1, a2) = (code(3 * r - 2), code(3 * r - 1), code(3 * r));
        for v in 1..=p.t() {
            let bit = |c: u64| (c >> (v - 1)) & 1 == 1;
            let pairs = [(a0, a1), (a1, a0), (a0, a2), (a2, a0)];
            for (which, (x, y)) in pairs.into_iter().enumerate() {
                if bit(x) && !bit(y) {
                    return Some(ClauseKey::Agree { r, v, which: which as u8 });
                }
            }
        }
    }
    for u in d + 1..=p.k() {
        if code(u) >= p.inference_count(u) {
            return Some(ClauseKey::Invalid { u, code: code(u) });
        }
    }
    for u in d + 1..=p.k() {
        let c = code(u);
        let Some(Inference::Resolution { v, w, i }) = p.decode_inference(u, c) else {
            continue;
        };
        let pivots = [!q(v, i), !q(w, -i), q(u, i), q(u, -i), q(v, -i), q(w, i)];
        if let Some(which) = pivots.iter().position(|&f| f) {
            return Some(ClauseKey::ResPivot { u, code: c, which: which as u8 });
        }
        for j in (-span..=span).filter(|&j| j != i && j != -i) {
            let (qv, qw, qu) = (q(v, j), q(w, j), q(u, j));
            let fails = [qv && !qu, qw && !qu, qu && !qv && !qw];
            if let Some(which) = fails.iter().position(|&f| f) {
                return Some(ClauseKey::ResPass { u, code: c, j, which: which as u8 });
            }
        }
    }
    for u in d + 1..=p.k() {
        let c = code(u);
        let Some(Inference::Weakening(v)) = p.decode_inference(u, c) else {
            continue;
        };
        for i in -span..=span {
            if q(v, i) && !q(u, i) {
                return Some(ClauseKey::Weak { u, code: c, i });
            }
        }
    }
    for u in d + 1..=p.k() {
        if code(u) == 0 && !q(u, 0) {
            return Some(ClauseKey::One { u, code: 0 });
        }
    }
    (-span..=span)
        .find(|&i| q(p.k(), i))
        .map(|i| ClauseKey::Final { i })
}

/// Reference oracle: evaluates the whole stream and returns the first
/// falsified clause, if any.
pub fn brute_force_falsified(p: &GammaParams, a: &impl GammaAssignment) -> Option<FalsifiedClause> {
    let mut lits = Vec::new();
    for (pos, key) in p.clause_keys().enumerate() {
        key.write_lits(p, &mut lits);
        if !lits.iter().any(|l| l.eval(a.value(l.var))) {
            let mut f = FalsifiedClause::new(p, key);
            f.position = pos as u64;
            return Some(f);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::Group;

    #[test]
    fn all_zero_small_case() {
        let p = GammaParams::new(0, 1, 3).unwrap();
        let a = ExplicitAssignment::from_fn(p, |_| false);
        let f = find_falsified(&p, &a).unwrap();
        // code 0 is y1 := 0, whose first clause is {-y1}
        assert_eq!(f.clause.group, Group::G2);
        assert_eq!(f.key(), ClauseKey::Def { u: 1, code: 0, i: -1 });
        assert!(!f.clause.eval(|v| a.value(v)));
    }

    #[test]
    fn invalid_selector_is_found() {
        let p = GammaParams::new(0, 1, 3).unwrap();
        let a = ExplicitAssignment::from_fn(p, |v| matches!(v, GammaVar::P { u: 1, v: 3 }));
        let f = find_falsified(&p, &a).unwrap();
        assert_eq!(f.key(), ClauseKey::Invalid { u: 1, code: 4 });
        assert_eq!(f.position, 2);
    }

    #[test]
    fn agrees_with_brute_force_on_patterns() {
        let p = GammaParams::new(0, 1, 4).unwrap();
        for seed in 0..200u64 {
            let a = ExplicitAssignment::from_fn(p, |v| {
                let h = p.var_number(v).wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ seed.wrapping_mul(0xbf58_476d_1ce4_e5b9);
                (h >> 29) & 1 == 1
            });
            let fast = find_falsified(&p, &a).unwrap();
            let slow = brute_force_falsified(&p, &a).unwrap();
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn parse_roundtrip() {
        let p = GammaParams::new(0, 1, 3).unwrap();
        let a = ExplicitAssignment::from_fn(p, |v| p.var_number(v) % 3 == 0);
        let text = a.to_bitstring();
        assert_eq!(ExplicitAssignment::parse(p, &text).unwrap(), a);
        assert!(ExplicitAssignment::parse(p, "0101").is_err());
    }
}
