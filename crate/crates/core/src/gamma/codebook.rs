//! Canonical numbering of instructions and inferences by selector strings.
//!
//! A selector string `ā ∈ {0,1}^t` is read as the integer `Σ a_v 2^(v-1)`,
//! i.e. `p_{u,1}` is the least significant bit. Codes at or beyond the
//! codebook size are invalid.

use super::params::GammaParams;
use crate::logic::{gate_clauses, Clause, CopyTag, Gate, Instruction, Var};

/// How step `u > 3s` is inferred. Step numbers are 1-based, `i` is a literal
/// index as in [`super::GammaVar::Q`] (never 0).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Inference {
    OneAxiom,
    Weakening(u32),
    Resolution { v: u32, w: u32, i: i32 },
}

/// Position of a nonzero literal index in the order `-N..-1, 1..N`.
fn index_rank(span: i32, i: i32) -> u64 {
    debug_assert!(i != 0 && i.abs() <= span);
    if i < 0 {
        (i + span) as u64
    } else {
        (i + span - 1) as u64
    }
}

fn rank_index(span: i32, rank: u64) -> i32 {
    let r = rank as i32;
    if r < span {
        r - span
    } else {
        r - span + 1
    }
}

impl GammaParams {
    /// Valid instructions for `y_r` in canonical order.
    pub fn instruction_codebook(&self, r: u32) -> Vec<Gate> {
        (0..self.instruction_count(r))
            .map(|c| self.decode_instruction(r, c).unwrap())
            .collect()
    }

    pub fn decode_instruction(&self, r: u32, code: u64) -> Option<Gate> {
        let n = self.n() as u64;
        let r1 = r as u64 - 1;
        let mut c = code;
        if c < 2 {
            return Some(if c == 0 { Gate::Const0 } else { Gate::Const1 });
        }
        c -= 2;
        if c < n {
            return Some(Gate::Input(c as u32 + 1));
        }
        c -= n;
        if c < r1 {
            return Some(Gate::Not(c as u32 + 1));
        }
        c -= r1;
        let sq = r1 * r1;
        let pair = |c: u64| ((c / r1) as u32 + 1, (c % r1) as u32 + 1);
        if c < sq {
            let (j, l) = pair(c);
            return Some(Gate::Or(j, l));
        }
        c -= sq;
        if c < sq {
            let (j, l) = pair(c);
            return Some(Gate::And(j, l));
        }
        None
    }

    /// Code of a gate for `y_r`; `None` if the gate is not legal there.
    pub fn encode_instruction(&self, r: u32, gate: Gate) -> Option<u64> {
        Instruction { target: r, gate }.validate(self.n()).ok()?;
        let n = self.n() as u64;
        let r1 = r as u64 - 1;
        let base_not = 2 + n;
        let base_or = base_not + r1;
        let base_and = base_or + r1 * r1;
        Some(match gate {
            Gate::Const0 => 0,
            Gate::Const1 => 1,
            Gate::Input(u) => 2 + u as u64 - 1,
            Gate::Not(j) => base_not + j as u64 - 1,
            Gate::Or(j, l) => base_or + (j as u64 - 1) * r1 + (l as u64 - 1),
            Gate::And(j, l) => base_and + (j as u64 - 1) * r1 + (l as u64 - 1),
        })
    }

    /// Valid inferences for step `u > 3s` in canonical order.
    pub fn inference_codebook(&self, u: u32) -> Vec<Inference> {
        (0..self.inference_count(u))
            .map(|c| self.decode_inference(u, c).unwrap())
            .collect()
    }

    pub fn decode_inference(&self, u: u32, code: u64) -> Option<Inference> {
        let u1 = u as u64 - 1;
        if code == 0 {
            return Some(Inference::OneAxiom);
        }
        if code <= u1 {
            return Some(Inference::Weakening(code as u32));
        }
        let c = code - 1 - u1;
        let sq = u1 * u1;
        let rank = c / sq.max(1);
        if sq == 0 || rank >= 2 * self.span() as u64 {
            return None;
        }
        let rest = c % sq;
        Some(Inference::Resolution {
            v: (rest / u1) as u32 + 1,
            w: (rest % u1) as u32 + 1,
            i: rank_index(self.span(), rank),
        })
    }

    pub fn encode_inference(&self, u: u32, inf: Inference) -> Option<u64> {
        let u1 = u as u64 - 1;
        match inf {
            Inference::OneAxiom => Some(0),
            Inference::Weakening(v) if v >= 1 && v < u => Some(v as u64),
            Inference::Resolution { v, w, i }
                if v >= 1 && v < u && w >= 1 && w < u && i != 0 && i.abs() <= self.span() =>
            {
                Some(
                    1 + u1
                        + index_rank(self.span(), i) * u1 * u1
                        + (v as u64 - 1) * u1
                        + (w as u64 - 1),
                )
            }
            _ => None,
        }
    }

    /// Number of resolution codes at step `u`.
    pub fn resolution_count(&self, u: u32) -> u64 {
        let u1 = u as u64 - 1;
        2 * self.span() as u64 * u1 * u1
    }

    /// Γ index of a literal over `x`/`y` variables.
    pub fn literal_index(&self, lit: crate::logic::Lit) -> i32 {
        let base = match lit.var {
            Var::X(j) => j as i32,
            Var::Y(j) => (self.n() + j) as i32,
            Var::Z(_) => panic!("z variables have no index in Γ"),
        };
        if lit.positive {
            base
        } else {
            -base
        }
    }

    /// Membership vector (indexed by `i + n + s`) of a clause.
    pub fn clause_membership(&self, c: &Clause) -> Vec<bool> {
        let mut m = vec![false; self.q_per_step() as usize];
        let span = self.span();
        m[span as usize] = c.has_one();
        for l in c.lits() {
            m[(self.literal_index(l) + span) as usize] = true;
        }
        m
    }

    /// Clause `D_u` (for `u ≤ 3s`) prescribed by gate `gate` of `y_r`.
    pub fn definition_clause(&self, u: u32, gate: Gate) -> Clause {
        let r = self.gate_of_step(u);
        let pos = ((u - 1) % 3) as usize;
        gate_clauses(Instruction { target: r, gate }, CopyTag::Y)[pos].clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instruction_counts_match_enumeration() {
        let p = GammaParams::new(0, 2, 6).unwrap();
        assert_eq!(p.instruction_codebook(1), vec![Gate::Const0, Gate::Const1]);
        assert_eq!(p.instruction_codebook(2).len(), 5);
        let p = GammaParams::new(2, 3, 9).unwrap();
        let book = p.instruction_codebook(3);
        assert_eq!(book.len(), 14);
        // independent enumeration of every legal gate for y_3
        let mut all = vec![Gate::Const0, Gate::Const1, Gate::Input(1), Gate::Input(2)];
        all.extend((1..3).map(Gate::Not));
        for j in 1..3 {
            for l in 1..3 {
                all.push(Gate::Or(j, l));
            }
        }
        for j in 1..3 {
            for l in 1..3 {
                all.push(Gate::And(j, l));
            }
        }
        assert_eq!(book, all);
    }

    #[test]
    fn inference_codebook_small() {
        let p = GammaParams::new(0, 1, 9).unwrap();
        let book = p.inference_codebook(4);
        // 1 one-axiom + 3 weakenings + 2 literal indices * 3 * 3 resolutions
        assert_eq!(book.len(), 22);
        assert_eq!(book[0], Inference::OneAxiom);
        assert_eq!(book[4], Inference::Resolution { v: 1, w: 1, i: -1 });
        assert!((book.len() as u64) <= p.codes());
        assert_eq!(p.decode_inference(4, 22), None);
    }

    #[test]
    fn codebooks_are_bijective() {
        for (n, s, k) in [(0, 1, 3), (0, 2, 12), (1, 2, 6), (2, 3, 9)] {
            let p = GammaParams::new(n, s, k).unwrap();
            for r in 1..=s {
                for (c, g) in p.instruction_codebook(r).into_iter().enumerate() {
                    assert_eq!(p.encode_instruction(r, g), Some(c as u64));
                }
                assert_eq!(p.decode_instruction(r, p.instruction_count(r)), None);
            }
            for u in 3 * s + 1..=k {
                for (c, inf) in p.inference_codebook(u).into_iter().enumerate() {
                    assert_eq!(p.encode_inference(u, inf), Some(c as u64));
                }
                assert_eq!(p.decode_inference(u, p.inference_count(u)), None);
                assert_eq!(p.decode_inference(u, p.codes() - 1), None);
            }
        }
    }
}
