//! The random process `Γ(0,s,k)(C_r)`: draw a variable-free circuit, fix the
//! definition part of `Γ(0,s,k)` to it and keep the rest, which is always
//! unsatisfiable. Also a harness that runs external SAT solvers on the
//! resulting formulas.

mod bench;

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gamma::{GammaLit, GammaParams, GammaVar};
use crate::logic::text::circuit_inline;
use crate::logic::Circuit;

pub use bench::{
    detect_solver, parse_verdict, run_benchmark, run_solver, write_csv, BenchConfig, BenchRow,
    SolverRun, SolverSpec, Verdict, KNOWN_SOLVERS, SOLVER_ENV,
};

/// Parameters of one draw.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomProcessConfig {
    pub s: u32,
    pub k: u32,
    pub seed: u64,
}

impl RandomProcessConfig {
    pub fn params(&self) -> Result<GammaParams> {
        GammaParams::new(0, self.s, self.k)
    }
}

/// Draws `y_i` uniformly from the codebook of legal instructions for `y_i`
/// (no inputs). The generator is `ChaCha8Rng::seed_from_u64(seed)` moved to
/// stream `i` for instruction `i`, so earlier draws never depend on `s`.
pub fn random_circuit(s: u32, seed: u64) -> Result<Circuit> {
    let p = GammaParams::new(0, s, 3 * s)?;
    let gates = (1..=s)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let book = p.instruction_codebook(i);
            book[rng.gen_range(0..book.len())]
        })
        .collect();
    Circuit::new(0, gates)
}

/// `Γ(0,s,k)` with the variables of steps `u ≤ 3s` fixed by a circuit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaOfCircuit {
    pub params: GammaParams,
    pub circuit: Circuit,
    pub seed: Option<u64>,
    /// Surviving clauses with their fixed literals removed, in stream order.
    pub clauses: Vec<Vec<GammaLit>>,
    /// Number of clauses satisfied by the fixed part.
    pub dropped: u64,
}

impl GammaOfCircuit {
    /// Some clause lost all its literals; the formula is trivially
    /// unsatisfiable. This happens whenever `k = 3s`: the last step is a
    /// definition step, so a final-clause literal `¬q^k_i` is fixed false.
    pub fn has_empty_clause(&self) -> bool {
        self.clauses.iter().any(Vec::is_empty)
    }

    pub fn residual_vars(&self) -> BTreeSet<GammaVar> {
        self.clauses.iter().flatten().map(|l| l.var).collect()
    }

    /// DIMACS text in the numbering of `Γ(0,s,k)`.
    pub fn to_dimacs(&self) -> String {
        let p = &self.params;
        let mut out = String::new();
        let seed = self.seed.map_or("none".to_string(), |s| s.to_string());
        let _ = writeln!(
            out,
            "c seed={seed} s={} k={} circuit={}",
            p.s(),
            p.k(),
            circuit_inline(&self.circuit)
        );
        let _ = writeln!(out, "c residual: {} clauses kept, {} dropped", self.clauses.len(), self.dropped);
        let _ = writeln!(out, "p cnf {} {}", p.num_vars(), self.clauses.len());
        for c in &self.clauses {
            for l in c {
                let v = p.var_number(l.var) as i64;
                let _ = write!(out, "{} ", if l.positive { v } else { -v });
            }
            out.push_str("0\n");
        }
        out
    }

    /// Exhaustive satisfiability check over the residual variables; `None`
    /// when there are more than `max_vars` of them.
    pub fn brute_force_satisfiable(&self, max_vars: usize) -> Option<bool> {
        if self.has_empty_clause() {
            return Some(false);
        }
        let vars: Vec<GammaVar> = self.residual_vars().into_iter().collect();
        if vars.len() > max_vars {
            return None;
        }
        let index = |v: GammaVar| vars.binary_search(&v).unwrap();
        let clauses: Vec<Vec<(usize, bool)>> = self
            .clauses
            .iter()
            .map(|c| c.iter().map(|l| (index(l.var), l.positive)).collect())
            .collect();
        Some((0..1u64 << vars.len()).any(|a| {
            clauses
                .iter()
                .all(|c| c.iter().any(|&(i, pos)| ((a >> i) & 1 == 1) == pos))
        }))
    }
}

/// Values of the `Γ(0,s,k)` variables of steps `u ≤ 3s` fixed by a circuit.
pub struct FixedPart {
    params: GammaParams,
    codes: Vec<u64>,
    members: Vec<Vec<bool>>,
}

impl FixedPart {
    pub fn new(p: GammaParams, circuit: &Circuit) -> Result<Self> {
        let mut codes = Vec::with_capacity(p.s() as usize);
        for (r, &g) in circuit.gates().iter().enumerate() {
            let code = p.encode_instruction(r as u32 + 1, g).ok_or_else(|| {
                Error::Circuit(format!("gate {} ({g:?}) is not a legal instruction", r + 1))
            })?;
            codes.push(code);
        }
        let members = (1..=p.definition_steps())
            .map(|u| p.clause_membership(&p.definition_clause(u, circuit.gate(p.gate_of_step(u)))))
            .collect();
        Ok(FixedPart { params: p, codes, members })
    }

    /// Code of the instruction of `y_r`.
    pub fn code(&self, r: u32) -> u64 {
        self.codes[r as usize - 1]
    }

    pub fn value(&self, var: GammaVar) -> Option<bool> {
        let p = &self.params;
        match var {
            GammaVar::P { u, v } if u <= p.definition_steps() => {
                Some((self.code(p.gate_of_step(u)) >> (v - 1)) & 1 == 1)
            }
            GammaVar::Q { u, i } if u <= p.definition_steps() => {
                Some(self.members[u as usize - 1][(i + p.span()) as usize])
            }
            _ => None,
        }
    }
}

/// Substitutes `circuit` into `Γ(params)`, dropping satisfied clauses and
/// removing false literals. Segments conditioned on a fixed selector only
/// contribute the clauses of the fixed code; all others are satisfied.
pub fn gamma_of_circuit(params: GammaParams, circuit: &Circuit, seed: Option<u64>) -> Result<GammaOfCircuit> {
    let p = params;
    if p.n() != 0 || circuit.n() != 0 || circuit.s() != p.s() {
        return Err(Error::Params(format!(
            "circuit with n={} s={} does not match Γ({p})",
            circuit.n(),
            circuit.s()
        )));
    }
    let fixed = FixedPart::new(p, circuit)?;
    let d = p.definition_steps();
    let mut clauses = Vec::new();
    let mut kept_total = 0u64;
    let mut lits = Vec::new();
    let mut keep = |key: crate::gamma::ClauseKey, clauses: &mut Vec<Vec<GammaLit>>| {
        key.write_lits(&p, &mut lits);
        let mut out = Vec::with_capacity(lits.len());
        for l in &lits {
            match fixed.value(l.var) {
                Some(b) if b == l.positive => return,
                Some(_) => {}
                None => out.push(*l),
            }
        }
        clauses.push(out);
    };
    for seg in p.segments() {
        match seg.code_range(&p) {
            Some((lo, hi)) if seg.owner <= d => {
                let code = fixed.code(p.gate_of_step(seg.owner));
                if (lo..hi).contains(&code) {
                    for key in seg.code_keys(&p, code) {
                        keep(key, &mut clauses);
                        kept_total += 1;
                    }
                }
            }
            _ => {
                for key in seg.keys(p) {
                    keep(key, &mut clauses);
                    kept_total += 1;
                }
            }
        }
    }
    let total = p.clause_count()?.total;
    let dropped = (total as u64 - kept_total) + (kept_total - clauses.len() as u64);
    Ok(GammaOfCircuit {
        params: p,
        circuit: circuit.clone(),
        seed,
        clauses,
        dropped,
    })
}

/// Draws `C_r` for `cfg` and substitutes it.
pub fn sample(cfg: RandomProcessConfig) -> Result<GammaOfCircuit> {
    let p = cfg.params()?;
    let c = random_circuit(cfg.s, cfg.seed)?;
    gamma_of_circuit(p, &c, Some(cfg.seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Gate;

    #[test]
    fn deterministic() {
        let a = sample(RandomProcessConfig { s: 3, k: 12, seed: 42 }).unwrap();
        let b = sample(RandomProcessConfig { s: 3, k: 12, seed: 42 }).unwrap();
        assert_eq!(a.to_dimacs(), b.to_dimacs());
    }

    #[test]
    fn prefix_stable() {
        let a = random_circuit(3, 9).unwrap();
        let b = random_circuit(5, 9).unwrap();
        assert_eq!(a.gates(), &b.gates()[..3]);
    }

    #[test]
    fn single_gate_is_a_fair_coin() {
        let ones = (0..10_000u64)
            .filter(|&seed| random_circuit(1, seed).unwrap().gate(1) == Gate::Const1)
            .count();
        assert!((ones as f64 / 1e4 - 0.5).abs() <= 0.02, "{ones}");
    }

    #[test]
    fn second_gate_is_uniform_over_its_codebook() {
        let p = GammaParams::new(0, 2, 6).unwrap();
        let book = p.instruction_codebook(2);
        assert_eq!(book.len(), 5);
        let draws = 10_000u64;
        let mut hist = vec![0u64; book.len()];
        for seed in 0..draws {
            let g = random_circuit(2, seed).unwrap().gate(2);
            hist[book.iter().position(|&b| b == g).unwrap()] += 1;
        }
        let expected = draws as f64 / book.len() as f64;
        let chi2: f64 = hist.iter().map(|&h| (h as f64 - expected).powi(2) / expected).sum();
        // 1% critical value of chi-square with 4 degrees of freedom
        assert!(chi2 < 13.277, "chi2 = {chi2}, {hist:?}");
    }

    #[test]
    fn no_definition_variables_remain() {
        let g = sample(RandomProcessConfig { s: 2, k: 8, seed: 1 }).unwrap();
        let d = g.params.definition_steps();
        assert!(g.residual_vars().iter().all(|v| match *v {
            GammaVar::Q { u, .. } | GammaVar::P { u, .. } => u > d,
        }));
    }

    #[test]
    fn k_equal_3s_is_trivially_unsat() {
        let g = sample(RandomProcessConfig { s: 1, k: 3, seed: 5 }).unwrap();
        assert!(g.has_empty_clause());
        assert_eq!(g.brute_force_satisfiable(26), Some(false));
    }
}
