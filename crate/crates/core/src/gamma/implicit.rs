//! Assignments described by a circuit: the search problem `iΓ_m`.
//!
//! A circuit `D` with `2m` inputs defines a `2^m × 2^m` bit table. Row
//! `u-1` holds step `u`; columns `0..=2s` hold `q^u_{-s..s}` and column
//! `2s+v` holds `p_{u,v}`. Row and column indices are fed to `D` big-endian,
//! the row on `x_1..x_m` and the column on `x_{m+1}..x_{2m}`. Columns past
//! the table width read as 0.

use std::cell::{Cell, RefCell};
use std::collections::HashMap;

use super::params::{GammaParams, GammaVar};
use super::search::{find_falsified, ExplicitAssignment, FalsifiedClause, GammaAssignment};
use crate::error::{Error, Result};
use crate::logic::Circuit;

/// Largest `m` accepted unless overridden.
pub const DEFAULT_M_CAP: u32 = 8;

/// `k = 2^m`, `s = 2^{m/2}`, `n = 0`, `t = 3m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ImplicitParams {
    pub m: u32,
    pub gamma: GammaParams,
}

impl ImplicitParams {
    pub fn new(m: u32, cap: u32) -> Result<Self> {
        if m % 2 != 0 {
            return Err(Error::Params(format!("m must be even, got {m}")));
        }
        if m < 4 {
            return Err(Error::Params(format!("m must be at least 4, got {m}")));
        }
        if m > cap {
            return Err(Error::Params(format!("m={m} exceeds the cap {cap}")));
        }
        let gamma = GammaParams::new(0, 1 << (m / 2), 1 << m)?;
        debug_assert_eq!(gamma.t(), 3 * m);
        Ok(ImplicitParams { m, gamma })
    }

    /// `(row, column)` of a variable in the table.
    pub fn cell(&self, var: GammaVar) -> (u64, u64) {
        let s = self.gamma.s() as u64;
        match var {
            GammaVar::Q { u, i } => (u as u64 - 1, (i as i64 + s as i64) as u64),
            GammaVar::P { u, v } => (u as u64 - 1, 2 * s + v as u64),
        }
    }
}

/// Lazily evaluated table; counts the distinct cells read.
pub struct ImplicitAssignment<'a> {
    params: ImplicitParams,
    circuit: &'a Circuit,
    cache: RefCell<HashMap<(u64, u64), bool>>,
    evaluations: Cell<u64>,
}

impl<'a> ImplicitAssignment<'a> {
    pub fn new(params: ImplicitParams, circuit: &'a Circuit) -> Result<Self> {
        if circuit.n() != 2 * params.m {
            return Err(Error::Params(format!(
                "circuit has {} inputs, expected 2m = {}",
                circuit.n(),
                2 * params.m
            )));
        }
        Ok(ImplicitAssignment {
            params,
            circuit,
            cache: RefCell::new(HashMap::new()),
            evaluations: Cell::new(0),
        })
    }

    pub fn cell(&self, row: u64, col: u64) -> bool {
        let m = self.params.m;
        if col >= 1 << m {
            return false;
        }
        if let Some(&b) = self.cache.borrow().get(&(row, col)) {
            return b;
        }
        let mut input = Vec::with_capacity(2 * m as usize);
        input.extend((0..m).rev().map(|b| (row >> b) & 1 == 1));
        input.extend((0..m).rev().map(|b| (col >> b) & 1 == 1));
        let out = self
            .circuit
            .evaluate(&input)
            .expect("arity checked at construction")
            .output;
        self.evaluations.set(self.evaluations.get() + 1);
        self.cache.borrow_mut().insert((row, col), out);
        out
    }

    /// Number of circuit evaluations performed so far.
    pub fn evaluations(&self) -> u64 {
        self.evaluations.get()
    }

    /// The full explicit assignment (reads every relevant cell).
    pub fn materialize(&self) -> ExplicitAssignment {
        ExplicitAssignment::from_fn(self.params.gamma, |v| self.value(v))
    }
}

impl GammaAssignment for ImplicitAssignment<'_> {
    fn value(&self, var: GammaVar) -> bool {
        let (r, c) = self.params.cell(var);
        self.cell(r, c)
    }
}

/// Answer of the implicit evaluator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImplicitAnswer {
    pub falsified: FalsifiedClause,
    /// Stream position as a `5m`-bit big-endian string.
    pub encoded: String,
    pub evaluations: u64,
}

/// Solves `iΓ_m` for the table described by `d`.
pub fn find_falsified_implicit(m: u32, d: &Circuit, cap: u32) -> Result<ImplicitAnswer> {
    let params = ImplicitParams::new(m, cap)?;
    let a = ImplicitAssignment::new(params, d)?;
    let falsified = find_falsified(&params.gamma, &a)?;
    let bits = 5 * m;
    if falsified.position >> bits != 0 {
        return Err(Error::InternalSoundness(format!(
            "position {} does not fit in {bits} bits",
            falsified.position
        )));
    }
    let encoded = (0..bits)
        .rev()
        .map(|b| if (falsified.position >> b) & 1 == 1 { '1' } else { '0' })
        .collect();
    Ok(ImplicitAnswer {
        falsified,
        encoded,
        evaluations: a.evaluations(),
    })
}
