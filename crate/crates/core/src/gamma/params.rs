use std::fmt;

use crate::error::{Error, Result};

/// Parameters of `Γ(n,s,k)`: `n` inputs, `s` gates, `k` proof steps, and
/// `t = ⌈3·log2 k⌉` selector bits per step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GammaParams {
    n: u32,
    s: u32,
    k: u32,
    t: u32,
}

/// Largest `k` accepted; keeps `t ≤ 60` so codes fit in a `u64`.
pub const MAX_K: u32 = 1 << 20;

impl GammaParams {
    pub fn new(n: u32, s: u32, k: u32) -> Result<Self> {
        if s == 0 {
            return Err(Error::Params("s must be at least 1".into()));
        }
        if s <= n {
            return Err(Error::Params(format!("need s > n, got n={n} s={s}")));
        }
        if k < 3 * s {
            return Err(Error::Params(format!("need k >= 3s, got s={s} k={k}")));
        }
        if k > MAX_K {
            return Err(Error::Params(format!("k={k} exceeds the supported maximum {MAX_K}")));
        }
        let t = selector_bits(k);
        let p = GammaParams { n, s, k, t };
        let room = 1u128 << t;
        let ins = p.instruction_count(s) as u128;
        let inf = p.inference_count(k) as u128;
        if ins > room || inf > room {
            return Err(Error::Params(format!(
                "t={t} bits cannot encode {} instructions / {} inferences",
                ins, inf
            )));
        }
        Ok(p)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    /// `n + s`: literal indices range over `-(n+s)..=(n+s)`.
    pub fn span(&self) -> i32 {
        (self.n + self.s) as i32
    }

    /// Number of `q` variables per step, `2(n+s)+1`.
    pub fn q_per_step(&self) -> u32 {
        2 * (self.n + self.s) + 1
    }

    /// `2^t`, the number of selector strings per step.
    pub fn codes(&self) -> u64 {
        1u64 << self.t
    }

    /// Steps `1..=3s` hold the circuit definition.
    pub fn definition_steps(&self) -> u32 {
        3 * self.s
    }

    pub fn num_vars(&self) -> u64 {
        self.k as u64 * (self.q_per_step() as u64 + self.t as u64)
    }

    /// `2 + n + (r-1) + 2(r-1)^2` valid instructions for `y_r`.
    pub fn instruction_count(&self, r: u32) -> u64 {
        let r1 = r as u64 - 1;
        2 + self.n as u64 + r1 + 2 * r1 * r1
    }

    /// `1 + (u-1) + 2(n+s)(u-1)^2` valid inferences for step `u`.
    pub fn inference_count(&self, u: u32) -> u64 {
        let u1 = u as u64 - 1;
        1 + u1 + 2 * (self.n + self.s) as u64 * u1 * u1
    }

    /// Gate index `r` whose definition contains step `u ≤ 3s`.
    pub fn gate_of_step(&self, u: u32) -> u32 {
        (u + 2) / 3
    }

    pub fn var_number(&self, var: GammaVar) -> u64 {
        let w = self.q_per_step() as u64;
        match var {
            GammaVar::Q { u, i } => (u as u64 - 1) * w + (i + self.span()) as u64 + 1,
            GammaVar::P { u, v } => {
                self.k as u64 * w + (u as u64 - 1) * self.t as u64 + v as u64
            }
        }
    }

    /// Inverse of [`GammaParams::var_number`].
    pub fn var_from_number(&self, num: u64) -> Option<GammaVar> {
        if num == 0 || num > self.num_vars() {
            return None;
        }
        let w = self.q_per_step() as u64;
        let z = num - 1;
        if z < self.k as u64 * w {
            Some(GammaVar::Q {
                u: (z / w) as u32 + 1,
                i: (z % w) as i32 - self.span(),
            })
        } else {
            let z = z - self.k as u64 * w;
            Some(GammaVar::P {
                u: (z / self.t as u64) as u32 + 1,
                v: (z % self.t as u64) as u32 + 1,
            })
        }
    }

    pub fn all_vars(&self) -> impl Iterator<Item = GammaVar> + '_ {
        (1..=self.num_vars()).map(|n| self.var_from_number(n).unwrap())
    }
}

impl fmt::Display for GammaParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} s={} k={} t={}", self.n, self.s, self.k, self.t)
    }
}

/// Smallest `t` with `2^t ≥ k^3`, i.e. `⌈3·log2 k⌉`.
pub fn selector_bits(k: u32) -> u32 {
    let cube = (k as u128).pow(3);
    let mut t = 0;
    while (1u128 << t) < cube {
        t += 1;
    }
    t
}

/// A variable of `Γ(n,s,k)`.
///
/// `Q{u,i}` says literal `i` occurs in step `u` (`i = 0` is the constant 1,
/// `±j` for `j ≤ n` are `x_j`/`¬x_j`, `±(n+j)` are `y_j`/`¬y_j`).
/// `P{u,v}` is bit `v` of the selector of step `u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GammaVar {
    Q { u: u32, i: i32 },
    P { u: u32, v: u32 },
}

impl fmt::Display for GammaVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GammaVar::Q { u, i } => write!(f, "q{u}[{i}]"),
            GammaVar::P { u, v } => write!(f, "p{u}[{v}]"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GammaLit {
    pub var: GammaVar,
    pub positive: bool,
}

impl GammaLit {
    pub fn new(var: GammaVar, positive: bool) -> Self {
        GammaLit { var, positive }
    }

    pub fn eval(self, value: bool) -> bool {
        value == self.positive
    }
}

impl fmt::Display for GammaLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("-")?;
        }
        write!(f, "{}", self.var)
    }
}
