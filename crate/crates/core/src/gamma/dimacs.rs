use std::io::Write;

use super::params::GammaParams;
use crate::error::Result;

/// Number of comment lines [`write_dimacs`] puts before the `p cnf` line.
pub const DIMACS_HEADER_LINES: usize = 4;

/// Streams `Γ(n,s,k)` as DIMACS, in stream order.
pub fn write_dimacs(p: &GammaParams, out: &mut impl Write) -> Result<()> {
    let counts = p.clause_count()?;
    let w = p.q_per_step();
    writeln!(out, "c gamma n={} s={} k={} t={}", p.n(), p.s(), p.k(), p.t())?;
    writeln!(out, "c var(q[u][i]) = (u-1)*{w} + (i+{}) + 1", p.span())?;
    writeln!(out, "c var(p[u][v]) = {}*{w} + (u-1)*{} + v", p.k(), p.t())?;
    let groups: Vec<String> = counts
        .per_group
        .iter()
        .map(|(g, c)| format!("{g}={c}"))
        .collect();
    writeln!(out, "c groups {}", groups.join(" "))?;
    writeln!(out, "p cnf {} {}", p.num_vars(), counts.total)?;
    let mut line = String::new();
    for c in p.clauses() {
        line.clear();
        for l in c.dimacs(p) {
            line.push_str(&l.to_string());
            line.push(' ');
        }
        line.push('0');
        writeln!(out, "{line}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::text::parse_dimacs;
    use crate::logic::{Clause, Var};

    #[test]
    fn small_case_header_and_roundtrip() {
        let p = GammaParams::new(0, 1, 3).unwrap();
        let mut buf = Vec::new();
        write_dimacs(&p, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().nth(DIMACS_HEADER_LINES).unwrap(), "p cnf 24 131");
        let cnf = parse_dimacs(&text).unwrap();
        assert_eq!(cnf.num_vars, 24);
        let expected: Vec<Clause> = p
            .clauses()
            .map(|c| Clause::new(c.dimacs(&p).into_iter().map(|l| Var::X(l.unsigned_abs() as u32).lit(l > 0))))
            .collect();
        assert_eq!(cnf.clauses, expected);
    }
}
