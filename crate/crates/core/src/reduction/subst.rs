use std::fmt;

use crate::error::{Error, Result};
use crate::gamma::{GammaParams, GammaVar};
use crate::logic::text::parse_lit;
use crate::logic::{Lit, Var};

/// What a clause-substitution puts in place of one `Γ` variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SubstItem {
    Zero,
    One,
    Lit(Lit),
    /// Disjunction of at least two distinct literals (sorted).
    Or(Vec<Lit>),
}

impl SubstItem {
    /// Normalized disjunction: empty is `Zero`, one literal is `Lit`, a
    /// disjunction containing the constant 1 is `One`.
    pub fn disjunction(lits: impl IntoIterator<Item = Lit>, one: bool) -> Self {
        if one {
            return SubstItem::One;
        }
        let mut v: Vec<Lit> = lits.into_iter().collect();
        v.sort();
        v.dedup();
        match v.len() {
            0 => SubstItem::Zero,
            1 => SubstItem::Lit(v[0]),
            _ => SubstItem::Or(v),
        }
    }

    pub fn constant(b: bool) -> Self {
        if b {
            SubstItem::One
        } else {
            SubstItem::Zero
        }
    }

    pub fn as_constant(&self) -> Option<bool> {
        match self {
            SubstItem::Zero => Some(false),
            SubstItem::One => Some(true),
            _ => None,
        }
    }

    pub fn lits(&self) -> &[Lit] {
        match self {
            SubstItem::Zero | SubstItem::One => &[],
            SubstItem::Lit(l) => std::slice::from_ref(l),
            SubstItem::Or(v) => v,
        }
    }

    /// Number of literals in the disjunction.
    pub fn width(&self) -> usize {
        self.lits().len()
    }

    pub fn eval(&self, mut alpha: impl FnMut(Var) -> bool) -> bool {
        match self {
            SubstItem::Zero => false,
            SubstItem::One => true,
            _ => self.lits().iter().any(|l| l.eval(alpha(l.var))),
        }
    }

    /// Parses `0`, `1`, a literal, or `( lit ... [T] )`.
    pub fn parse(text: &str) -> Option<Self> {
        let text = text.trim();
        match text {
            "0" => return Some(SubstItem::Zero),
            "1" | "T" => return Some(SubstItem::One),
            _ => {}
        }
        if let Some(inner) = text.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
            let mut lits = Vec::new();
            let mut one = false;
            for tok in inner.split_whitespace() {
                if tok == "T" {
                    one = true;
                } else {
                    lits.push(parse_lit(tok)?);
                }
            }
            return Some(SubstItem::disjunction(lits, one));
        }
        parse_lit(text).map(SubstItem::Lit)
    }
}

impl fmt::Display for SubstItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubstItem::Zero => f.write_str("0"),
            SubstItem::One => f.write_str("1"),
            SubstItem::Lit(l) => write!(f, "{l}"),
            SubstItem::Or(v) => {
                f.write_str("(")?;
                for l in v {
                    write!(f, " {l}")?;
                }
                f.write_str(" )")
            }
        }
    }
}

/// `sel(z, ā, b̄)`: coordinate-wise `ā` when `z = 1` and `b̄` when `z = 0`.
pub fn sel(z: Var, a: &[bool], b: &[bool]) -> Result<Vec<SubstItem>> {
    if a.len() != b.len() {
        return Err(Error::Substitution(format!(
            "sel: selector lengths differ ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    Ok(a.iter()
        .zip(b)
        .map(|(&ai, &bi)| match (ai, bi) {
            (false, false) => SubstItem::Zero,
            (true, true) => SubstItem::One,
            (true, false) => SubstItem::Lit(z.pos()),
            (false, true) => SubstItem::Lit(z.neg()),
        })
        .collect())
}

/// The `t` bits of a selector code, least significant first.
pub fn code_bits(code: u64, t: u32) -> Vec<bool> {
    (0..t).map(|v| (code >> v) & 1 == 1).collect()
}

/// A total map from the variables of `Γ(0,s,k)` to [`SubstItem`]s.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseSubstitution {
    params: GammaParams,
    items: Vec<SubstItem>,
}

impl ClauseSubstitution {
    /// Every variable mapped to `Zero`.
    pub fn new(params: GammaParams) -> Self {
        ClauseSubstitution {
            params,
            items: vec![SubstItem::Zero; params.num_vars() as usize],
        }
    }

    pub fn params(&self) -> &GammaParams {
        &self.params
    }

    pub fn get(&self, var: GammaVar) -> &SubstItem {
        &self.items[self.params.var_number(var) as usize - 1]
    }

    pub fn set(&mut self, var: GammaVar, item: SubstItem) {
        let i = self.params.var_number(var) as usize - 1;
        self.items[i] = item;
    }

    /// Items in variable-number order.
    pub fn items(&self) -> impl Iterator<Item = (GammaVar, &SubstItem)> {
        self.params.all_vars().zip(self.items.iter())
    }

    pub fn width(&self) -> usize {
        self.items.iter().map(SubstItem::width).max().unwrap_or(0)
    }

    /// Largest `x` index mentioned.
    pub fn max_input(&self) -> u32 {
        self.items
            .iter()
            .flat_map(|it| it.lits().iter().map(|l| l.var.index()))
            .max()
            .unwrap_or(0)
    }

    pub fn write_text(&self) -> String {
        let p = &self.params;
        let mut out = format!("# substitution n={} s={} k={}\n", p.n(), p.s(), p.k());
        for (var, item) in self.items() {
            match var {
                GammaVar::Q { u, i } => out.push_str(&format!("q {u} {i} = {item}\n")),
                GammaVar::P { u, v } => out.push_str(&format!("p {u} {v} = {item}\n")),
            }
        }
        out
    }

    /// Parses the text format; every variable must be given exactly once.
    pub fn parse_text(params: GammaParams, text: &str) -> Result<Self> {
        let mut items: Vec<Option<SubstItem>> = vec![None; params.num_vars() as usize];
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let l = raw.split('#').next().unwrap_or("").trim();
            if l.is_empty() {
                continue;
            }
            let (lhs, rhs) = l
                .split_once('=')
                .ok_or_else(|| Error::parse(line, "expected `<var> = <item>`"))?;
            let toks: Vec<&str> = lhs.split_whitespace().collect();
            let var = match toks.as_slice() {
                [kind, a, b] => {
                    let a: u32 = a.parse().map_err(|_| Error::parse(line, "bad step number"))?;
                    let b: i64 = b.parse().map_err(|_| Error::parse(line, "bad index"))?;
                    match *kind {
                        "q" => GammaVar::Q { u: a, i: b as i32 },
                        "p" => GammaVar::P { u: a, v: b as u32 },
                        _ => return Err(Error::parse(line, format!("unknown variable kind {kind:?}"))),
                    }
                }
                _ => return Err(Error::parse(line, "expected `q <u> <i>` or `p <u> <v>`")),
            };
            let in_range = match var {
                GammaVar::Q { u, i } => u >= 1 && u <= params.k() && i.abs() <= params.span(),
                GammaVar::P { u, v } => u >= 1 && u <= params.k() && v >= 1 && v <= params.t(),
            };
            if !in_range {
                return Err(Error::parse(line, format!("{var} is not a variable of Γ({params})")));
            }
            let item =
                SubstItem::parse(rhs).ok_or_else(|| Error::parse(line, format!("bad item {:?}", rhs.trim())))?;
            let slot = &mut items[params.var_number(var) as usize - 1];
            if slot.is_some() {
                return Err(Error::parse(line, format!("{var} given twice")));
            }
            *slot = Some(item);
        }
        let mut out = Vec::with_capacity(items.len());
        for (n, it) in items.into_iter().enumerate() {
            match it {
                Some(it) => out.push(it),
                None => {
                    let var = params.var_from_number(n as u64 + 1).unwrap();
                    return Err(Error::Substitution(format!("no item for {var}")));
                }
            }
        }
        Ok(ClauseSubstitution { params, items: out })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sel_table() {
        let z = Var::X(1);
        assert_eq!(sel(z, &[true], &[false]).unwrap(), vec![SubstItem::Lit(z.pos())]);
        assert_eq!(sel(z, &[false], &[false]).unwrap(), vec![SubstItem::Zero]);
        assert_eq!(
            sel(z, &[true, false, true], &[true, true, false]).unwrap(),
            vec![SubstItem::One, SubstItem::Lit(z.neg()), SubstItem::Lit(z.pos())]
        );
        assert!(sel(z, &[true], &[]).is_err());
    }

    #[test]
    fn sel_selects() {
        let z = Var::X(3);
        for a in 0..16u64 {
            for b in 0..16u64 {
                let items = sel(z, &code_bits(a, 4), &code_bits(b, 4)).unwrap();
                for zv in [false, true] {
                    let got: Vec<bool> = items.iter().map(|it| it.eval(|_| zv)).collect();
                    assert_eq!(got, code_bits(if zv { a } else { b }, 4));
                }
            }
        }
    }

    #[test]
    fn item_parse_and_normalize() {
        let x1 = Var::X(1).pos();
        assert_eq!(SubstItem::parse("( x1 T )"), Some(SubstItem::One));
        assert_eq!(SubstItem::parse("( x1 )"), Some(SubstItem::Lit(x1)));
        assert_eq!(SubstItem::parse("( )"), Some(SubstItem::Zero));
        let or = SubstItem::parse("( -x2 x1 )").unwrap();
        assert_eq!(or.width(), 2);
        assert_eq!(SubstItem::parse(&or.to_string()), Some(or));
        assert_eq!(SubstItem::parse("q"), None);
    }

    #[test]
    fn text_round_trip() {
        let p = GammaParams::new(0, 1, 3).unwrap();
        let mut s = ClauseSubstitution::new(p);
        s.set(GammaVar::Q { u: 2, i: 0 }, SubstItem::disjunction([Var::X(1).pos(), Var::X(2).neg()], false));
        s.set(GammaVar::P { u: 1, v: 1 }, SubstItem::Lit(Var::X(1).pos()));
        let text = s.write_text();
        assert_eq!(ClauseSubstitution::parse_text(p, &text).unwrap(), s);
        let missing: String = text.lines().take(5).map(|l| format!("{l}\n")).collect();
        assert!(ClauseSubstitution::parse_text(p, &missing).is_err());
    }
}
