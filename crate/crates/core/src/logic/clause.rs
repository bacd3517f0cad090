use std::collections::BTreeSet;
use std::fmt;

/// A propositional variable.
///
/// `X` are the inputs of a circuit (or the variables of a refuted CNF),
/// `Y` and `Z` are two named copies of the gate variables of a circuit.
/// Extension variables of an ER refutation live in the `Y` family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X(u32),
    Y(u32),
    Z(u32),
}

impl Var {
    pub fn index(self) -> u32 {
        match self {
            Var::X(i) | Var::Y(i) | Var::Z(i) => i,
        }
    }

    pub fn lit(self, positive: bool) -> Lit {
        Lit { var: self, positive }
    }

    pub fn pos(self) -> Lit {
        self.lit(true)
    }

    pub fn neg(self) -> Lit {
        self.lit(false)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X(i) => write!(f, "x{i}"),
            Var::Y(i) => write!(f, "y{i}"),
            Var::Z(i) => write!(f, "z{i}"),
        }
    }
}

/// Which family of gate variables a circuit's encoding should use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CopyTag {
    Y,
    Z,
}

impl CopyTag {
    pub fn var(self, index: u32) -> Var {
        match self {
            CopyTag::Y => Var::Y(index),
            CopyTag::Z => Var::Z(index),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit {
    pub var: Var,
    pub positive: bool,
}

impl Lit {
    /// `ℓ^b`: the literal itself for `b = true`, its negation otherwise.
    pub fn pow(self, b: bool) -> Lit {
        if b {
            self
        } else {
            !self
        }
    }

    pub fn eval(self, value: bool) -> bool {
        value == self.positive
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit {
            var: self.var,
            positive: !self.positive,
        }
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("-")?;
        }
        write!(f, "{}", self.var)
    }
}

/// A clause of R(1,w): a set of literals, optionally containing the constant 1.
///
/// Both polarities of a variable may be present. The constant does not count
/// towards [`Clause::width`].
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clause {
    lits: BTreeSet<Lit>,
    one: bool,
}

impl Clause {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The dummy clause `{1}`.
    pub fn one() -> Self {
        Clause {
            lits: BTreeSet::new(),
            one: true,
        }
    }

    pub fn new<I: IntoIterator<Item = Lit>>(lits: I) -> Self {
        Clause {
            lits: lits.into_iter().collect(),
            one: false,
        }
    }

    pub fn with_one<I: IntoIterator<Item = Lit>>(lits: I, one: bool) -> Self {
        Clause {
            lits: lits.into_iter().collect(),
            one,
        }
    }

    pub fn lits(&self) -> impl ExactSizeIterator<Item = Lit> + '_ {
        self.lits.iter().copied()
    }

    pub fn lit_set(&self) -> &BTreeSet<Lit> {
        &self.lits
    }

    pub fn has_one(&self) -> bool {
        self.one
    }

    pub fn set_one(&mut self, one: bool) {
        self.one = one;
    }

    pub fn insert(&mut self, lit: Lit) -> bool {
        self.lits.insert(lit)
    }

    pub fn remove(&mut self, lit: Lit) -> bool {
        self.lits.remove(&lit)
    }

    pub fn contains(&self, lit: Lit) -> bool {
        self.lits.contains(&lit)
    }

    pub fn mentions(&self, var: Var) -> bool {
        self.contains(var.pos()) || self.contains(var.neg())
    }

    pub fn width(&self) -> usize {
        self.lits.len()
    }

    /// True for the empty clause (no literals and no constant).
    pub fn is_empty(&self) -> bool {
        self.lits.is_empty() && !self.one
    }

    /// Contains some variable in both polarities.
    pub fn is_tautology(&self) -> bool {
        self.lits
            .iter()
            .any(|l| !l.positive && self.lits.contains(&!*l))
    }

    pub fn is_subset(&self, other: &Clause) -> bool {
        (!self.one || other.one) && self.lits.is_subset(&other.lits)
    }

    /// `(self ∖ {pivot}) ∪ (other ∖ {¬pivot})`.
    pub fn resolve(&self, other: &Clause, pivot: Lit) -> Clause {
        let mut lits = self.lits.clone();
        lits.remove(&pivot);
        lits.extend(other.lits.iter().copied().filter(|&l| l != !pivot));
        Clause {
            lits,
            one: self.one || other.one,
        }
    }

    pub fn union(&self, other: &Clause) -> Clause {
        Clause {
            lits: self.lits.union(&other.lits).copied().collect(),
            one: self.one || other.one,
        }
    }

    /// Value under a total assignment of the mentioned variables.
    pub fn eval(&self, mut value: impl FnMut(Var) -> bool) -> bool {
        self.one || self.lits.iter().any(|l| l.eval(value(l.var)))
    }

    /// Literals over `X` variables only.
    pub fn x_part(&self) -> impl Iterator<Item = Lit> + '_ {
        self.lits.iter().copied().filter(|l| matches!(l.var, Var::X(_)))
    }
}

impl FromIterator<Lit> for Clause {
    fn from_iter<I: IntoIterator<Item = Lit>>(iter: I) -> Self {
        Clause::new(iter)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("empty");
        }
        let mut first = true;
        if self.one {
            f.write_str("1")?;
            first = false;
        }
        for l in &self.lits {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
            first = false;
        }
        Ok(())
    }
}
