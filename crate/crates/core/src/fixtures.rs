//! Small unsatisfiable CNFs with ER refutations, used by tests, benches
//! and the command line.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::logic::{Clause, ErRefutation, Gate, Justification, ProofStep, Var};

/// A named `Δ` with a checked ER refutation.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub er: ErRefutation,
}

impl Fixture {
    pub fn delta(&self) -> &[Clause] {
        &self.er.delta
    }

    pub fn n(&self) -> u32 {
        self.er.n
    }
}

fn x(i: u32) -> Var {
    Var::X(i)
}

/// Every clause over `x_1..x_n` containing each variable once.
pub fn complete_contradiction(n: u32) -> Vec<Clause> {
    (0..1u32 << n)
        .map(|mask| Clause::new((1..=n).map(|i| x(i).lit((mask >> (n - i)) & 1 == 0))))
        .collect()
}

/// `PHP^m_h`: `m` pigeons, `h` holes, `x_{(p-1)h + j}` = pigeon `p` in hole `j`.
pub fn pigeonhole(m: u32, h: u32) -> Vec<Clause> {
    let v = |p: u32, j: u32| x((p - 1) * h + j);
    let mut out: Vec<Clause> = (1..=m).map(|p| Clause::new((1..=h).map(|j| v(p, j).pos()))).collect();
    for j in 1..=h {
        for p in 1..=m {
            for q in p + 1..=m {
                out.push(Clause::new([v(p, j).neg(), v(q, j).neg()]));
            }
        }
    }
    out
}

fn satisfiable(n: u32, clauses: &[Clause]) -> bool {
    (0..1u64 << n).any(|a| {
        clauses
            .iter()
            .all(|c| c.eval(|v| (a >> (v.index() - 1)) & 1 == 1))
    })
}

/// Random 3-CNF on `n ≤ 20` variables: clauses over distinct variables are
/// added until the set is unsatisfiable.
pub fn random_unsat_3cnf(n: u32, seed: u64) -> Vec<Clause> {
    assert!((3..=20).contains(&n));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Clause> = Vec::new();
    while satisfiable(n, &out) {
        let mut vars = Vec::new();
        while vars.len() < 3 {
            let v = rng.gen_range(1..=n);
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        let c = Clause::new(vars.into_iter().map(|v| x(v).lit(rng.gen())));
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

/// Tree-like resolution refutation of an unsatisfiable CNF over
/// `x_1..x_n`, found by splitting on variables in index order. Premise `i`
/// is clause `i`. Returns `None` when the CNF is satisfiable.
pub fn tree_refutation(n: u32, clauses: &[Clause]) -> Option<Vec<ProofStep>> {
    struct Search<'a> {
        clauses: &'a [Clause],
        steps: Vec<ProofStep>,
        initial: HashMap<usize, usize>,
    }
    impl Search<'_> {
        fn go(&mut self, n: u32, rho: &mut Vec<Option<bool>>) -> Option<usize> {
            let falsified = self.clauses.iter().position(|c| {
                c.lits().all(|l| match l.var {
                    Var::X(i) => rho[i as usize - 1].is_some_and(|b| !l.eval(b)),
                    _ => false,
                }) && !c.has_one()
            });
            if let Some(i) = falsified {
                let steps = &mut self.steps;
                let clauses = self.clauses;
                return Some(*self.initial.entry(i).or_insert_with(|| {
                    steps.push(ProofStep::new(clauses[i].clone(), Justification::Initial(i)));
                    steps.len() - 1
                }));
            }
            let v = rho.iter().position(Option::is_none)? as u32 + 1;
            rho[v as usize - 1] = Some(true);
            let one = self.go(n, rho);
            rho[v as usize - 1] = Some(false);
            let zero = self.go(n, rho);
            rho[v as usize - 1] = None;
            let (one, zero) = (one?, zero?);
            let (c1, c0) = (&self.steps[one].clause, &self.steps[zero].clause);
            if !c1.contains(x(v).neg()) {
                return Some(one);
            }
            if !c0.contains(x(v).pos()) {
                return Some(zero);
            }
            let r = c0.resolve(c1, x(v).pos());
            self.steps
                .push(ProofStep::new(r, Justification::Resolution(zero, one, x(v).pos())));
            Some(self.steps.len() - 1)
        }
    }
    let mut s = Search {
        clauses,
        steps: Vec::new(),
        initial: HashMap::new(),
    };
    let mut rho = vec![None; n as usize];
    let last = s.go(n, &mut rho)?;
    if last + 1 != s.steps.len() {
        let c = s.steps[last].clause.clone();
        s.steps.push(ProofStep::new(c, Justification::Weakening(last)));
    }
    Some(s.steps)
}

/// A refutation that routes the final resolution on `x_1` through the
/// copy-gate `y_1 := x_1`, turning a tree refutation into an ER refutation.
/// The premise indices of `steps` must refer to `Δ` only.
pub fn via_copy_gate(n: u32, delta: Vec<Clause>, mut steps: Vec<ProofStep>) -> ErRefutation {
    let d = delta.len();
    let last = steps.len() - 1;
    if let Justification::Resolution(zero, one, pivot) = steps[last].rule {
        if pivot == x(1).pos() && steps[zero].clause.width() == 1 && steps[one].clause.width() == 1 {
            let y1 = Var::Y(1);
            steps.pop();
            let def_pos = steps.len();
            steps.push(ProofStep::new(Clause::new([y1.pos(), x(1).neg()]), Justification::Initial(d)));
            steps.push(ProofStep::new(
                Clause::new([y1.pos()]),
                Justification::Resolution(zero, def_pos, x(1).pos()),
            ));
            let def_neg = steps.len();
            steps.push(ProofStep::new(Clause::new([y1.neg(), x(1).pos()]), Justification::Initial(d + 1)));
            steps.push(ProofStep::new(
                Clause::new([y1.neg()]),
                Justification::Resolution(def_neg, one, x(1).pos()),
            ));
            steps.push(ProofStep::new(
                Clause::empty(),
                Justification::Resolution(def_pos + 1, def_neg + 1, y1.pos()),
            ));
            return ErRefutation::new(n, delta, vec![Gate::Input(1)], steps);
        }
    }
    ErRefutation::new(n, delta, vec![], steps)
}

fn tree_fixture(name: String, n: u32, delta: Vec<Clause>) -> Fixture {
    let steps = tree_refutation(n, &delta).expect("fixture is unsatisfiable");
    Fixture {
        name,
        er: via_copy_gate(n, delta, steps),
    }
}

/// `{x_1}, {¬x_1}` with the three-line refutation.
pub fn one_variable() -> Fixture {
    let delta = vec![Clause::new([x(1).pos()]), Clause::new([x(1).neg()])];
    let steps = vec![
        ProofStep::new(delta[0].clone(), Justification::Initial(0)),
        ProofStep::new(delta[1].clone(), Justification::Initial(1)),
        ProofStep::new(Clause::empty(), Justification::Resolution(0, 1, x(1).pos())),
    ];
    Fixture {
        name: "complete-1".into(),
        er: ErRefutation::new(1, delta, vec![], steps),
    }
}

/// The four clauses over `x_1, x_2`, refuted through `y_1 := x_1`.
pub fn two_variables() -> Fixture {
    tree_fixture("complete-2".into(), 2, complete_contradiction(2))
}

pub fn php_2_1() -> Fixture {
    tree_fixture("php-2-1".into(), 2, pigeonhole(2, 1))
}

pub fn php_3_2() -> Fixture {
    tree_fixture("php-3-2".into(), 6, pigeonhole(3, 2))
}

pub fn random_3cnf(n: u32, seed: u64) -> Fixture {
    tree_fixture(format!("random3-n{n}-seed{seed}"), n, random_unsat_3cnf(n, seed))
}

/// The fixture families used by the end-to-end tests.
pub fn all() -> Vec<Fixture> {
    vec![one_variable(), two_variables(), php_2_1(), random_3cnf(5, 7)]
}

/// Looks a fixture up by name (`complete-1`, `complete-2`, `php-2-1`,
/// `php-3-2`, `random3-n<N>-seed<S>`).
pub fn by_name(name: &str) -> Option<Fixture> {
    match name {
        "complete-1" => Some(one_variable()),
        "complete-2" => Some(two_variables()),
        "php-2-1" => Some(php_2_1()),
        "php-3-2" => Some(php_3_2()),
        _ => {
            let rest = name.strip_prefix("random3-n")?;
            let (n, seed) = rest.split_once("-seed")?;
            let n: u32 = n.parse().ok()?;
            if !(3..=12).contains(&n) {
                return None;
            }
            Some(random_3cnf(n, seed.parse().ok()?))
        }
    }
}
