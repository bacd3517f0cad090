//! Acceptance criteria 1 to 9. Every test writes one line
//! `criterion <N>: PASS|FAIL <detail>` to stderr (bypassing output capture)
//! and then asserts the outcome.

use std::fmt::Display;
use std::io::Write as _;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use gamma_core::fixtures;
use gamma_core::gamma::{
    brute_force_falsified, find_falsified, find_falsified_implicit, write_dimacs, ExplicitAssignment,
    GammaAssignment, ImplicitAssignment, ImplicitParams, DEFAULT_M_CAP,
};
use gamma_core::logic::{uniqueness_proof, Justification, Refutation, UNIQUENESS_SLOPE};
use gamma_core::randgen::{
    detect_solver, run_benchmark, run_solver, sample, BenchConfig, RandomProcessConfig, Verdict,
};
use gamma_core::reduction::{
    apply_oracle, build_substitution, gamma_params_for, normalize_er, verify_reduction, ClauseSubstitution,
    SubstItem,
};
use gamma_core::{Circuit, Clause, GammaParams, GammaVar, Gate, Lit, Var};

const GRID: [(u32, u32, u32); 6] = [(0, 1, 3), (0, 1, 9), (0, 2, 6), (0, 2, 12), (1, 2, 6), (2, 3, 9)];

/// Clause count bound `total ≤ COUNT_CONSTANT · k^5` across the grid.
const COUNT_CONSTANT: f64 = 1.0;

fn line(text: impl Display) {
    let _ = writeln!(std::io::stderr(), "{text}");
}

fn report(n: u32, ok: bool, detail: impl Display) {
    line(format!("criterion {n}: {} {detail}", if ok { "PASS" } else { "FAIL" }));
    assert!(ok, "criterion {n} failed: {detail}");
}

fn params(g: (u32, u32, u32)) -> GammaParams {
    GammaParams::new(g.0, g.1, g.2).unwrap()
}

/// Smallest `t` with `2^t ≥ k^3`, i.e. `⌈3·log2 k⌉`.
fn ceil_3log2(k: u32) -> u32 {
    let cube = (k as u128).pow(3);
    (0..).find(|&t| 1u128 << t >= cube).unwrap()
}

#[test]
fn criterion_1_size_bounds() {
    let start = Instant::now();
    let mut ok = true;
    let mut worst = 0f64;
    for g in GRID {
        let p = params(g);
        let counts = p.clause_count().unwrap();
        let (mut len, mut width) = (0u64, 0usize);
        for c in p.clauses() {
            len += 1;
            width = width.max(c.width());
        }
        let k5 = (g.2 as f64).powi(5);
        worst = worst.max(counts.total as f64 / k5);
        ok &= width <= 3 + ceil_3log2(g.2) as usize;
        ok &= len == counts.total;
        ok &= counts.total as f64 <= COUNT_CONSTANT * k5;
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(60);
    report(
        1,
        ok,
        format!("C={COUNT_CONSTANT} (largest total/k^5 = {worst:.3}), {elapsed:.1?}"),
    );
}

/// Clauses of a DIMACS text as `(positive mask, negative mask)` over ≤ 32 variables.
fn dimacs_masks(text: &str) -> (u32, Vec<(u32, u32)>) {
    let mut vars = 0;
    let mut out = Vec::new();
    for l in text.lines() {
        if l.starts_with('c') {
            continue;
        }
        if let Some(rest) = l.strip_prefix("p cnf") {
            vars = rest.split_whitespace().next().unwrap().parse().unwrap();
            continue;
        }
        let (mut pos, mut neg) = (0u32, 0u32);
        for lit in l.split_whitespace().map(|t| t.parse::<i64>().unwrap()) {
            match lit {
                0 => {}
                l if l > 0 => pos |= 1 << (l - 1),
                l => neg |= 1 << (-l - 1),
            }
        }
        out.push((pos, neg));
    }
    (vars, out)
}

#[test]
fn criterion_2_unsatisfiability() {
    let start = Instant::now();
    let mut text = Vec::new();
    write_dimacs(&params((0, 1, 3)), &mut text).unwrap();
    let (vars, clauses) = dimacs_masks(&String::from_utf8(text).unwrap());
    assert_eq!(vars, 24);
    let satisfying: u64 = (0..1u32 << 8)
        .into_par_iter()
        .map(|hi| {
            (0..1u32 << 16)
                .filter(|&lo| {
                    let a = hi << 16 | lo;
                    clauses.iter().all(|&(pos, neg)| a & pos != 0 || !a & neg != 0)
                })
                .count() as u64
        })
        .sum();
    let exhaustive = start.elapsed();
    let mut ok = satisfying == 0 && exhaustive < Duration::from_secs(300);
    let mut detail = format!("Γ(0,1,3): {satisfying} of 2^24 assignments satisfy it ({exhaustive:.1?})");

    match detect_solver() {
        None => {
            line("warning: no SAT solver configured; solver part of criterion 2 skipped");
            detail.push_str("; solver runs skipped");
        }
        Some(solver) => {
            let dir = tempfile::tempdir().unwrap();
            let mut verdicts = Vec::new();
            for g in &GRID[1..] {
                let path = dir.path().join(format!("gamma-{}-{}-{}.cnf", g.0, g.1, g.2));
                let mut f = std::io::BufWriter::new(std::fs::File::create(&path).unwrap());
                write_dimacs(&params(*g), &mut f).unwrap();
                f.flush().unwrap();
                drop(f);
                let run = run_solver(&solver, &path, Duration::from_secs(600)).unwrap();
                ok &= run.verdict == Verdict::Unsat;
                verdicts.push(format!("{g:?}={} {:.1?}", run.verdict, run.wall_time));
            }
            detail.push_str(&format!("; {}: {}", solver.name, verdicts.join(", ")));
        }
    }
    report(2, ok, detail);
}

#[test]
fn criterion_3_search_evaluator() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut checked, mut failures) = (0u64, 0u64);
    for g in GRID {
        let p = params(g);
        for _ in 0..1000 {
            let bits: Vec<bool> = (0..p.num_vars()).map(|_| rng.gen()).collect();
            let a = ExplicitAssignment::new(p, bits).unwrap();
            checked += 1;
            let Ok(found) = find_falsified(&p, &a) else {
                failures += 1;
                continue;
            };
            let streamed = p.clauses().nth(found.position as usize).unwrap();
            let brute = brute_force_falsified(&p, &a);
            let confirmed = streamed == found.clause
                && !streamed.eval(|v| a.value(v))
                && brute.is_some_and(|b| b.position == found.position);
            if !confirmed {
                failures += 1;
            }
        }
    }
    report(3, failures == 0, format!("{checked} assignments over the grid, {failures} failures"));
}

fn random_gate(rng: &mut impl Rng, n: u32, i: u32) -> Gate {
    let y = |rng: &mut dyn rand::RngCore| rng.gen_range(1..i);
    match rng.gen_range(0..10) {
        0 => {
            if rng.gen() {
                Gate::Const1
            } else {
                Gate::Const0
            }
        }
        1..=3 if n > 0 => Gate::Input(rng.gen_range(1..=n)),
        4 | 5 if i > 1 => Gate::Not(y(rng)),
        6 | 7 if i > 1 => Gate::Or(y(rng), y(rng)),
        8 | 9 if i > 1 => Gate::And(y(rng), y(rng)),
        _ if n > 0 => Gate::Input(rng.gen_range(1..=n)),
        _ => Gate::Const0,
    }
}

fn random_circuit(rng: &mut impl Rng, n: u32, s: u32) -> Circuit {
    Circuit::new(n, (1..=s).map(|i| random_gate(rng, n, i)).collect()).unwrap()
}

/// A circuit on `2m` inputs whose table is 1 exactly on `cells`.
fn table_circuit(m: u32, cells: &[(u64, u64)]) -> Circuit {
    if cells.is_empty() {
        return Circuit::new(2 * m, vec![Gate::Const0]).unwrap();
    }
    let mut gates = Vec::new();
    for j in 1..=2 * m {
        gates.push(Gate::Input(j));
        gates.push(Gate::Not(gates.len() as u32));
    }
    // input bit j (1-based, big-endian row then column) has y_{2j-1} and its negation y_{2j}
    let lit = |j: u32, value: bool| if value { 2 * j - 1 } else { 2 * j };
    let mut terms = Vec::new();
    for &(row, col) in cells {
        let bit = |j: u32| {
            if j <= m {
                (row >> (m - j)) & 1 == 1
            } else {
                (col >> (2 * m - j)) & 1 == 1
            }
        };
        let mut acc = lit(1, bit(1));
        for j in 2..=2 * m {
            gates.push(Gate::And(acc, lit(j, bit(j))));
            acc = gates.len() as u32;
        }
        terms.push(acc);
    }
    let mut acc = terms[0];
    for &t in &terms[1..] {
        gates.push(Gate::Or(acc, t));
        acc = gates.len() as u32;
    }
    Circuit::new(2 * m, gates).unwrap()
}

#[test]
fn criterion_4_implicit_agreement() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut total, mut agree) = (0u32, 0u32);
    for m in [4u32, 6] {
        let ip = ImplicitParams::new(m, DEFAULT_M_CAP).unwrap();
        let (rows, cols) = (ip.gamma.k() as u64, 1u64 << m);
        let mut circuits = vec![
            Circuit::new(2 * m, vec![Gate::Const0]).unwrap(),
            Circuit::new(2 * m, vec![Gate::Const1]).unwrap(),
        ];
        for _ in 0..8 {
            let cells: Vec<(u64, u64)> = (0..rng.gen_range(1..=12))
                .map(|_| (rng.gen_range(0..rows), rng.gen_range(0..cols)))
                .collect();
            circuits.push(table_circuit(m, &cells));
        }
        while circuits.len() < 50 {
            let s = rng.gen_range(1..=40);
            circuits.push(random_circuit(&mut rng, 2 * m, s));
        }
        for d in &circuits {
            total += 1;
            let implicit = find_falsified_implicit(m, d, DEFAULT_M_CAP).unwrap();
            let table = ImplicitAssignment::new(ip, d).unwrap().materialize();
            let explicit = find_falsified(&ip.gamma, &table).unwrap();
            if implicit.falsified == explicit {
                agree += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    report(
        4,
        agree == total && elapsed < Duration::from_secs(120),
        format!("{agree}/{total} circuits agree for m in {{4, 6}}, {elapsed:.1?}"),
    );
}

fn max_width(delta: &[Clause]) -> usize {
    delta.iter().map(Clause::width).max().unwrap_or(0)
}

#[test]
fn criterion_5_reduction_end_to_end() {
    let mut ok = true;
    let mut parts = Vec::new();
    for f in fixtures::all() {
        let start = Instant::now();
        let w = max_width(f.delta());
        let nr = normalize_er(&f.er).unwrap();
        let checked = nr.check().is_ok();
        let sigma = build_substitution(&nr, gamma_params_for(&nr).unwrap()).unwrap();
        let r = verify_reduction(f.delta(), &sigma).unwrap();
        let elapsed = start.elapsed();
        let good = checked
            && sigma.width() <= w.max(3)
            && r.is_valid()
            && r.classified() == r.total
            && elapsed < Duration::from_secs(300);
        ok &= good;
        parts.push(format!(
            "{} k={} width={} {}/{} classified {elapsed:.1?}",
            f.name,
            nr.k(),
            sigma.width(),
            r.classified(),
            r.total
        ));
    }
    report(5, ok, parts.join("; "));
}

#[test]
fn criterion_6_oracle_reduction() {
    let mut ok = true;
    let mut parts = Vec::new();
    for f in fixtures::all() {
        let n = f.n();
        assert!(n <= 6);
        let w = max_width(f.delta());
        let nr = normalize_er(&f.er).unwrap();
        let sigma = build_substitution(&nr, gamma_params_for(&nr).unwrap()).unwrap();
        let mut most = 0;
        for a in 0..1u32 << n {
            let alpha: Vec<bool> = (0..n).map(|i| (a >> i) & 1 == 1).collect();
            match apply_oracle(f.delta(), &sigma, &alpha) {
                Ok(ans) => {
                    ok &= !ans.delta_clause.eval(|v| alpha[v.index() as usize - 1]);
                    ok &= f.delta()[ans.delta_index] == ans.delta_clause;
                    most = most.max(ans.max_queries_per_var);
                }
                Err(_) => ok = false,
            }
        }
        ok &= most <= w;
        parts.push(format!("{} 2^{n} assignments, queries per variable ≤ {most} (w={w})", f.name));
    }
    report(6, ok, parts.join("; "));
}

#[test]
fn criterion_7_randgen_soundness() {
    let mut ok = true;
    let mut detail = Vec::new();

    let mut brute_unsat = 0;
    for seed in 0..100 {
        let g = sample(RandomProcessConfig { s: 1, k: 3, seed }).unwrap();
        let d = g.params.definition_steps();
        let scoped = g.residual_vars().iter().all(|v| match *v {
            GammaVar::Q { u, .. } | GammaVar::P { u, .. } => u > d,
        });
        if scoped && g.brute_force_satisfiable(26) == Some(false) {
            brute_unsat += 1;
        }
    }
    ok &= brute_unsat == 100;
    detail.push(format!("(1,3): {brute_unsat}/100 UNSAT by exhaustive search"));

    let deterministic = (0..10).all(|seed| {
        let cfg = RandomProcessConfig { s: 2, k: 12, seed };
        sample(cfg).unwrap().to_dimacs() == sample(cfg).unwrap().to_dimacs()
    });
    ok &= deterministic;
    detail.push(format!("repeated runs byte-identical: {deterministic}"));

    match detect_solver() {
        None => {
            line("warning: no SAT solver configured; solver part of criterion 7 skipped");
            detail.push("(2,12): solver runs skipped".into());
        }
        Some(solver) => {
            let dir = tempfile::tempdir().unwrap();
            let cfg = BenchConfig {
                grid: vec![(2, 12)],
                seeds: (0..100).collect(),
                solvers: vec![solver],
                timeout: Duration::from_secs(300),
                jobs: std::thread::available_parallelism().map_or(1, |n| n.get()),
                workdir: dir.path().to_path_buf(),
            };
            let rows = run_benchmark(&cfg).unwrap();
            let count = |v: &Verdict| rows.iter().filter(|r| &r.verdict == v).count();
            let (unsat, sat) = (count(&Verdict::Unsat), count(&Verdict::Sat));
            let slowest = rows.iter().map(|r| r.wall_time).fold(0.0, f64::max);
            ok &= unsat == 100 && sat == 0;
            detail.push(format!(
                "(2,12): {unsat}/100 UNSAT, {sat} SAT, {} other via {} (slowest {slowest:.1}s)",
                rows.len() - unsat - sat,
                rows[0].solver
            ));
        }
    }
    report(7, ok, detail.join("; "));
}

#[test]
fn criterion_8_uniqueness_proofs() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut ok = true;
    let mut fitted = 0f64;
    for _ in 0..50 {
        let n = rng.gen_range(0..=3);
        let s = rng.gen_range(1..=50);
        let c = random_circuit(&mut rng, n, s);
        let u = uniqueness_proof(&c);
        ok &= u.derivation.check_derivation().is_ok();
        let (pos, neg) = u.output_equivalence();
        let (y, z) = (Var::Y(s), Var::Z(s));
        ok &= u.derivation.steps[pos].clause == Clause::new([y.pos(), z.neg()]);
        ok &= u.derivation.steps[neg].clause == Clause::new([y.neg(), z.pos()]);
        let steps = u.derivation.steps.len();
        fitted = fitted.max(steps as f64 / s as f64);
        ok &= steps <= UNIQUENESS_SLOPE * s as usize;
    }
    report(
        8,
        ok,
        format!("50 circuits checked, fitted c = {fitted:.2} (documented bound {UNIQUENESS_SLOPE})"),
    );
}

fn random_item(rng: &mut impl Rng, n: u32) -> SubstItem {
    let lit = |rng: &mut ChaCha8Rng| Var::X(rng.gen_range(1..=n)).lit(rng.gen());
    let mut r = ChaCha8Rng::seed_from_u64(rng.gen());
    match r.gen_range(0..4) {
        0 => SubstItem::Zero,
        1 => SubstItem::One,
        2 => SubstItem::Lit(lit(&mut r)),
        _ => SubstItem::disjunction([lit(&mut r), lit(&mut r)], false),
    }
}

fn mutate_sigma(rng: &mut impl Rng, sigma: &ClauseSubstitution, n: u32) -> ClauseSubstitution {
    let p = *sigma.params();
    let vars: Vec<GammaVar> = p.all_vars().collect();
    let mut out = sigma.clone();
    let var = vars[rng.gen_range(0..vars.len())];
    loop {
        let item = random_item(rng, n);
        if &item != sigma.get(var) {
            out.set(var, item);
            return out;
        }
    }
}

fn mutate_proof(rng: &mut impl Rng, r: &Refutation, n: u32) -> Refutation {
    let mut out = r.clone();
    let u = rng.gen_range(0..r.steps.len());
    let lits: Vec<Lit> = (1..=n).flat_map(|i| [Var::X(i).pos(), Var::X(i).neg()]).collect();
    loop {
        let step = &mut out.steps[u];
        match rng.gen_range(0..3) {
            0 => {
                let l = lits[rng.gen_range(0..lits.len())];
                if !step.clause.remove(l) {
                    step.clause.insert(l);
                }
            }
            1 => {
                let v = rng.gen_range(0..u.max(1));
                step.rule = match step.rule {
                    Justification::Initial(_) => Justification::Initial(rng.gen_range(0..r.premises.len())),
                    Justification::OneAxiom => Justification::Weakening(v),
                    Justification::Weakening(_) => Justification::Weakening(v),
                    Justification::Resolution(a, b, l) => match rng.gen_range(0..3) {
                        0 => Justification::Resolution(v, b, l),
                        1 => Justification::Resolution(a, v, l),
                        _ => Justification::Resolution(a, b, lits[rng.gen_range(0..lits.len())]),
                    },
                };
            }
            _ => {
                let v = rng.gen_range(0..u.max(1));
                step.rule = match step.rule {
                    Justification::Resolution(..) => Justification::Weakening(v),
                    _ => Justification::Resolution(v, v, lits[rng.gen_range(0..lits.len())]),
                };
            }
        }
        if out.steps[u] != r.steps[u] {
            return out;
        }
        out.steps[u] = r.steps[u].clone();
    }
}

#[test]
fn criterion_9_mutation_robustness() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let f = fixtures::two_variables();
    let n = f.n();
    let nr = normalize_er(&f.er).unwrap();
    let sigma = build_substitution(&nr, gamma_params_for(&nr).unwrap()).unwrap();
    assert!(verify_reduction(f.delta(), &sigma).unwrap().is_valid());
    let mut sigma_caught = 0;
    let (mut still_valid, mut missed) = (0, Vec::new());
    for _ in 0..100 {
        let bad = mutate_sigma(&mut rng, &sigma, n);
        if !verify_reduction(f.delta(), &bad).unwrap().is_valid() {
            sigma_caught += 1;
            continue;
        }
        // an accepted corruption must still answer every α correctly
        let answers = (0..1u32 << n).all(|a| {
            let alpha: Vec<bool> = (0..n).map(|i| (a >> i) & 1 == 1).collect();
            apply_oracle(f.delta(), &bad, &alpha)
                .is_ok_and(|ans| !ans.delta_clause.eval(|v| alpha[v.index() as usize - 1]))
        });
        still_valid += answers as u32;
        if missed.len() < 3 {
            let (var, item) = bad.items().find(|(v, it)| sigma.get(*v) != *it).unwrap();
            missed.push(format!("{var} {} -> {item}", sigma.get(var)));
        }
    }

    let proof = nr.refutation();
    proof.check().unwrap();
    let mut proof_caught = 0;
    for _ in 0..100 {
        if mutate_proof(&mut rng, &proof, n).check().is_err() {
            proof_caught += 1;
        }
    }
    let mut detail = format!("σ corruptions caught {sigma_caught}/100, proof corruptions rejected {proof_caught}/100");
    if !missed.is_empty() {
        detail.push_str(&format!(
            "; {still_valid}/{} uncaught corruptions are still valid reductions (exhaustive oracle), e.g. {}",
            100 - sigma_caught,
            missed.join(", ")
        ));
    }
    report(9, sigma_caught == 100 && proof_caught == 100, detail);
}
