//! `gammakit`: command-line front end for gamma-core.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use gamma_core::gamma::{find_falsified, find_falsified_implicit, write_dimacs, ExplicitAssignment};
use gamma_core::logic::text::{parse_circuit, parse_dimacs, parse_er, parse_proof, write_er, write_steps};
use gamma_core::logic::{uniqueness_proof, CopyTag, Var};
use gamma_core::randgen::{
    detect_solver, run_benchmark, sample, write_csv, BenchConfig, RandomProcessConfig, SolverSpec, Verdict,
};
use gamma_core::reduction::{
    apply_oracle, build_substitution, gamma_params_for, normalize_er, verify_reduction, write_certificate,
    ClauseSubstitution,
};
use gamma_core::{Clause, Error, GammaParams};

#[derive(Parser)]
#[command(name = "gammakit", version, about = "Generate, check and reduce to the Γ(n,s,k) clause family")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct ParamArgs {
    #[arg(short = 'n', default_value_t = 0)]
    n: u32,
    #[arg(short = 's')]
    s: u32,
    #[arg(short = 'k')]
    k: u32,
}

impl ParamArgs {
    fn params(self) -> gamma_core::Result<GammaParams> {
        GammaParams::new(self.n, self.s, self.k)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write Γ(n,s,k) as DIMACS.
    GenGamma {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Write the definition CNF of a circuit as DIMACS (x_i is i, y_j is n+j).
    EncodeCircuit {
        circuit: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check an R(1,w) proof file; premises come from --cnf or the proof's initial steps.
    CheckProof {
        proof: PathBuf,
        #[arg(long)]
        cnf: Option<PathBuf>,
    },
    /// Check an ER refutation of a DIMACS CNF.
    CheckEr {
        #[arg(long)]
        delta: PathBuf,
        #[arg(long)]
        er: PathBuf,
    },
    /// Write the resolution proof that a circuit's computation is unique.
    UniqProof {
        circuit: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Build the clause-substitution reducing Γ(0,s,k) to a CNF with an ER refutation.
    Reduce {
        #[arg(long)]
        delta: PathBuf,
        #[arg(long)]
        er: PathBuf,
        /// Pad the refutation to this many steps.
        #[arg(short = 'k')]
        k: Option<u32>,
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Also write the normalized refutation.
        #[arg(long)]
        normalized: Option<PathBuf>,
    },
    /// Classify every clause of Γ under a substitution.
    VerifyReduction {
        #[arg(long)]
        delta: PathBuf,
        #[arg(long)]
        sub: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
        /// Write one certificate line per stream position.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Map an assignment of the CNF to a falsified clause through the reduction.
    OracleReduce {
        #[arg(long)]
        delta: PathBuf,
        #[arg(long)]
        sub: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
        /// Values of x_1..x_n as a 0/1 string.
        #[arg(long)]
        alpha: String,
    },
    /// Find a clause of Γ falsified by an explicit assignment file.
    SearchEval {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        assignment: PathBuf,
    },
    /// Solve iΓ_m for a table described by a circuit with 2m inputs.
    SearchEvalImplicit {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(short = 'm')]
        m: u32,
        #[arg(long, default_value_t = gamma_core::gamma::DEFAULT_M_CAP)]
        cap_m: u32,
    },
    /// Sample Γ(0,s,k)(C_r) for a random circuit and write it as DIMACS.
    Randgen {
        #[arg(short = 's')]
        s: u32,
        #[arg(short = 'k')]
        k: u32,
        #[arg(long)]
        seed: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Run external SAT solvers over sampled instances and write a CSV table.
    Bench {
        /// Values of s (crossed with every k).
        #[arg(short = 's', required = true, num_args = 1..)]
        s: Vec<u32>,
        #[arg(short = 'k', required = true, num_args = 1..)]
        k: Vec<u32>,
        /// First seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of consecutive seeds per cell.
        #[arg(long, default_value_t = 10)]
        seeds: u64,
        /// Solver as `name=command {input}`; repeatable. Defaults to a detected solver.
        #[arg(long)]
        solver_cmd: Vec<String>,
        /// Per-run timeout in seconds.
        #[arg(long, default_value_t = 60.0)]
        timeout: f64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Directory for instance files (a temporary one if omitted).
        #[arg(long)]
        workdir: Option<PathBuf>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Print variable, width and per-group clause counts of Γ(n,s,k).
    Stats {
        #[command(flatten)]
        params: ParamArgs,
    },
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path)
        .map_err(Error::from)
        .with_context(|| format!("reading {}", path.display()))
}

fn output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            fs::File::create(p)
                .map_err(Error::from)
                .with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_all(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    let mut out = output(path)?;
    out.write_all(text.as_bytes()).map_err(Error::from)?;
    out.flush().map_err(Error::from)?;
    Ok(())
}

fn read_delta(path: &Path) -> anyhow::Result<Vec<Clause>> {
    Ok(parse_dimacs(&read(path)?).with_context(|| format!("parsing {}", path.display()))?.clauses)
}

fn read_sub(path: &Path, params: ParamArgs) -> anyhow::Result<ClauseSubstitution> {
    let p = params.params()?;
    Ok(ClauseSubstitution::parse_text(p, &read(path)?).with_context(|| format!("parsing {}", path.display()))?)
}

fn run(cmd: Command) -> anyhow::Result<()> {
    match cmd {
        Command::GenGamma { params, out } => {
            let p = params.params()?;
            let mut w = output(out.as_deref())?;
            write_dimacs(&p, &mut w)?;
            w.flush().map_err(Error::from)?;
        }
        Command::EncodeCircuit { circuit, out } => {
            let c = parse_circuit(&read(&circuit)?)?;
            let n = c.n();
            let clauses: Vec<Clause> = c.encode_df(CopyTag::Y).into_iter().filter(|c| !c.has_one()).collect();
            let mut text = format!("c df n={} s={} var(x_i)=i var(y_j)={n}+j\n", n, c.s());
            text.push_str(&format!("p cnf {} {}\n", n + c.s(), clauses.len()));
            for cl in &clauses {
                for l in cl.lits() {
                    let v = match l.var {
                        Var::X(i) => i as i64,
                        Var::Y(j) | Var::Z(j) => (n + j) as i64,
                    };
                    text.push_str(&format!("{} ", if l.positive { v } else { -v }));
                }
                text.push_str("0\n");
            }
            write_all(out.as_deref(), &text)?;
        }
        Command::CheckProof { proof, cnf } => {
            let pt = parse_proof(&read(&proof)?).with_context(|| format!("parsing {}", proof.display()))?;
            let premises = match cnf {
                Some(path) => read_delta(&path)?,
                None => pt.implied_premises()?,
            };
            let r = pt.into_refutation(premises);
            r.check()?;
            println!("ok: refutation with {} steps, width {}", r.steps.len(), r.width());
        }
        Command::CheckEr { delta, er } => {
            let er = parse_er(&read(&er)?, read_delta(&delta)?)?;
            er.check()?;
            println!(
                "ok: ER refutation with {} extension variables and {} steps",
                er.extensions.len(),
                er.proof.steps.len()
            );
        }
        Command::UniqProof { circuit, out } => {
            let c = parse_circuit(&read(&circuit)?)?;
            let u = uniqueness_proof(&c);
            u.derivation.check_derivation()?;
            let r = &u.derivation;
            write_all(out.as_deref(), &write_steps(r.premises.len(), &r.steps))?;
        }
        Command::Reduce { delta, er, k, out, normalized } => {
            let er = parse_er(&read(&er)?, read_delta(&delta)?)?;
            er.check()?;
            let mut nr = normalize_er(&er)?;
            if let Some(k) = k {
                if k < nr.k() {
                    return Err(Error::Params(format!("k={k} is below the normalized length {}", nr.k())).into());
                }
                nr.pad_to(k);
            }
            nr.check()?;
            let p = gamma_params_for(&nr)?;
            let sigma = build_substitution(&nr, p)?;
            if let Some(path) = normalized {
                write_all(Some(&path), &write_er(&nr.to_er()))?;
            }
            write_all(out.as_deref(), &sigma.write_text())?;
            eprintln!("n={} s={} k={} w={} width={}", p.n(), p.s(), p.k(), nr.w, sigma.width());
        }
        Command::VerifyReduction { delta, sub, params, certificate } => {
            let delta = read_delta(&delta)?;
            let sigma = read_sub(&sub, params)?;
            let report = match certificate {
                Some(path) => {
                    let mut w = output(Some(&path))?;
                    let r = write_certificate(&delta, &sigma, &mut w)?;
                    w.flush().map_err(Error::from)?;
                    r
                }
                None => verify_reduction(&delta, &sigma)?,
            };
            println!(
                "total={} a={} b={} c={} unclassified={} width={}",
                report.total,
                report.case_a,
                report.case_b,
                report.case_c,
                report.failures.len(),
                sigma.width()
            );
            report.certify()?;
        }
        Command::OracleReduce { delta, sub, params, alpha } => {
            let delta = read_delta(&delta)?;
            let sigma = read_sub(&sub, params)?;
            let alpha: Vec<bool> = alpha
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(Error::Params(format!("alpha must be a 0/1 string, found {c:?}"))),
                })
                .collect::<Result<_, _>>()?;
            let ans = apply_oracle(&delta, &sigma, &alpha)?;
            println!("gamma_position={} {}", ans.gamma_clause.position, ans.gamma_clause.reason);
            println!("delta_clause={} {}", ans.delta_index + 1, ans.delta_clause);
            println!("max_queries_per_var={} total_queries={}", ans.max_queries_per_var, ans.total_queries);
        }
        Command::SearchEval { params, assignment } => {
            let p = params.params()?;
            let a = ExplicitAssignment::parse(p, &read(&assignment)?)?;
            let f = find_falsified(&p, &a)?;
            println!("position={} {}", f.position, f.reason);
        }
        Command::SearchEvalImplicit { circuit, m, cap_m } => {
            let c = parse_circuit(&read(&circuit)?)?;
            let ans = find_falsified_implicit(m, &c, cap_m)?;
            println!("position={} bits={} {}", ans.falsified.position, ans.encoded, ans.falsified.reason);
            println!("evaluations={}", ans.evaluations);
        }
        Command::Randgen { s, k, seed, out } => {
            let g = sample(RandomProcessConfig { s, k, seed })?;
            write_all(out.as_deref(), &g.to_dimacs())?;
        }
        Command::Bench { s, k, seed, seeds, solver_cmd, timeout, jobs, workdir, out } => {
            let solvers = if solver_cmd.is_empty() {
                vec![detect_solver().ok_or_else(|| {
                    Error::Solver("no solver found; pass --solver-cmd or set GAMMA_SOLVER_CMD".into())
                })?]
            } else {
                solver_cmd.iter().map(|c| SolverSpec::parse(c)).collect::<Result<_, _>>()?
            };
            if !(timeout > 0.0 && timeout.is_finite()) {
                bail!(Error::Params(format!("timeout must be positive, got {timeout}")));
            }
            let tmp = tempfile::tempdir().map_err(Error::from)?;
            let workdir = workdir.unwrap_or_else(|| tmp.path().to_path_buf());
            let cfg = BenchConfig {
                grid: s.iter().flat_map(|&s| k.iter().map(move |&k| (s, k))).collect(),
                seeds: (seed..seed + seeds).collect(),
                solvers,
                timeout: Duration::from_secs_f64(timeout),
                jobs,
                workdir,
            };
            let rows = run_benchmark(&cfg)?;
            let mut w = output(out.as_deref())?;
            write_csv(&rows, &mut w)?;
            w.flush().map_err(Error::from)?;
            let sat: Vec<&str> =
                rows.iter().filter(|r| r.verdict == Verdict::Sat).map(|r| r.instance.as_str()).collect();
            if !sat.is_empty() {
                return Err(Error::InternalSoundness(format!("SAT verdict on {}", sat.join(", "))).into());
            }
        }
        Command::Stats { params } => {
            let p = params.params()?;
            let counts = p.clause_count()?;
            println!("n={} s={} k={} t={}", p.n(), p.s(), p.k(), p.t());
            println!("variables={}", p.num_vars());
            println!("clauses={}", counts.total);
            println!("max_width={}", counts.max_width);
            for (g, c) in &counts.per_group {
                println!("{g}={c}");
            }
        }
    }
    Ok(())
}

/// Error code and exit status: 2 for I/O and environment problems, 1 otherwise.
fn classify(err: &anyhow::Error) -> (&'static str, u8) {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<Error>() {
            return (e.code(), if e.is_environment() { 2 } else { 1 });
        }
        if cause.downcast_ref::<io::Error>().is_some() {
            return ("io", 2);
        }
    }
    ("error", 1)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (code, status) = classify(&e);
            let detail = format!("{e:#}").replace('\n', " ");
            eprintln!("error: {code}: {detail}");
            ExitCode::from(status)
        }
    }
}
