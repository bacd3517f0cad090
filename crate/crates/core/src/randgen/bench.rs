//! Running external SAT solvers on sampled `Γ(0,s,k)(C_r)` instances.

use std::fmt;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use wait_timeout::ChildExt;

use super::{sample, RandomProcessConfig};
use crate::error::{Error, Result};

/// Environment variable holding a solver command template.
pub const SOLVER_ENV: &str = "GAMMA_SOLVER_CMD";

/// Solvers looked up on `PATH` when no template is given.
pub const KNOWN_SOLVERS: &[(&str, &str)] = &[
    ("kissat", "kissat -q {input}"),
    ("cadical", "cadical -q {input}"),
    ("minisat", "minisat -verb=0 {input}"),
    ("splr", "splr -q -C {input}"),
];

/// A named command template; `{input}` is replaced by the CNF path (or the
/// path is appended when the template has no placeholder).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverSpec {
    pub name: String,
    pub template: String,
}

impl SolverSpec {
    /// Parses `name=template` or a bare template (named after its program).
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let (name, template) = match text.split_once('=') {
            Some((n, t)) if !n.is_empty() && !n.contains(char::is_whitespace) && !n.contains('/') => {
                (n.to_string(), t.trim().to_string())
            }
            _ => {
                let prog = text
                    .split_whitespace()
                    .next()
                    .ok_or_else(|| Error::Solver("empty solver command".into()))?;
                let name = Path::new(prog)
                    .file_name()
                    .map_or(prog.to_string(), |f| f.to_string_lossy().into_owned());
                (name, text.to_string())
            }
        };
        if template.split_whitespace().next().is_none() {
            return Err(Error::Solver(format!("solver {name:?} has an empty command")));
        }
        Ok(SolverSpec { name, template })
    }

    fn argv(&self, input: &Path) -> Vec<String> {
        let path = input.to_string_lossy();
        let mut argv: Vec<String> = self
            .template
            .split_whitespace()
            .map(|t| t.replace("{input}", &path))
            .collect();
        if !self.template.contains("{input}") {
            argv.push(path.into_owned());
        }
        argv
    }

    pub fn program(&self) -> &str {
        self.template.split_whitespace().next().unwrap_or("")
    }

    /// The program exists as a path or on `PATH`.
    pub fn is_available(&self) -> bool {
        program_available(self.program())
    }
}

fn program_available(prog: &str) -> bool {
    if prog.contains('/') {
        return Path::new(prog).is_file();
    }
    std::env::var_os("PATH")
        .map(|paths| std::env::split_paths(&paths).any(|d| d.join(prog).is_file()))
        .unwrap_or(false)
}

/// The solver named by [`SOLVER_ENV`], else the first of [`KNOWN_SOLVERS`]
/// found on `PATH`.
pub fn detect_solver() -> Option<SolverSpec> {
    if let Ok(cmd) = std::env::var(SOLVER_ENV) {
        if let Ok(spec) = SolverSpec::parse(&cmd) {
            return Some(spec);
        }
    }
    KNOWN_SOLVERS
        .iter()
        .map(|(name, t)| SolverSpec {
            name: name.to_string(),
            template: t.to_string(),
        })
        .find(SolverSpec::is_available)
}

/// Outcome of one solver run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Sat,
    Unsat,
    Unknown,
    Timeout,
    Error(String),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Sat => "SAT",
            Verdict::Unsat => "UNSAT",
            Verdict::Unknown => "UNKNOWN",
            Verdict::Timeout => "TIMEOUT",
            Verdict::Error(_) => "ERROR",
        })
    }
}

fn strip_ansi(line: &str) -> String {
    let mut out = String::with_capacity(line.len());
    let mut chars = line.chars();
    while let Some(c) = chars.next() {
        if c == '\u{1b}' {
            for d in chars.by_ref() {
                if d.is_ascii_alphabetic() {
                    break;
                }
            }
        } else {
            out.push(c);
        }
    }
    out
}

/// Reads the verdict from an `s ...` status line, falling back to the exit
/// codes 10 (SAT) and 20 (UNSAT).
pub fn parse_verdict(exit_code: Option<i32>, stdout: &str) -> Verdict {
    for line in stdout.lines() {
        let line = strip_ansi(line);
        let line = line.trim_start();
        if line.starts_with("s UNSATISFIABLE") {
            return Verdict::Unsat;
        }
        if line.starts_with("s SATISFIABLE") {
            return Verdict::Sat;
        }
        if line.starts_with("s UNKNOWN") {
            return Verdict::Unknown;
        }
    }
    match exit_code {
        Some(10) => Verdict::Sat,
        Some(20) => Verdict::Unsat,
        _ => Verdict::Error(format!(
            "unparseable solver output (exit code {})",
            exit_code.map_or("none".to_string(), |c| c.to_string())
        )),
    }
}

/// One finished (or killed) solver process.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverRun {
    pub verdict: Verdict,
    pub wall_time: Duration,
    pub exit_code: Option<i32>,
}

/// Runs `spec` on `input` with a wall-clock limit.
pub fn run_solver(spec: &SolverSpec, input: &Path, timeout: Duration) -> Result<SolverRun> {
    let argv = spec.argv(input);
    let start = Instant::now();
    let mut child = Command::new(&argv[0])
        .args(&argv[1..])
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .map_err(|e| Error::Solver(format!("cannot start {}: {e}", argv[0])))?;
    let mut stdout = child.stdout.take().expect("piped stdout");
    let reader = std::thread::spawn(move || {
        let mut buf = String::new();
        let _ = stdout.read_to_string(&mut buf);
        buf
    });
    let status = child.wait_timeout(timeout)?;
    let (verdict, exit_code) = match status {
        Some(st) => {
            let out = reader.join().unwrap_or_default();
            (parse_verdict(st.code(), &out), st.code())
        }
        None => {
            let _ = child.kill();
            let _ = child.wait();
            let _ = reader.join();
            (Verdict::Timeout, None)
        }
    };
    Ok(SolverRun {
        verdict,
        wall_time: start.elapsed(),
        exit_code,
    })
}

/// Grid, seeds and solvers of a benchmark run.
#[derive(Clone, Debug)]
pub struct BenchConfig {
    /// `(s, k)` cells.
    pub grid: Vec<(u32, u32)>,
    pub seeds: Vec<u64>,
    pub solvers: Vec<SolverSpec>,
    pub timeout: Duration,
    pub jobs: usize,
    /// Where instance files are written.
    pub workdir: PathBuf,
}

/// One row of the results table.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub instance: String,
    pub s: u32,
    pub k: u32,
    pub seed: u64,
    pub solver: String,
    pub verdict: Verdict,
    pub wall_time: f64,
    pub exit_code: Option<i32>,
}

/// Samples every `(cell, seed)`, runs every solver on it and returns rows
/// ordered by cell, seed and solver. A SAT verdict is a soundness alarm the
/// caller must surface; solver failures and timeouts are recorded in rows.
pub fn run_benchmark(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    if let Some(missing) = cfg.solvers.iter().find(|s| !s.is_available()) {
        return Err(Error::Solver(format!(
            "solver {} not found ({})",
            missing.name,
            missing.program()
        )));
    }
    std::fs::create_dir_all(&cfg.workdir)?;
    let jobs: Vec<(u32, u32, u64)> = cfg
        .grid
        .iter()
        .flat_map(|&(s, k)| cfg.seeds.iter().map(move |&seed| (s, k, seed)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .map_err(|e| Error::Solver(format!("thread pool: {e}")))?;
    let per_job: Vec<Result<Vec<BenchRow>>> = pool.install(|| {
        jobs.par_iter()
            .map(|&(s, k, seed)| {
                let g = sample(RandomProcessConfig { s, k, seed })?;
                let instance = format!("gamma-s{s}-k{k}-seed{seed}");
                let path = cfg.workdir.join(format!("{instance}.cnf"));
                std::fs::File::create(&path)?.write_all(g.to_dimacs().as_bytes())?;
                let mut rows = Vec::new();
                for solver in &cfg.solvers {
                    let run = match run_solver(solver, &path, cfg.timeout) {
                        Ok(run) => run,
                        Err(e) => SolverRun {
                            verdict: Verdict::Error(e.to_string()),
                            wall_time: Duration::ZERO,
                            exit_code: None,
                        },
                    };
                    rows.push(BenchRow {
                        instance: instance.clone(),
                        s,
                        k,
                        seed,
                        solver: solver.name.clone(),
                        verdict: run.verdict,
                        wall_time: run.wall_time.as_secs_f64(),
                        exit_code: run.exit_code,
                    });
                }
                Ok(rows)
            })
            .collect()
    });
    let mut out = Vec::new();
    for rows in per_job {
        out.extend(rows?);
    }
    Ok(out)
}

/// Writes the table as CSV.
pub fn write_csv(rows: &[BenchRow], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record([
        "instance", "s", "k", "seed", "solver", "verdict", "wall_time", "exit_code", "detail",
    ])
    .map_err(csv_err)?;
    for r in rows {
        let detail = match &r.verdict {
            Verdict::Error(msg) => msg.clone(),
            _ => String::new(),
        };
        w.write_record([
            r.instance.clone(),
            r.s.to_string(),
            r.k.to_string(),
            r.seed.to_string(),
            r.solver.clone(),
            r.verdict.to_string(),
            format!("{:.3}", r.wall_time),
            r.exit_code.map_or(String::new(), |c| c.to_string()),
            detail,
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}
