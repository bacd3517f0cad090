use std::path::Path;
use std::process::{Command, Output};

fn gammakit(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gammakit"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stat(text: &str, key: &str) -> u64 {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .and_then(|v| v.parse().ok())
        .unwrap_or_else(|| panic!("no {key} in {text}"))
}

#[test]
fn gen_gamma_header_matches_stats() {
    let dir = tempfile::tempdir().unwrap();
    let o = gammakit(dir.path(), &["gen-gamma", "-n", "0", "-s", "1", "-k", "3", "-o", "g.cnf"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let cnf = std::fs::read_to_string(dir.path().join("g.cnf")).unwrap();
    let header = cnf.lines().find(|l| l.starts_with("p cnf")).unwrap();
    let stats = stdout(&gammakit(dir.path(), &["stats", "-s", "1", "-k", "3"]));
    assert_eq!(
        header,
        format!("p cnf {} {}", stat(&stats, "variables"), stat(&stats, "clauses"))
    );
    let body = cnf.lines().filter(|l| !l.starts_with('c') && !l.starts_with('p')).count() as u64;
    assert_eq!(body, stat(&stats, "clauses"));
}

#[test]
fn bad_proof_names_the_step() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("bad.proof"),
        "proof premises=2\n1 x1 ; init 1\n2 -x1 ; init 2\n3 empty ; res 1 2 x2\n",
    )
    .unwrap();
    let o = gammakit(dir.path(), &["check-proof", "bad.proof"]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.starts_with("error: proof: step 3"), "{err}");
    assert_eq!(err.lines().count(), 1);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let o = gammakit(dir.path(), &["gen-gamma", "-s", "2", "-k", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error: params:"));
    let o = gammakit(dir.path(), &["check-proof", "missing.proof"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error: io:"));
    let o = gammakit(dir.path(), &["search-eval-implicit", "--circuit", "missing", "-m", "5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reduce_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("d.cnf"), "p cnf 1 2\n1 0\n-1 0\n").unwrap();
    std::fs::write(
        dir.path().join("pi.er"),
        "circuit n=1 s=0\nproof premises=2\n1 x1 ; init 1\n2 -x1 ; init 2\n3 empty ; res 1 2 x1\n",
    )
    .unwrap();
    let o = gammakit(dir.path(), &["check-er", "--delta", "d.cnf", "--er", "pi.er"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = gammakit(dir.path(), &["reduce", "--delta", "d.cnf", "--er", "pi.er", "--out", "sigma.sub"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let info = stderr(&o);
    let field = |key: &str| {
        info.split_whitespace()
            .find_map(|t| t.strip_prefix(&format!("{key}=")))
            .unwrap()
            .to_string()
    };
    let (s, k) = (field("s"), field("k"));
    let o = gammakit(
        dir.path(),
        &[
            "verify-reduction", "--delta", "d.cnf", "--sub", "sigma.sub", "-n", "0", "-s", &s, "-k", &k,
            "--certificate", "cert.txt",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("unclassified=0"));
    let cert = std::fs::read_to_string(dir.path().join("cert.txt")).unwrap();
    let total: u64 = stdout(&o)
        .split_whitespace()
        .find_map(|t| t.strip_prefix("total="))
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(cert.lines().count() as u64, total);
    assert!(!cert.contains('?'));

    for (alpha, clause) in [("0", "delta_clause=1 x1"), ("1", "delta_clause=2 -x1")] {
        let o = gammakit(
            dir.path(),
            &["oracle-reduce", "--delta", "d.cnf", "--sub", "sigma.sub", "-s", &s, "-k", &k, "--alpha", alpha],
        );
        assert!(o.status.success(), "{}", stderr(&o));
        assert!(stdout(&o).contains(clause), "{}", stdout(&o));
    }
}

#[test]
fn randgen_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = || stdout(&gammakit(dir.path(), &["randgen", "-s", "3", "-k", "9", "--seed", "11"]));
    let a = run();
    assert!(a.starts_with("c seed=11 s=3 k=9 circuit="));
    assert_eq!(a, run());
}

#[test]
fn uniqueness_proof_checks() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("c.txt"), "circuit n=1 s=3\n1 := x1\n2 := not y1\n3 := or y1 y2\n").unwrap();
    let o = gammakit(dir.path(), &["uniq-proof", "c.txt", "-o", "u.proof"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = gammakit(dir.path(), &["encode-circuit", "c.txt"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("p cnf 4 "));
}
