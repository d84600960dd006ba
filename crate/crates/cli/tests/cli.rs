use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn qamin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qamin"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn gen(dir: &Path, kind: &str, n: &str, seed: &str) -> PathBuf {
    let path = dir.join(format!("{kind}-{n}-{seed}.json"));
    let o = qamin(&["gen", kind, "--n", n, "--n1", "1", "--seed", seed, "-o", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    path
}

#[test]
fn product_instance_minimizes_to_one_qubit() {
    let dir = tempfile::tempdir().unwrap();
    let file = gen(dir.path(), "product", "2", "42");
    let reduced = dir.path().join("reduced.json");
    let o = qamin(&["minimize", file.to_str().unwrap(), "-o", reduced.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("reduced to n = 1 qubits"), "{text}");
    assert!(text.contains("equal"));

    let again = qamin(&["minimize", reduced.to_str().unwrap()]);
    assert!(stdout(&again).contains("already minimal"));

    let eq = qamin(&["equiv", file.to_str().unwrap(), reduced.to_str().unwrap(), "--max-len", "3"]);
    assert_eq!(eq.status.code(), Some(0));
    assert!(stdout(&eq).starts_with("equal\n"));
}

#[test]
fn entangling_instance_is_already_minimal() {
    let dir = tempfile::tempdir().unwrap();
    let file = gen(dir.path(), "entangling", "2", "42");
    let o = qamin(&["minimize", file.to_str().unwrap(), "--no-sober"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("already minimal"), "{text}");
    assert!(text.contains("max_offdiag"));
}

#[test]
fn run_empty_word_and_self_equivalence() {
    let dir = tempfile::tempdir().unwrap();
    let file = gen(dir.path(), "random", "2", "1");
    let o = qamin(&["run", file.to_str().unwrap(), "--word", ""]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("word: ε\nP(-1) = "), "{text}");
    assert_eq!(text.lines().count(), 3);

    let o = qamin(&["run", file.to_str().unwrap(), "--word", "abba"]);
    assert!(stdout(&o).starts_with("word: abba\n"));

    let eq = qamin(&["equiv", file.to_str().unwrap(), file.to_str().unwrap(), "--max-len", "3"]);
    assert_eq!(eq.status.code(), Some(0));
    assert_eq!(stdout(&eq), "equal\nmax deviation: 0.000e0\ndepth: 3\n");
}

#[test]
fn gen_is_deterministic() {
    let a = qamin(&["gen", "product", "--n", "3", "--n1", "1", "--seed", "9"]);
    let b = qamin(&["gen", "product", "--n", "3", "--n1", "1", "--seed", "9"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = qamin(&["gen", "product", "--n", "3", "--n1", "1", "--seed", "10"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn minimize_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let file = gen(dir.path(), "product", "3", "5");
    let a = qamin(&["minimize", file.to_str().unwrap()]);
    let b = qamin(&["minimize", file.to_str().unwrap()]);
    let c = qamin(&["--sequential", "minimize", file.to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn check_finite_reports_periods() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("s.json");
    let h = std::f64::consts::FRAC_1_SQRT_2;
    std::fs::write(
        &file,
        format!(
            r#"{{"schema_version": "1", "n": 1, "n1": 1, "alphabet": ["s", "h"],
            "rho0": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]],
            "unitaries": {{"s": [[[1, 0], [0, 0]], [[0, 0], [0, 1]]],
                          "h": [[[{h}, 0], [{h}, 0]], [[{h}, 0], [-{h}, 0]]]}},
            "observable": {{"eigenvalues": [1, -1],
                "projectors": [[[[1, 0], [0, 0]], [[0, 0], [0, 0]]], [[[0, 0], [0, 0]], [[0, 0], [1, 0]]]]}}}}"#
        ),
    )
    .unwrap();
    let o = qamin(&["check-finite", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("letter s: period 4"), "{text}");
    assert!(text.contains("letter h: period 2"));
    assert!(text.ends_with("verdict: unknown\n"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // usage: missing required flag, unknown kind, bad tolerance
    assert_eq!(qamin(&["gen", "product", "--n", "2"]).status.code(), Some(2));
    assert_eq!(
        qamin(&["gen", "weird", "--n", "2", "--n1", "1", "--seed", "0"]).status.code(),
        Some(2)
    );
    let file = gen(dir.path(), "random", "2", "3");
    assert_eq!(
        qamin(&["run", file.to_str().unwrap(), "--word", "a", "--tol", "-1"]).status.code(),
        Some(2)
    );
    // domain: missing file, invalid physics, unknown symbol
    let missing = dir.path().join("nope.json");
    assert_eq!(qamin(&["run", missing.to_str().unwrap(), "--word", ""]).status.code(), Some(1));
    let bad = dir.path().join("bad.json");
    let text = std::fs::read_to_string(&file).unwrap().replacen("\"n\": 2", "\"n\": 3", 1);
    std::fs::write(&bad, text).unwrap();
    let o = qamin(&["run", bad.to_str().unwrap(), "--word", ""]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
    let o = qamin(&["run", file.to_str().unwrap(), "--word", "z"]);
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn hidden_oracle_agrees() {
    let dir = tempfile::tempdir().unwrap();
    let file = gen(dir.path(), "random", "2", "4");
    let o = qamin(&["oracle", file.to_str().unwrap(), "--depth", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("ε\t"));
    assert!(!String::from_utf8(qamin(&["--help"]).stdout).unwrap().contains("oracle"));
}
