use std::path::Path;
use std::process::{Command, Output};

fn bihv(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bihv"))
        .current_dir(dir)
        .env_remove("BIHV_CORPUS")
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn check_single_and_unknown() {
    let tmp = tempfile::tempdir().unwrap();
    let o = bihv(tmp.path(), &["--label", "x", "check", "P0"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("P0 [lambda] ratio 1"));
    assert!(tmp.path().join("out/check/x/report.json").exists());
    assert_eq!(code(&bihv(tmp.path(), &["check", "nosuch"])), 2);
    assert_eq!(code(&bihv(tmp.path(), &["check"])), 2);
}

#[test]
fn check_all_one_line_per_identity() {
    let tmp = tempfile::tempdir().unwrap();
    let o = bihv(tmp.path(), &["check", "--all"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("0 failed"));
    assert!(!out.contains("FAIL"));
}

#[test]
fn corpus_override_is_honoured() {
    let tmp = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_bihv"))
        .current_dir(tmp.path())
        .env("BIHV_CORPUS", tmp.path().join("missing"))
        .args(["check", "P0"])
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn eliminate_builtin_pair() {
    let tmp = tempfile::tempdir().unwrap();
    let o = bihv(tmp.path(), &["--label", "e", "eliminate", "--builtin", "taup4", "taup3", "--var", "tau"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let dir = tmp.path().join("out/eliminate/e");
    for f in ["f2.poly", "f1.poly", "f0.poly", "summary.json"] {
        assert!(dir.join(f).exists(), "{f}");
    }
    let out = stdout(&o);
    for f in ["taup0-a", "taup0-b", "taup0-c"] {
        assert!(out.lines().any(|l| l.starts_with(f) && l.ends_with("divides") && !l.contains("not")));
    }
    assert!(out.contains("accounted"));
}

#[test]
fn eliminate_self_and_syntax_error() {
    let tmp = tempfile::tempdir().unwrap();
    let o = bihv(tmp.path(), &["eliminate", "--builtin", "taup3", "taup3"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("f2 = 0"));

    std::fs::write(tmp.path().join("bad.poly"), "tau^2 +\n  3*phi*/2\n").unwrap();
    std::fs::write(tmp.path().join("ok.poly"), "tau - 1\n").unwrap();
    let o = bihv(tmp.path(), &["eliminate", "bad.poly", "ok.poly"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("2:9"));
}

#[test]
fn simulate_family_and_constant() {
    let tmp = tempfile::tempdir().unwrap();
    let o = bihv(
        tmp.path(),
        &[
            "--label", "f", "simulate", "--k", "0", "--n1", "2", "--family", "k0", "--a", "1,-1", "--c", "0,0", "--t0",
            "1", "--t1", "2", "--tol", "1e-6",
        ],
    );
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let csv = std::fs::read_to_string(tmp.path().join("out/simulate/f/trajectory.csv")).unwrap();
    assert!(csv.starts_with("t,l1,l2,m1,m2,tau,P0,P1,P2,odetau,odetau_field\n"));

    let o = bihv(tmp.path(), &["simulate", "--const", "--n1", "3", "--k", "1"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let o = bihv(tmp.path(), &["simulate", "--const", "--n1", "4", "--k", "1"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn simulate_input_errors() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(code(&bihv(tmp.path(), &["simulate", "--init", "nofile.json"])), 2);
    std::fs::write(tmp.path().join("bad.json"), r#"{"k": 0, "colour": 1}"#).unwrap();
    assert_eq!(code(&bihv(tmp.path(), &["simulate", "--init", "bad.json"])), 2);
    let o = bihv(tmp.path(), &["simulate", "--family", "k0", "--a", "1,1", "--c", "0,0", "--t0", "1"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn simulate_blow_up_keeps_partial_csv() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(tmp.path().join("blow.json"), r#"{"k": 0, "state": {"lambda": [0], "mu": [1]}}"#).unwrap();
    let o = bihv(tmp.path(), &["--label", "b", "simulate", "--init", "blow.json", "--t1", "2"]);
    assert_eq!(code(&o), 3);
    let csv = std::fs::read_to_string(tmp.path().join("out/simulate/b/trajectory.csv")).unwrap();
    assert!(csv.lines().count() > 2);
}

#[test]
fn simulate_linear_mode() {
    let tmp = tempfile::tempdir().unwrap();
    // the constant solution l = (1, 1, 1), m = 0 in linear coordinates
    std::fs::write(
        tmp.path().join("lin.json"),
        r#"{"n1": 3, "k": 1, "linear": {"tau": 2, "phi": 0, "psi": 0, "power_sums": [3, 3]}}"#,
    )
    .unwrap();
    let o = bihv(tmp.path(), &["--label", "l", "simulate", "--init", "lin.json"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let csv = std::fs::read_to_string(tmp.path().join("out/simulate/l/trajectory.csv")).unwrap();
    assert!(csv.starts_with("t,tau,phi,psi,L2,L3,odetau,odetau_field\n"));
}

#[test]
fn chain_files_and_guards() {
    let tmp = tempfile::tempdir().unwrap();
    let o = bihv(tmp.path(), &["--label", "c", "chain", "--n1", "2", "--kmax", "3"]);
    assert_eq!(code(&o), 0);
    for k in 0..4 {
        assert!(tmp.path().join(format!("out/chain/c/P{k}.poly")).exists());
    }
    assert!(!tmp.path().join("out/chain/c/P4.poly").exists());
    let o = bihv(tmp.path(), &["chain", "--n1", "1", "--kmax", "0"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("P0 against the corpus: ratio"));
    assert_eq!(code(&bihv(tmp.path(), &["chain", "--n1", "1", "--kmax", "-1"])), 2);
    assert_eq!(code(&bihv(tmp.path(), &["chain", "--n1", "3", "--kmax", "6", "--max-terms", "1000"])), 3);
}

#[test]
fn reports_are_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    for label in ["r1", "r2"] {
        assert_eq!(code(&bihv(tmp.path(), &["--label", label, "chain", "--n1", "2", "--kmax", "2"])), 0);
    }
    let a = std::fs::read(tmp.path().join("out/chain/r1/report.json")).unwrap();
    let b = std::fs::read(tmp.path().join("out/chain/r2/report.json")).unwrap();
    assert_eq!(a, b);
}
