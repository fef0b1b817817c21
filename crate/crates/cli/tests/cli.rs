use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hjoints::report::{Status, VerificationReport};
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hjoints"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

/// Triangle pattern, `K_6^{(2)}` host and half weights.
fn fixtures() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "k3.hg", r#"{"d":3,"edges":[[1,2],[1,3],[2,3]]}"#);
    write(dir.path(), "half.w", r#"{"weights":["1/2","1/2","1/2"]}"#);
    let mut edges = Vec::new();
    for a in 1..=6 {
        for b in a + 1..=6 {
            edges.push(format!("[{a},{b}]"));
        }
    }
    write(dir.path(), "k6.hg", &format!(r#"{{"d":6,"edges":[{}]}}"#, edges.join(",")));
    dir
}

fn report(dir: &Path, name: &str) -> VerificationReport {
    VerificationReport::from_json(&std::fs::read_to_string(dir.join(name)).unwrap()).unwrap()
}

#[test]
fn rho_star_of_the_triangle() {
    let d = fixtures();
    let o = run(d.path(), &["rho-star", "k3.hg", "--json", "r.json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(d.path(), "r.json");
    assert_eq!(r.command, "rho-star");
    assert!(r.checks.iter().all(|c| c.status == Status::Pass));
    assert!(r.checks.iter().any(|c| c.detail.as_deref() == Some("value 3/2")));
}

#[test]
fn cone_adds_an_apex() {
    let d = fixtures();
    let o = run(d.path(), &["cone", "k3.hg", "--t", "1", "--out", "c.hg"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(d.path().join("c.hg")).unwrap()).unwrap();
    assert_eq!(v["d"], 4);
    let edges = v["edges"].as_array().unwrap();
    assert_eq!(edges.len(), 3);
    assert!(edges.iter().all(|e| e.as_array().unwrap().len() == 3 && e.as_array().unwrap().contains(&4.into())));
}

#[test]
fn generic_configuration_meets_the_simple_bound() {
    let d = fixtures();
    let o = run(d.path(), &["build-config", "--host", "k6.hg", "--pattern", "k3.hg", "--out", "g.cfg"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(d.path(), &["verify-simple-bound", "--config", "g.cfg", "--pattern", "k3.hg", "--w", "half.w", "--json", "s.json"]);
    assert_eq!(code(&o), 0);
    let r = report(d.path(), "s.json");
    let c = &r.checks[0];
    assert_eq!(c.status, Status::Pass);
    // C(6,3) triangles, each a joint
    assert_eq!(c.lhs, Some(20.0));
    // (sqrt 2 / 3) |E|^{3/2} with |E| = 15 lines
    assert!((c.rhs.unwrap() - 2f64.sqrt() / 3.0 * 15f64.powf(1.5)).abs() < 1e-9);

    let o = run(d.path(), &["verify-mult-bound", "--config", "g.cfg", "--pattern", "k3.hg", "--w", "half.w"]);
    assert_eq!(code(&o), 0);
    let o = run(d.path(), &["detect", "--config", "g.cfg", "--pattern", "k3.hg"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("20 joints"));
}

#[test]
fn counting_commands() {
    let d = fixtures();
    let o = run(d.path(), &["kk", "--n", "12", "--d", "4"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("colex count 5"));
    let o = run(d.path(), &["shadow-check", "k6.hg", "--d", "3", "--t", "0"]);
    assert_eq!(code(&o), 0);
    let o = run(d.path(), &["mcount", "--host", "k6.hg", "--pattern", "k3.hg"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("20 of"));
}

#[test]
fn usage_and_input_errors_exit_two() {
    let d = fixtures();
    assert_eq!(code(&run(d.path(), &["frob"])), 2);
    assert_eq!(code(&run(d.path(), &["kk"])), 2);
    assert_eq!(code(&run(d.path(), &["rho-star", "missing.hg"])), 2);
    write(d.path(), "bad.hg", "{not json");
    assert_eq!(code(&run(d.path(), &["rho-star", "bad.hg"])), 2);
    write(d.path(), "low.w", r#"{"weights":["1/4","1/4","1/4"]}"#);
    assert_eq!(code(&run(d.path(), &["constant", "k3.hg", "--w", "low.w"])), 2);
    assert_eq!(code(&run(d.path(), &["--help"])), 0);
}

#[test]
fn failed_check_exits_one() {
    let d = fixtures();
    assert_eq!(code(&run(d.path(), &["build-config", "--host", "k6.hg", "--pattern", "k3.hg", "--out", "g.cfg"])), 0);
    let o = run(d.path(), &["handicap-run", "--config", "g.cfg", "--pattern", "k3.hg", "--w", "half.w", "--n", "4", "--out", "c.cert"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(d.path(), &["key-audit", "c.cert", "--factor", "1e9", "--tolerance", "0", "--json", "k.json"]);
    assert_eq!(code(&o), 1);
    let r = report(d.path(), "k.json");
    assert!(r.has_failure());
    assert_eq!(r.exit_code(), 1);
}

#[test]
fn reports_are_reproducible() {
    let d = fixtures();
    assert_eq!(code(&run(d.path(), &["build-config", "--host", "k6.hg", "--pattern", "k3.hg", "--out", "g.cfg"])), 0);
    let args = |out: &'static str| ["geo-shearer", "--config", "g.cfg", "--pattern", "k3.hg", "--w", "half.w", "--samples", "20", "--seed", "5", "--json", out];
    assert_eq!(code(&run(d.path(), &args("a.json"))), 0);
    assert_eq!(code(&run(d.path(), &args("b.json"))), 0);
    let (a, b) = (report(d.path(), "a.json"), report(d.path(), "b.json"));
    assert_eq!(a.digest(), b.digest());
    assert_eq!(a.checks, b.checks);
    let seq = ["--sequential", "geo-shearer", "--config", "g.cfg", "--pattern", "k3.hg", "--w", "half.w", "--samples", "20", "--seed", "5", "--json", "c.json"];
    assert_eq!(code(&run(d.path(), &seq)), 0);
    assert_eq!(report(d.path(), "c.json").digest(), a.digest());
}

#[test]
fn suite_subset() {
    let d = fixtures();
    let o = run(d.path(), &["suite", "--criteria", "1,2", "--json", "s.json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(d.path(), "s.json");
    assert!(!r.checks.is_empty());
    assert!(r.checks.iter().all(|c| c.status != Status::Fail));
}
