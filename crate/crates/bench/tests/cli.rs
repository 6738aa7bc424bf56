use std::path::{Path, PathBuf};
use std::process::Command;

fn vsp(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_vsp")).args(args).output().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("vsp-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn bench_tardy_csv_is_reproducible() {
    let dir = scratch("bench");
    let run = |sub: &str| {
        let out = dir.join(sub);
        let status = vsp(&[
            "bench", "--vehicles", "5,10", "--instances", "3", "--ratios", "1.0:1.3:0.1",
            "--algorithms", "baseline,heuristic,exact", "--exact-time-limit", "10", "--out-dir", arg(&out),
        ]);
        assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
        std::fs::read(out.join("tardy.csv")).unwrap()
    };
    let (a, b) = (run("a"), run("b"));
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("n,ratio,algorithm,mean_tardy_fraction,stderr\n"));
    assert_eq!(text.lines().count(), 1 + 2 * 4 * 3);
    assert!(dir.join("a/runtime.csv").exists() && dir.join("a/manifest.json").exists());
}

#[test]
fn generate_schedule_solve_validate() {
    let dir = scratch("pipeline");
    let inst = dir.join("inst.json");
    assert!(vsp(&["generate", "--vehicles", "6", "--ratio", "1.0", "--seed", "9", "--grid", "3x3", "--out", arg(&inst)])
        .status
        .success());
    let heur = dir.join("heur.json");
    let code = vsp(&["schedule", "--instance", arg(&inst), "--out", arg(&heur)]).status.code();
    assert!(matches!(code, Some(0) | Some(2)), "{code:?}");
    let exact = dir.join("exact.json");
    assert_eq!(vsp(&["solve", "--instance", arg(&inst), "--exact", "--out", arg(&exact)]).status.code(), Some(0));
    let check = vsp(&["validate", "--instance", arg(&inst), "--schedule", arg(&exact)]);
    assert!(check.status.success());
    assert!(String::from_utf8_lossy(&check.stdout).starts_with("0 violation(s)"));
    let lp = dir.join("inst.lp");
    assert!(vsp(&["export-mip", "--instance", arg(&inst), "--out", arg(&lp)]).status.success());
    assert!(std::fs::read_to_string(lp).unwrap().starts_with("Minimize"));
}

#[test]
fn solve_without_exact_flag_is_rejected() {
    let out = vsp(&["solve", "--instance", "missing.json", "--out", "x.json"]);
    assert!(!out.status.success());
}

#[test]
fn missing_input_exits_with_error() {
    let out = vsp(&["validate", "--instance", "/nonexistent/inst.json", "--schedule", "/nonexistent/s.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}
