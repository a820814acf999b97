use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn problem(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/problems").join(name)
}

fn sumkernel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sumkernel")).args(args).output().expect("binary runs")
}

fn run(args: &[&str], out: &Path) -> Output {
    let mut all: Vec<&str> = args.to_vec();
    all.extend(["--out", out.to_str().unwrap()]);
    sumkernel(&all)
}

#[test]
fn solve_writes_outputs_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let input = problem("constant_ab.json");
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let o = run(&["solve", "--input", input.to_str().unwrap()], out);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for f in ["solution.csv", "solution_neumann.csv", "orders_resummed.csv", "orders_neumann.csv", "report.json"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
    let report: serde_json::Value = serde_json::from_slice(&fs::read(a.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["converged"], true);
    assert!(report["resummed"]["timings"].is_null());
    let csv = fs::read_to_string(a.join("solution.csv")).unwrap();
    assert!(csv.starts_with("# delta=1.0000000000000000e0,0.0000000000000000e0\ni,j,t_i,t_j,re,im\n"));
}

#[test]
fn format_selection_and_timings() {
    let dir = tempfile::tempdir().unwrap();
    let input = problem("driven_phase.json");
    let o = run(&["solve", "--input", input.to_str().unwrap(), "--format", "json", "--timings"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("series"));
    assert!(dir.path().join("report.json").exists());
    assert!(!dir.path().join("solution.csv").exists());
    let o = run(&["solve", "--input", input.to_str().unwrap(), "--format", "xml"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn configuration_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["solve", "--input", problem("missing_param.json").to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("`w`"));
    let o = run(&["solve", "--input", "/nonexistent/problem.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["example", "bogus"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn truncated_series_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(problem("constant_ab.json")).unwrap().replace("\"orders\": 40", "\"orders\": 2");
    let input = dir.path().join("short.json");
    fs::write(&input, text).unwrap();
    let o = run(&["solve", "--input", input.to_str().unwrap()], &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(3));
    assert!(dir.path().join("out/report.json").exists());
}

#[test]
fn verify_statuses() {
    let dir = tempfile::tempdir().unwrap();
    let coarse = dir.path().join("coarse");
    let o = run(&["verify", "--input", problem("coarse.json").to_str().unwrap()], &coarse);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&fs::read(coarse.join("verify.json")).unwrap()).unwrap();
    let theta = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "theta_power").unwrap();
    assert_eq!(theta["status"], "fail");
    assert!(theta["slack"].as_f64().unwrap() < 0.0);

    let single = dir.path().join("single");
    let o = run(&["verify", "--input", problem("single.json").to_str().unwrap()], &single);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&fs::read(single.join("verify.json")).unwrap()).unwrap();
    for name in ["permutation_invariance", "alternative_t"] {
        let c = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == name).unwrap();
        assert_eq!(c["status"], "n/a");
    }
}

#[test]
fn default_verify_passes_and_repeats_bytewise() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        assert_eq!(run(&["verify"], out).status.code(), Some(0));
    }
    for f in ["verify.json", "verify.csv"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap());
    }
}

#[test]
fn convergence_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["convergence", "--input", problem("three_components.json").to_str().unwrap(), "--orders", "5"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("convergence.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert!(lines[0].starts_with("# c_k="));
    assert_eq!(lines[1], "order,neumann_error,resummed_error,bound_neumann,bound_resummed");
    assert_eq!(lines.len(), 7);
}
