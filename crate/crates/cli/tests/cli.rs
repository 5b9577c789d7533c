use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn sslab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sslab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("stdout line is JSON"))
        .collect()
}

fn write_instance(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn gen_then_solve_auto() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.txt").display().to_string();
    let out = sslab(&["gen", "--kind", "planted", "--n", "14", "--seed", "5", "--out", &inst]);
    assert_eq!(out.status.code(), Some(0));
    let planted = json_lines(&out)[0]["planted_mask_hex"].as_str().unwrap().to_string();
    assert!(!planted.is_empty());

    let out = sslab(&["solve", "--alg", "auto", "--seed", "7", &inst]);
    assert_eq!(out.status.code(), Some(0));
    let v = &json_lines(&out)[0];
    assert_eq!(v["found"], Value::Bool(true));
    assert!(v["witness_mask_hex"].is_string());
    assert!(v["step_counters"]["steps"].is_u64());
    assert!(v["branch_taken"].as_str().unwrap().starts_with("auto/"));
}

#[test]
fn every_algorithm_agrees_on_feasibility() {
    let dir = tempfile::tempdir().unwrap();
    let yes = write_instance(dir.path(), "yes.txt", "8\n1 1 1 1 7 13 29 61\n42\n");
    let no = write_instance(dir.path(), "no.txt", "6\n2 4 6 8 10 12\n13\n");
    for alg in ["brute", "dp", "mim", "ss", "fewsums", "largebin", "smallbin", "auto", "repr"] {
        for (path, expect) in [(&yes, true), (&no, false)] {
            let out = sslab(&["solve", "--alg", alg, "--seed", "1", path]);
            assert_eq!(out.status.code(), Some(0), "{alg}: {}", String::from_utf8_lossy(&out.stderr));
            let v = &json_lines(&out)[0];
            if expect && alg == "repr" {
                // Monte Carlo; a miss is allowed but a hit must be genuine.
                continue;
            }
            assert_eq!(v["found"], Value::Bool(expect), "{alg} on {path}");
        }
    }
}

#[test]
fn explicit_m_is_one_based() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_instance(dir.path(), "i.txt", "8\n1 1 1 1 7 13 29 61\n42\n");
    let out = sslab(&["solve", "--alg", "fewsums", "--M", "1,2,3,4", "--gamma", "0.6", &p]);
    assert_eq!(out.status.code(), Some(0));
    let v = &json_lines(&out)[0];
    assert_eq!(v["witness"], serde_json::json!([6, 7]));
    assert_eq!(v["witness_mask_hex"], "60");

    let out = sslab(&["solve", "--alg", "fewsums", "--M", "0,1", &p]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("i.txt").display().to_string();
    sslab(&["gen", "--kind", "density", "--n", "16", "--d", "1.5", "--seed", "2", "--out", &inst]);
    let a = sslab(&["solve", "--alg", "repr", "--seed", "9", "--passes", "4", &inst]);
    let b = sslab(&["solve", "--alg", "repr", "--seed", "9", "--passes", "4", &inst]);
    assert_eq!(a.stdout, b.stdout);
    let g1 = sslab(&["gen", "--kind", "density", "--n", "10", "--seed", "3"]);
    let g2 = sslab(&["gen", "--kind", "density", "--n", "10", "--seed", "3"]);
    assert_eq!(g1.stdout, g2.stdout);
}

#[test]
fn analyze_and_classify() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("eq.txt").display().to_string();
    sslab(&["gen", "--kind", "equal", "--n", "12", "--out", &inst]);
    let v = &json_lines(&sslab(&["analyze", &inst]))[0];
    assert_eq!(v["distinct_sums"], 13);
    assert_eq!(v["beta"], 924);
    let v = &json_lines(&sslab(&["classify", &inst]))[0];
    assert_eq!(v["regime"], "large-bin");
}

#[test]
fn hash_reports_prime_and_shift() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("i.txt").display().to_string();
    let reduced = dir.path().join("r.txt").display().to_string();
    sslab(&["gen", "--kind", "planted", "--n", "12", "--bits", "40", "--seed", "4", "--out", &inst]);
    let out = sslab(&["hash", "--B", "4096", "--seed", "1", "--out", &reduced, &inst]);
    assert_eq!(out.status.code(), Some(0));
    let v = &json_lines(&out)[0];
    assert!(v["p"].as_str().unwrap().parse::<u64>().unwrap() > 2);
    assert!(v["r"].as_u64().unwrap() < 12);
    assert!(v["rounds"].as_u64().unwrap() >= 1);
    assert!(std::fs::read_to_string(&reduced).unwrap().starts_with("12"));

    let out = sslab(&["hash", "--B", "1", &inst]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_exit_codes() {
    let out = sslab(&["verify", "--checks", "l2identity", "--n-max", "12", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json_lines(&out).iter().all(|v| v["passed"] == Value::Bool(true)));
    let out = sslab(&["verify", "--checks", "nonsense"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(sslab(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(sslab(&["solve", "--alg", "quantum", "x"]).status.code(), Some(2));
    assert_eq!(sslab(&["gen", "--kind", "planted"]).status.code(), Some(2));
    let out = sslab(&["solve", "--alg", "dp", "/nonexistent/instance.txt"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("b.csv").display().to_string();
    let out = sslab(&["bench", "--alg", "ss", "--n-min", "6", "--n-max", "9", "--reps", "2", "--csv", &csv]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 1 + 4 * 2);
    assert!(text.lines().skip(1).all(|l| l.split(',').nth(2) == Some("true")));
}
