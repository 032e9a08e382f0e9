use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fracsource::config::validate;
use fracsource::report::{REPORT_SCHEMA, STUDY_COLUMNS};
use serde_json::Value;

const MODE1: &str = r#"{"alpha":0.5,"final_time":1,"time_nodes":65,"space_nodes":65,"modes":8,"problem":{"preset":"mode1"}}"#;

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("config.json");
    std::fs::write(&path, text).unwrap();
    path
}

fn fracsource(args: &[&str], config: &Path, out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracsource"))
        .args(args)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .env_remove("FRACSOURCE_LOG")
        .output()
        .unwrap()
}

fn report(out: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap()
}

#[test]
fn inverse_run_writes_reports_and_fields() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), MODE1);
    let out = dir.path().join("out");
    let res = fracsource(&["inverse"], &cfg, &out);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    let r = report(&out);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["status"]["exit_code"], 0);
    let err_h = r["errors"]["h_rel_l2"].as_f64().unwrap();
    assert!(err_h < 0.01, "{err_h}");
    assert_eq!(r["estimates"].as_array().unwrap().len(), 4);
    validate(&r, REPORT_SCHEMA, "report").unwrap();

    let u = std::fs::read_to_string(out.join("solution_u.csv")).unwrap();
    let mut lines = u.lines();
    assert_eq!(lines.next(), Some("t,x,k,value"));
    assert_eq!(u.lines().count(), 1 + 65 * 65 * 8);
    let h = std::fs::read_to_string(out.join("h.csv")).unwrap();
    assert_eq!(h.lines().next(), Some("t,x,value"));
    let value = h.lines().nth(40).unwrap().split(',').nth(2).unwrap();
    let mantissa = value.trim_start_matches('-').split('e').next().unwrap();
    assert_eq!(mantissa.replace('.', "").len(), 17, "{value}");
}

#[test]
fn report_keys_are_sorted() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), MODE1);
    let out = dir.path().join("out");
    assert_eq!(fracsource(&["mms"], &cfg, &out).status.code(), Some(0));
    let text = std::fs::read_to_string(out.join("report.json")).unwrap();
    let keys: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("  \""))
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(report(&out)["errors"]["forward_u_rel_l2"].as_f64().unwrap() < 1e-3);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), MODE1);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert_eq!(fracsource(&["inverse", "--workers", "1"], &cfg, &a).status.code(), Some(0));
    assert_eq!(fracsource(&["inverse", "--workers", "3"], &cfg, &b).status.code(), Some(0));
    for f in ["solution_u.csv", "h.csv"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn verify_passes_and_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), MODE1);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let res = fracsource(&["verify", "--seed", "7"], &cfg, &a);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    fracsource(&["verify", "--seed", "7"], &cfg, &b);
    let (ra, rb) = (report(&a), report(&b));
    assert_eq!(ra["checks"], rb["checks"]);
    let suites: Vec<&str> = ra["checks"].as_array().unwrap().iter().map(|c| c["suite"].as_str().unwrap()).collect();
    for s in ["fracops", "spectral", "estimates"] {
        assert!(suites.contains(&s), "{s}");
    }
}

#[test]
fn zero_epsilon_is_a_condition_violation() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &MODE1.replace("\"modes\":8", "\"modes\":8,\"epsilon\":0"));
    let out = dir.path().join("out");
    let res = fracsource(&["inverse"], &cfg, &out);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("C_eps"));
    assert_eq!(report(&out)["status"]["exit_code"], 2);
}

#[test]
fn usage_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let cfg = write_config(dir.path(), &MODE1.replace("\"alpha\"", "\"alhpa\":0.5,\"alpha\""));
    assert_eq!(fracsource(&["inverse"], &cfg, &out).status.code(), Some(1));

    let cfg = write_config(dir.path(), &MODE1.replace("\"modes\"", "\"mode\":\"forward\",\"modes\""));
    assert_eq!(fracsource(&["inverse"], &cfg, &out).status.code(), Some(1));

    let cfg = write_config(dir.path(), MODE1);
    let res = Command::new(env!("CARGO_BIN_EXE_fracsource"))
        .args(["inverse", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .env("FRACSOURCE_LOG", "trace")
        .output()
        .unwrap();
    assert_eq!(res.status.code(), Some(1));
    assert_eq!(fracsource(&["sideways"], &cfg, &out).status.code(), Some(1));
}

#[test]
fn study_writes_the_table() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{"alpha":0.5,"final_time":1,"time_nodes":17,"space_nodes":17,"modes":4,
        "problem":{"preset":"two-mode"},"study":{"refine":"joint","levels":3}}"#;
    let cfg = write_config(dir.path(), text);
    let out = dir.path().join("out");
    let res = fracsource(&["study"], &cfg, &out);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    let table = std::fs::read_to_string(out.join("study.csv")).unwrap();
    assert_eq!(table.lines().next().unwrap(), STUDY_COLUMNS.join(","));
    assert_eq!(table.lines().count(), 4);
    let r = report(&out);
    let p = r["study"]["fitted_order_h"].as_f64().unwrap();
    assert!(p > 0.8, "{p}");
}

#[test]
fn study_needs_three_levels() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{"alpha":0.5,"final_time":1,"time_nodes":17,"space_nodes":17,
        "problem":{"preset":"mode1"},"study":{"refine":"time","levels":2}}"#;
    let cfg = write_config(dir.path(), text);
    let out = dir.path().join("out");
    assert_eq!(fracsource(&["study"], &cfg, &out).status.code(), Some(1));
}

#[test]
fn measured_psi_file_drives_the_inverse_run() {
    let dir = tempfile::tempdir().unwrap();
    let (n, m) = (33usize, 33usize);
    let mut csv = String::from("t,x,value\n");
    for i in 0..n {
        let t = i as f64 / (n - 1) as f64;
        for j in 0..m {
            let x = j as f64 / (m - 1) as f64;
            let psi = 0.5 * std::f64::consts::PI * (1.0 + t * t) * (std::f64::consts::PI * x).sin();
            csv.push_str(&format!("{t:.17e},{x:.17e},{psi:.17e}\n"));
        }
    }
    std::fs::write(dir.path().join("psi.csv"), csv).unwrap();
    let text = r#"{"alpha":0.5,"final_time":1,"time_nodes":33,"space_nodes":33,"modes":8,
        "problem":{"preset":"mode1","psi_file":"psi.csv"}}"#;
    let cfg = write_config(dir.path(), text);
    let out = dir.path().join("out");
    let res = fracsource(&["inverse"], &cfg, &out);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    assert!(report(&out)["errors"]["h_rel_l2"].as_f64().unwrap() < 0.05);
}
