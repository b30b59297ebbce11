use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_harmonic4"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &tempfile::TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn invariants_of_d1_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        &dir,
        "d1.json",
        r#"{"components": [1, 0, 0, 0, 0, 0, 0, 0, 0]}"#,
    );
    let out = run(&["invariants", "--input", &p]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["J2"], 8.0);
    assert_eq!(v["J4"], 32.0);
    for k in ["J3", "J5", "J6", "J7", "J8", "J9", "J10"] {
        assert_eq!(v[k], 0.0, "{k}");
    }
}

#[test]
fn exact_j3_witness() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        &dir,
        "w.json",
        r#"{"components": ["8", "0", "0", "-4", "0", "5", "5", "3", "0"]}"#,
    );
    let out = run(&["--backend", "exact", "invariants", "-i", &p]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["J3"], "-6480/1");
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write(&dir, "e.json", r#"{"components": []}"#);
    assert_eq!(run(&["invariants", "-i", &empty]).status.code(), Some(2));
    let broken = write(&dir, "b.json", "{not json");
    assert_eq!(run(&["invariants", "-i", &broken]).status.code(), Some(2));
    let float = write(
        &dir,
        "f.json",
        r#"{"components": [0.5, 0, 0, 0, 0, 0, 0, 0, 0]}"#,
    );
    let out = run(&["--backend", "exact", "invariants", "-i", &float]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("backend mismatch"));
    assert_eq!(run(&["invariants"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn inline_components_override_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        &dir,
        "d.json",
        r#"{"components": [0, 0, 0, 0, 0, 0, 0, 0, 0]}"#,
    );
    let out = run(&["invariants", "-i", &p, "-c", "1,0,0,0,0,0,0,0,0"]);
    assert_eq!(json(&out)["J2"], 8.0);
}

#[test]
fn csv_and_text_formats() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        &dir,
        "two.json",
        r#"[{"components": [1,0,0,0,0,0,0,0,0]}, {"components": [0,1,0,0,0,0,0,0,0]}]"#,
    );
    let out = run(&["--format", "csv", "invariants", "-i", &p]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "tensor,J2,J3,J4,J5,J6,K6,J7,J8,J9,J10");
    assert!(lines[1].starts_with("0,8.0,"));
    let out = run(&[
        "--format",
        "text",
        "--backend",
        "exact",
        "invariants",
        "-c",
        "1,0,0,0,0,0,0,0,0",
    ]);
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("K6  = 128/1"));
}

#[test]
fn rotate_identity_reflection_and_quarter_turn() {
    let out = run(&[
        "rotate",
        "-c",
        "1,2,3,4,5,6,7,8,9",
        "--matrix",
        "1,0,0,0,1,0,0,0,1",
    ]);
    assert_eq!(
        json(&out)["components"],
        serde_json::json!([1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0])
    );

    let out = run(&[
        "rotate",
        "-c",
        "0,0,1,0,0,0,0,0,0",
        "--matrix",
        "1,0,0,0,1,0,0,0,-1",
    ]);
    assert_eq!(json(&out)["components"][2], -1.0);

    let h = 0.5f64.sqrt().to_string();
    let m = format!("{h},-{h},0,{h},{h},0,0,0,1");
    let out = run(&["rotate", "-c", "1,0,0,0,0,0,0,0,0", "--matrix", &m]);
    assert_eq!(out.status.code(), Some(0));
    let comps: Vec<String> = json(&out)["components"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.to_string())
        .collect();
    let before = json(&run(&["invariants", "-c", "1,0,0,0,0,0,0,0,0"]));
    let after = json(&run(&["invariants", "-c", &comps.join(",")]));
    for k in ["J2", "J3", "J4", "J5", "J6", "K6", "J7", "J8", "J9", "J10"] {
        let (a, b) = (before[k].as_f64().unwrap(), after[k].as_f64().unwrap());
        assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0), "{k}: {a} vs {b}");
    }
}

#[test]
fn exact_rotation_by_permutation() {
    let out = run(&[
        "--backend",
        "exact",
        "rotate",
        "-c",
        "1,0,0,0,0,0,0,0,0",
        "--matrix",
        "0,1,0,1,0,0,0,0,1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["components"][7], "1/1");
}

#[test]
fn non_orthogonal_matrix_exit_2() {
    let out = run(&[
        "rotate",
        "-c",
        "1,0,0,0,0,0,0,0,0",
        "--matrix",
        "1,0,0,0,1,0,0,0,2",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_suites() {
    for suite in ["identity", "parity", "restriction", "witnesses"] {
        let out = run(&["verify", suite]);
        assert_eq!(out.status.code(), Some(0), "{suite}");
        assert_eq!(json(&out)["pass"], true);
    }
    let out = run(&["verify", "isotropy", "--trials", "1000", "--seed", "42"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verification_failure_exits_1() {
    let out = run(&["verify", "isotropy", "--trials", "3", "--tol", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("failed: isotropy/"));
}

#[test]
fn solve_targets() {
    let out = run(&["solve", "j8-root"]);
    assert_eq!(out.status.code(), Some(0));
    let t = json(&out)["solve"]["solution"][0].as_f64().unwrap();
    assert!(t > 0.15 && t < 0.2);

    for (which, digits) in [
        ("smith-bao-j6", [-0.406303, 0.672665, 1.12318, 1.17267]),
        ("mixed-j6", [-0.405381, 0.67075, 1.12345, 1.17075]),
    ] {
        let out = run(&["solve", which]);
        assert_eq!(out.status.code(), Some(0), "{which}");
        let v = json(&out);
        let sol = v["solve"]["solution"].as_array().unwrap();
        for k in 0..4 {
            let x = sol[k].as_f64().unwrap();
            let x = if k == 3 { x.abs() } else { x };
            assert!((x - digits[k]).abs() <= 1e-4, "{which}[{k}] = {x}");
        }
        assert_eq!(v["report"]["pass"], true);
    }
}

#[test]
fn output_is_deterministic_and_out_flag_writes() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = run(&["verify", "all", "--out", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}
