use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_groupring"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_out(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = run(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

/// `[[re, im], ...]` rows as real parts, asserting imaginary parts vanish.
fn real_rows(v: &Value) -> Vec<Vec<f64>> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|row| {
            row.as_array()
                .unwrap()
                .iter()
                .map(|z| {
                    assert!(z[1].as_f64().unwrap().abs() < 1e-12);
                    z[0].as_f64().unwrap()
                })
                .collect()
        })
        .collect()
}

fn assert_close(got: &[Vec<f64>], want: &[&[f64]], tol: f64) {
    assert_eq!(got.len(), want.len());
    for (g, w) in got.iter().zip(want) {
        assert_eq!(g.len(), w.len());
        for (x, y) in g.iter().zip(w.iter()) {
            assert!((x - y).abs() <= tol, "{got:?}");
        }
    }
}

#[test]
fn d6_diagonalizer_is_the_printed_matrix() {
    let v = json_out(&["diagonalizer", "D6"]);
    assert_eq!(v["block_sizes"], serde_json::json!([1, 1, 4]));
    let p = real_rows(&v["matrix"]);
    assert_close(
        &p,
        &[
            &[1., 1., 2., -1., 0., 0.],
            &[1., 1., -1., 2., 0., 0.],
            &[1., 1., -1., -1., 0., 0.],
            &[1., -1., 0., 0., 2., -1.],
            &[1., -1., 0., 0., -1., 2.],
            &[1., -1., 0., 0., -1., -1.],
        ],
        1e-12,
    );
}

#[test]
fn d6_transform_of_a() {
    let v = json_out(&["transform", "D6", "--element", "a"]);
    assert_eq!(v["block_sizes"], serde_json::json!([1, 1, 4]));
    assert!(v["off_block_residual"].as_f64().unwrap() < 1e-12);
    let m = real_rows(&v["matrix"]);
    assert_close(
        &m,
        &[
            &[1., 0., 0., 0., 0., 0.],
            &[0., 1., 0., 0., 0., 0.],
            &[0., 0., -1., 1., 0., 0.],
            &[0., 0., -1., 0., 0., 0.],
            &[0., 0., 0., 0., 0., -1.],
            &[0., 0., 0., 0., 1., -1.],
        ],
        1e-10,
    );
}

#[test]
fn c3xc3_character_table_is_labeled() {
    let v = json_out(&["chartable", "C3xC3"]);
    let reps: Vec<&str> = v["classes"]["representatives"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s.as_str().unwrap())
        .collect();
    assert_eq!(reps, ["1", "g", "g²", "h", "hg", "hg²", "h²", "h²g", "h²g²"]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 9);
    // Row (1, 1) at column hg is ω·ω = ω².
    let z = &rows[4][4];
    assert!((z[0].as_f64().unwrap() + 0.5).abs() < 1e-12);
    assert!((z[1].as_f64().unwrap() + 3f64.sqrt() / 2.0).abs() < 1e-12);

    let pretty = run(&["chartable", "C3xC3"]);
    let text = String::from_utf8(pretty.stdout).unwrap();
    assert!(text.contains("h²g²") && text.contains("-0.5+0.866025403784i"));
}

#[test]
fn machine_output_is_byte_identical_across_runs() {
    let cases: &[&[&str]] = &[
        &["diagonalizer", "D10", "--format", "json"],
        &["chartable", "D10", "--source", "numeric", "--seed", "7", "--format", "json"],
        &["idempotents", "Q8", "--format", "csv"],
        &["transform", "C2xC4", "--element", "h", "--method", "abelian", "--format", "json"],
        &["diagonalizer", "D8", "--orthonormal", "--format", "csv"],
    ];
    for args in cases {
        let a = run(args);
        let b = run(args);
        assert!(a.status.success(), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

fn emit_to(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name);
    let p = path.to_str().unwrap().to_string();
    let mut full = args.to_vec();
    full.extend(["--output", &p]);
    let out = run(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    p
}

#[test]
fn verify_accepts_emitted_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    for group in ["D6", "Q8", "D10", "C3xC3", "D6xC2"] {
        let files = [
            emit_to(dir.path(), "idem.json", &["idempotents", group]),
            emit_to(dir.path(), "p.json", &["diagonalizer", group]),
            emit_to(dir.path(), "pu.json", &["diagonalizer", group, "--orthonormal"]),
            emit_to(dir.path(), "chi.json", &["chartable", group, "--source", "numeric"]),
            emit_to(dir.path(), "g.json", &["group", group]),
        ];
        for f in &files {
            let out = run(&["verify", group, f]);
            assert!(
                out.status.success(),
                "{group} {f}: {}{}",
                String::from_utf8_lossy(&out.stdout),
                String::from_utf8_lossy(&out.stderr)
            );
        }
    }
}

#[test]
fn verify_rejects_tampered_idempotents() {
    let dir = tempfile::tempdir().unwrap();
    let path = emit_to(dir.path(), "idem.json", &["idempotents", "D6"]);
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    v["idempotents"][2]["coeffs"][0][0] = serde_json::json!(0.7);
    std::fs::write(&path, v.to_string()).unwrap();
    let out = run(&["verify", "D6", &path]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn convolve_matches_direct_product() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    // D6: w = 1 + 2a, v = b  =>  wv = b + 2ab
    std::fs::write(&a, "[[1,0],[2,0],[0,0],[0,0],[0,0],[0,0]]").unwrap();
    std::fs::write(&b, "[[0,0],[0,0],[0,0],[1,0],[0,0],[0,0]]").unwrap();
    let v = json_out(&["convolve", "D6", a.to_str().unwrap(), b.to_str().unwrap()]);
    let got: Vec<f64> = v.as_array().unwrap().iter().map(|z| z[0].as_f64().unwrap()).collect();
    let want = [0., 0., 0., 1., 2., 0.];
    for (x, y) in got.iter().zip(want) {
        assert!((x - y).abs() < 1e-12, "{got:?}");
    }
}

#[test]
fn rep_block_images() {
    let v = json_out(&["rep", "D6", "--block", "2", "--element", "b"]);
    let m = real_rows(&v["images"][0]["matrix"]);
    assert_close(
        &m,
        &[&[0., 0., 1., 0.], &[0., 0., 0., 1.], &[1., 0., 0., 0.], &[0., 1., 0., 0.]],
        1e-12,
    );
    let out = run(&["rep", "D6", "--block", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn transform_rejects_non_group_ring_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.csv");
    let mut text = String::new();
    for i in 0..6 {
        let row: Vec<String> = (0..6).map(|j| format!("{}+0i", (i * 6 + j) as f64)).collect();
        text.push_str(&row.join(","));
        text.push('\n');
    }
    std::fs::write(&m, text).unwrap();
    let out = run(&["transform", "D6", "--matrix", m.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["diagonalizer", "X7"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["transform", "D6", "--element", "zz"]).status.code(), Some(2));
    assert_eq!(run(&["diagonalizer", "D6", "--method", "abelian"]).status.code(), Some(2));
}

#[test]
fn user_table_group_spec() {
    let dir = tempfile::tempdir().unwrap();
    let path = emit_to(dir.path(), "q8.json", &["group", "Q8"]);
    let spec = format!("table:{path}");
    let v = json_out(&["idempotents", &spec, "--source", "numeric"]);
    let ranks: Vec<u64> = v["idempotents"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["rank"].as_u64().unwrap())
        .collect();
    assert_eq!(ranks, [1, 1, 1, 1, 4]);
}
