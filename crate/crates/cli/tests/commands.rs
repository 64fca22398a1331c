use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const EXAMPLE_INSTANCE: &str = r#"{"m": 3, "sets": [[1, 2], [2, 3], [1, 3], [1, 2, 3]]}"#;

fn minctrl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minctrl"))
        .args(args)
        .env_remove("MINCTRL_BACKEND")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn reduce_example(dir: &TempDir) -> PathBuf {
    let inst = write(dir, "instance.json", EXAMPLE_INSTANCE);
    let out = dir.path().join("red");
    let res = minctrl(&["reduce", s(&inst), "--out-dir", s(&out)]);
    assert_eq!(code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
    out
}

#[test]
fn solve_diagonal_matrix() {
    let dir = TempDir::new().unwrap();
    let a = write(
        &dir,
        "a.json",
        r#"{"rows":3,"cols":3,"data":[1,0,0,0,2,0,0,0,3]}"#,
    );
    let out = minctrl(&[
        "solve",
        s(&a),
        "--mode",
        "vector",
        "--algo",
        "det",
        "--backend",
        "exact",
    ]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["support"].as_array().unwrap().len(), 3);
    assert_eq!(v["trace"].as_array().unwrap().len(), 3);
}

#[test]
fn solve_identity_is_infeasible() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "id.csv", "1,0\n0,1\n");
    let out = minctrl(&["solve", s(&a)]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout_json(&out)["controllable"], false);
    let diag = minctrl(&["solve", s(&a), "--mode", "diagonal"]);
    assert_eq!(code(&diag), 0);
}

#[test]
fn solve_reduced_matrix_round_trips() {
    let dir = TempDir::new().unwrap();
    let red = reduce_example(&dir);
    let a = red.join("A.json");
    for backend in ["exact", "pbh", "svd"] {
        let result = dir.path().join(format!("solve_{backend}.json"));
        let out = minctrl(&["solve", s(&a), "--backend", backend, "--out", s(&result)]);
        assert_eq!(code(&out), 0, "{backend}");
        assert!(out.stdout.is_empty());
        let v: Value = serde_json::from_str(&std::fs::read_to_string(result).unwrap()).unwrap();
        assert_eq!(v["support"].as_array().unwrap().len(), 3, "{backend}");
    }
    let rand = minctrl(&["solve", s(&a), "--algo", "rand", "--seed", "5"]);
    assert_eq!(code(&rand), 0);
    assert_eq!(stdout_json(&rand)["algorithm"], "randomized_vector");
}

#[test]
fn backend_comes_from_environment() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "id.csv", "1,0\n0,1\n");
    let out = Command::new(env!("CARGO_BIN_EXE_minctrl"))
        .args(["solve", s(&a)])
        .env("MINCTRL_BACKEND", "pbh")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2, "PBH rejects repeated eigenvalues");
}

#[test]
fn malformed_inputs_exit_two() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", r#"{"rows":2,"cols":2,"data":[1]}"#);
    assert_eq!(code(&minctrl(&["solve", s(&bad)])), 2);
    let rect = write(&dir, "rect.csv", "1,2,3\n4,5,6\n");
    assert_eq!(code(&minctrl(&["solve", s(&rect)])), 2);
    assert_eq!(code(&minctrl(&["solve", "/nonexistent/a.json"])), 2);
    assert_eq!(
        code(&minctrl(&["solve", s(&rect), "--mode", "sideways"])),
        2
    );
}

#[test]
fn reduce_writes_exact_matrices() {
    let dir = TempDir::new().unwrap();
    let red = reduce_example(&dir);
    let a: Value =
        serde_json::from_str(&std::fs::read_to_string(red.join("A.json")).unwrap()).unwrap();
    assert_eq!(a["rows"], 8);
    assert_eq!(a["data"][7], "-7/2");
    assert_eq!(a["data"][24], "3/4");
    assert_eq!(a["data"][63], "8");
    let map: Value =
        serde_json::from_str(&std::fs::read_to_string(red.join("index_map.json")).unwrap())
            .unwrap();
    assert_eq!(map["schema_version"], 1);
}

#[test]
fn reduce_small_and_symmetric() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "one.json", r#"{"m":1,"sets":[[1]]}"#);
    let out_dir = dir.path().join("one");
    let out = minctrl(&["reduce", s(&inst), "--symmetric", "--out-dir", s(&out_dir)]);
    assert_eq!(code(&out), 0);
    let summary = stdout_json(&out);
    assert_eq!(summary["n"], 3);
    for f in [
        "V.json",
        "A.json",
        "index_map.json",
        "V_hat.json",
        "A_hat.json",
        "column_index_map.json",
    ] {
        assert!(out_dir.join(f).exists(), "{f}");
    }
    let a: Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("A.json")).unwrap()).unwrap();
    assert_eq!((a["rows"].as_u64(), a["cols"].as_u64()), (Some(3), Some(3)));
    let r = summary["r"].as_u64().unwrap();
    let a_hat: Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("A_hat.json")).unwrap())
            .unwrap();
    assert_eq!(a_hat["rows"].as_u64(), Some(r));
}

#[test]
fn reduce_rejects_empty_set() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "empty.json", r#"{"m":2,"sets":[[1],[]]}"#);
    let out = minctrl(&["reduce", s(&inst), "--out-dir", s(dir.path())]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("set 2"));
}

#[test]
fn oracle_commands() {
    let dir = TempDir::new().unwrap();
    let red = reduce_example(&dir);
    let inst = dir.path().join("instance.json");
    let hs = minctrl(&["oracle", s(&inst), "--kind", "hitting-set"]);
    assert_eq!(code(&hs), 0);
    assert_eq!(stdout_json(&hs)["optimum"], 2);
    let mv = minctrl(&["oracle", s(&red.join("V.json")), "--kind", "min-vector"]);
    assert_eq!(stdout_json(&mv)["optimum"], 3);
    let md = minctrl(&["oracle", s(&red.join("V.json")), "--kind", "min-diagonal"]);
    assert_eq!(stdout_json(&md)["optimum"], 3);

    let big: Vec<String> = (0..15)
        .map(|i| {
            (0..15)
                .map(|j| if i == j { "1" } else { "0" })
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect();
    let big = write(&dir, "big.csv", &big.join("\n"));
    assert_eq!(
        code(&minctrl(&["oracle", s(&big), "--kind", "min-vector"])),
        2
    );
    let lifted = minctrl(&["oracle", s(&big), "--kind", "min-vector", "--no-guard"]);
    assert_eq!(stdout_json(&lifted)["optimum"], 15);
}

#[test]
fn experiment_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "cfg.json",
        r#"{"n_values": [6, 8], "trials_per_n": 3, "seed": 7}"#,
    );
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    let csv = dir.path().join("a.csv");
    assert_eq!(
        code(&minctrl(&[
            "experiment",
            s(&cfg),
            "--out",
            s(&a),
            "--csv",
            s(&csv)
        ])),
        0
    );
    assert_eq!(code(&minctrl(&["experiment", s(&cfg), "--out", s(&b)])), 0);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(std::fs::read_to_string(csv).unwrap().lines().count(), 7);

    let zero = write(&dir, "zero.json", r#"{"trials_per_n": 0}"#);
    assert_eq!(code(&minctrl(&["experiment", s(&zero)])), 2);
    let unknown = write(&dir, "unknown.json", r#"{"trials": 3}"#);
    assert_eq!(code(&minctrl(&["experiment", s(&unknown)])), 2);
}

#[test]
fn verify_commands() {
    let dir = TempDir::new().unwrap();
    let red = reduce_example(&dir);
    let a = red.join("A.json");
    let good = write(&dir, "b.json", "[1, 1, 0, 0, 0, 0, 0, 1]");
    let e1 = write(&dir, "e1.json", "[1, 0, 0, 0, 0, 0, 0, 0]");
    let short = write(&dir, "short.json", "[1, 1]");
    for backend in ["exact", "pbh", "svd"] {
        let ok = minctrl(&["verify", s(&a), s(&good), "--backend", backend]);
        assert_eq!(code(&ok), 0, "{backend}");
        assert_eq!(stdout_json(&ok)["rank"], 8);
        assert_eq!(
            code(&minctrl(&["verify", s(&a), s(&e1), "--backend", backend])),
            1,
            "{backend}"
        );
    }
    assert_eq!(code(&minctrl(&["verify", s(&a), s(&short)])), 2);
}
