use std::collections::BTreeSet;
use std::path::Path;
use std::process::{Command, Output};

use fano5_core::engine::CohTable;
use serde_json::Value;

fn run_with(cache: Option<&Path>, args: &[&str]) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_fano5"));
    match cache {
        Some(p) => c.env("FANO5_CACHE", p),
        None => c.arg("--no-cache"),
    };
    c.args(args).output().expect("binary runs")
}

fn run(args: &[&str]) -> Output {
    run_with(None, args)
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut a = vec!["--format", "json"];
    a.extend_from_slice(args);
    let out = run(&a);
    (serde_json::from_slice(&out.stdout).expect("json output"), out.status.code().unwrap())
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn euler_characteristics() {
    assert_eq!(stdout(&run(&["chi", "O(1)"])).trim(), "7");
    assert_eq!(stdout(&run(&["chi", "O(0)"])).trim(), "1");
    let (v, code) = json(&["chi", "E_S(1)"]);
    assert_eq!((v["result"].as_i64(), code), (Some(10), 0));
}

#[test]
fn envelope_shape() {
    let (v, _) = json(&["coh", "U'"]);
    for k in ["command", "input", "result", "warnings"] {
        assert!(v.get(k).is_some(), "{k}");
    }
    assert_eq!(v["command"], "coh");
    assert_eq!(v["result"]["dims"], serde_json::json!([5, 0, 0, 0]));
}

#[test]
fn classify_rank3() {
    let (v, code) = json(&["classify", "--rank", "3", "--c1", "0"]);
    assert_eq!(code, 0);
    let rows = v["result"].as_array().unwrap();
    let ac: BTreeSet<(u64, u64)> = rows.iter().map(|r| (r["a"].as_u64().unwrap(), r["c"].as_u64().unwrap())).collect();
    assert_eq!(ac, BTreeSet::from([(0, 3), (1, 2), (2, 1), (3, 0)]));
    assert!(rows.iter().all(|r| r["a"] == r["b"]));
    let (v, _) = json(&["classify", "--rank", "3", "--c1", "-2"]);
    assert_eq!(v["result"][0]["form"], "dual");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["split", "U"]).status.code(), Some(2));
    assert_eq!(run(&["split", "O(1)+O(-2)"]).status.code(), Some(0));
    assert_eq!(run(&["acm", "O(1)"]).status.code(), Some(0));
    assert_eq!(run(&["helix-check"]).status.code(), Some(0));
    assert_eq!(run(&["diagonal-check"]).status.code(), Some(0));
    let (v, code) = json(&["chi", "U *"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["code"], "syntax_error");
    let (v, code) = json(&["classify", "--rank", "2", "--c1", "1"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["code"], "not_normalized");
}

#[test]
fn rationals_are_exact() {
    let (v, _) = json(&["hilb", "O(0)"]);
    let s = v["result"].to_string();
    assert!(s.contains("\"den\""), "{s}");
}

#[test]
fn table_json_round_trip() {
    let (v, _) = json(&["coh", "E_L", "--window", "-4..4"]);
    let t: CohTable = serde_json::from_value(v["result"].clone()).unwrap();
    assert_eq!((t.lo, t.hi, t.dims.len()), (-4, 4, 9));
    assert_eq!(serde_json::to_value(&t).unwrap(), v["result"]);
}

#[test]
fn beilinson_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("t.json");
    std::fs::write(&f, "[[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,1]]").unwrap();
    let (v, code) = json(&["beilinson", "--table", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["c"]["terms"]["0"], serde_json::json!([[1, 0]]));
    let (v, _) = json(&["beilinson", "I_L"]);
    assert_eq!(v["result"]["c"]["terms"]["-1"], serde_json::json!([[1, 2]]));
}

#[test]
fn mutation_ranks() {
    let (v, _) = json(&["mutate", "right", "U(-1)", "U"]);
    assert_eq!((v["result"]["rank"].as_i64(), v["result"]["hom_dim"].as_u64()), (Some(42), Some(22)));
    let (v, _) = json(&["mutate", "right", "O(-1)", "U"]);
    assert_eq!(v["result"]["rank"].as_i64(), Some(9));
}

#[test]
fn cache_is_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("bott.tsv");
    let golden: [&[&str]; 5] = [
        &["coh", "U * Q'", "--window", "-3..3"],
        &["hom", "U(-1)", "U"],
        &["chi", "E_S(1)"],
        &["classify", "--rank", "2", "--c1", "0"],
        &["acm", "sym2(U)(1)"],
    ];
    for args in golden {
        let mut a = vec!["--format", "json"];
        a.extend_from_slice(args);
        let cold = run(&a);
        let first = run_with(Some(&cache), &a);
        let warm = run_with(Some(&cache), &a);
        assert!(cache.exists());
        assert_eq!(cold.stdout, first.stdout, "{args:?}");
        assert_eq!(first.stdout, warm.stdout, "{args:?}");
    }
    let text = std::fs::read_to_string(&cache).unwrap();
    assert!(text.lines().count() > 1);
}
