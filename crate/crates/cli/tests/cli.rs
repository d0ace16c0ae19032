use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn ppkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ppkit")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad JSON ({e}): {}\nstderr: {}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn write(dir: &Path, name: &str, v: &Value) -> String {
    let path = dir.join(name);
    std::fs::write(&path, v.to_string()).unwrap();
    path.to_str().unwrap().to_string()
}

fn f4() -> Value {
    json!({ "p": 2, "e": 1, "n": 2 })
}

#[test]
fn verify_identity_on_f4() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "id.json", &json!({ "field": f4(), "codomain": "qn", "table": [0, 1, 2, 3] }));
    let out = ppkit(&["verify", "--input", &input]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["is_pp"], json!(true));
    assert_eq!(v["is_linearized"], json!(true));
    assert_eq!(v["projection_profile"], json!([true, true]));
}

#[test]
fn verify_square_on_f9() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "sq.json", &json!({ "terms": [[1, 2]] }));
    let out = ppkit(&["verify", "--p", "3", "--n", "2", "--input", &input]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert_eq!(v["is_pp"], json!(false));
    assert_eq!(v["image_size"], json!(5));
}

#[test]
fn verify_balanced_trace() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "tr.json", &json!({ "field": f4(), "codomain": "q", "table": [0, 0, 1, 1] }));
    let out = ppkit(&["verify", "--input", &input]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["balanced"], json!(true));
    let out = ppkit(&["verify", "--input", &input, "--k", "3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn malformed_inputs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let short = write(dir.path(), "short.json", &json!({ "field": f4(), "codomain": "qn", "table": [0, 1, 2] }));
    assert_eq!(ppkit(&["verify", "--input", &short]).status.code(), Some(2));
    let junk = dir.path().join("junk.json");
    std::fs::write(&junk, "{not json").unwrap();
    assert_eq!(ppkit(&["verify", "--input", junk.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(ppkit(&["verify"]).status.code(), Some(2));
    assert_eq!(ppkit(&["field", "--p", "4", "--n", "2"]).status.code(), Some(2));
    assert_eq!(ppkit(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(ppkit(&["reproduce", "--example", "nope", "--q", "3"]).status.code(), Some(2));
}

#[test]
fn field_description() {
    let out = ppkit(&["field", "--p", "2", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["field"]["modulus_qn"], json!([[1], [1], [1]]));
    assert_eq!(v["elements"][3]["name"], json!("ω^2"));
}

#[test]
fn reproduce_examples() {
    let out = ppkit(&["reproduce", "--example", "cubic", "--q", "11"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!((v["is_pp"].clone(), v["predicted"].clone()), (json!(true), json!(true)));

    let out = ppkit(&["reproduce", "--example", "cubic", "--q", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["is_pp"], json!(false));

    let out = ppkit(&["reproduce", "--example", "x11", "--m", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["is_pp"], json!(true));
}

#[test]
fn census_on_f4() {
    let out = ppkit(&["census", "--p", "2", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    let find = |name: &str| {
        v["reports"].as_array().unwrap().iter().find(|r| r["name"] == json!(name)).unwrap()["report"].clone()
    };
    for (name, value) in [("linear", 6), ("extension", 4), ("shape", 4), ("theorem12-constructions", 24)] {
        let r = find(name);
        assert_eq!(r["formula_value"], json!(value), "{name}");
        assert_eq!(r["observed_value"], json!(value), "{name}");
    }
    assert_eq!(ppkit(&["census", "--p", "5", "--n", "2"]).status.code(), Some(2));
}

#[test]
fn construct_theorem12_identity_and_non_basis() {
    let out = ppkit(&["construct", "--kind", "theorem12", "--p", "2", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["F"]["table"], json!([0, 1, 2, 3]));
    assert_eq!(v["inverse"]["table"], json!([0, 1, 2, 3]));

    let dir = tempfile::tempdir().unwrap();
    let params = write(dir.path(), "p.json", &json!({ "field": f4(), "a": [1, 1] }));
    let out = ppkit(&["construct", "--kind", "theorem12", "--input", &params]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert_eq!(v["is_pp"], json!(false));
    assert_eq!(v["conditions"]["a_is_basis"], json!(false));
    assert_eq!(v["report"]["observed_value"], json!(false));
}

#[test]
fn construct_worked_theorem12_instance() {
    let dir = tempfile::tempdir().unwrap();
    let params = write(dir.path(), "p.json", &json!({ "field": f4(), "u": [1, 2], "h": [[0, 1], [1, 0]], "a": [1, 2] }));
    let out = ppkit(&["construct", "--kind", "theorem12", "--input", &params]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["F"]["table"], json!([2, 3, 0, 1]));
    assert_eq!(v["inverse_matches_table"], json!(true));
}

#[test]
fn construct_open_problem_on_f4() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("inst.json");
    let out = ppkit(&["construct", "--kind", "open-problem", "--p", "2", "--n", "2", "--exhaustive", "--output", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    let instances = v["instances"].as_array().unwrap();
    assert!(instances.len() >= 2);
    for inst in instances {
        assert_eq!(inst["certificate"], json!({ "F_is_pp": true, "G_is_pp": false, "G_is_linearized": false }));
        // Re-check the certificate through `verify`.
        let f = write(dir.path(), "f.json", &inst["F"]);
        assert_eq!(ppkit(&["verify", "--input", &f]).status.code(), Some(0));
        let g = write(dir.path(), "g.json", &inst["G"]);
        let out = ppkit(&["verify", "--input", &g]);
        assert_eq!(out.status.code(), Some(1));
        assert_eq!(json_of(&out)["is_linearized"], json!(false));
    }
}

#[test]
fn construct_extend_enumerates() {
    let out = ppkit(&["construct", "--kind", "extend", "--p", "2", "--n", "2", "--exhaustive"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["extension_count"], json!(4));
    assert_eq!(v["enumerated"]["distinct"], json!(4));
}

#[test]
fn construct_linear_and_monomial() {
    let dir = tempfile::tempdir().unwrap();
    let params = write(dir.path(), "l.json", &json!({ "field": f4(), "theta": [3, 1], "omega": [1, 2] }));
    let out = ppkit(&["construct", "--kind", "linear", "--input", &params]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["L"]["table"], json!([0, 1, 2, 3]));

    let params = write(dir.path(), "m.json", &json!({ "field": { "p": 3, "e": 1, "n": 2 }, "m": [2, 1] }));
    let out = ppkit(&["construct", "--kind", "monomial", "--input", &params]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["conditions"]["gcd_ok"], json!(false));
}

#[test]
fn inverse_command() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "c.json", &json!({ "field": { "p": 3, "e": 1, "n": 2 }, "terms": [[1, 3]] }));
    let out = ppkit(&["inverse", "--input", &input]);
    assert_eq!(out.status.code(), Some(0));
    // x^3 on F_9 is an involution.
    let t = json_of(&out)["inverse"]["table"].clone();
    let direct = ppkit(&["verify", "--input", &input]);
    assert_eq!(direct.status.code(), Some(0));
    let cube: Vec<u64> = {
        let v = json_of(&ppkit(&["inverse", "--input", &write(dir.path(), "t.json", &json!({ "field": { "p": 3, "e": 1, "n": 2 }, "codomain": "qn", "table": t }))]));
        serde_json::from_value(v["inverse"]["table"].clone()).unwrap()
    };
    assert_eq!(json!(cube), t);
    let sq = write(dir.path(), "s.json", &json!({ "field": { "p": 3, "e": 1, "n": 2 }, "terms": [[1, 2]] }));
    assert_eq!(ppkit(&["inverse", "--input", &sq]).status.code(), Some(1));
}

#[test]
fn pretty_uses_element_names() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "id.json", &json!({ "field": f4(), "codomain": "qn", "table": [0, 1, 2, 3] }));
    let out = ppkit(&["inverse", "--input", &input, "--pretty"]);
    let v = json_of(&out);
    assert_eq!(v["inverse"]["table"], json!(["0", "1", "ω", "ω^2"]));
}

#[test]
fn identical_invocations_are_byte_identical() {
    let runs: Vec<Output> = (0..2)
        .map(|_| ppkit(&["construct", "--kind", "open-problem", "--p", "3", "--n", "2", "--seed", "7", "--samples", "40"]))
        .collect();
    assert_eq!(runs[0].status.code(), Some(0));
    assert_eq!(runs[0].stdout, runs[1].stdout);
    let other = ppkit(&["construct", "--kind", "open-problem", "--p", "3", "--n", "2", "--seed", "8", "--samples", "40"]);
    assert_ne!(runs[0].stdout, other.stdout);
    let a = ppkit(&["census", "--p", "3", "--n", "2"]);
    let b = ppkit(&["census", "--p", "3", "--n", "2"]);
    assert_eq!(a.stdout, b.stdout);
}
