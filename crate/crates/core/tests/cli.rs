use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use transversal_lab::canon::is_isomorphic;
use transversal_lab::instances::{h10, h8};
use transversal_lab::io::{parse_gr, parse_hg};

const SCHEMA: &str = include_str!("../schema/run-report.schema.json");

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_transversal-lab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("transversal-lab-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_instance(dir: &Path, name: &str, ext: &str) -> String {
    let path = dir.join(format!("{name}.{ext}"));
    let out = run(&["instance", name, "-o", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path.to_str().unwrap().to_string()
}

/// Minimal draft-07 subset: type, enum, required, properties,
/// additionalProperties = false, items, minimum and local $ref.
fn validate(schema: &Value, root: &Value, value: &Value, at: &str) -> Result<(), String> {
    if let Some(r) = schema.get("$ref").and_then(Value::as_str) {
        let name = r.trim_start_matches("#/definitions/");
        return validate(&root["definitions"][name], root, value, at);
    }
    if let Some(t) = schema.get("type") {
        let types: Vec<&str> = match t {
            Value::String(s) => vec![s.as_str()],
            Value::Array(a) => a.iter().filter_map(Value::as_str).collect(),
            _ => vec![],
        };
        let ok = types.iter().any(|t| match *t {
            "object" => value.is_object(),
            "array" => value.is_array(),
            "string" => value.is_string(),
            "integer" => value.is_i64() || value.is_u64(),
            "boolean" => value.is_boolean(),
            "number" => value.is_number(),
            _ => false,
        });
        if !ok {
            return Err(format!("{at}: expected {types:?}, got {value}"));
        }
    }
    if let Some(options) = schema.get("enum").and_then(Value::as_array) {
        if !options.contains(value) {
            return Err(format!("{at}: {value} not in {options:?}"));
        }
    }
    if let (Some(min), Some(v)) = (schema.get("minimum").and_then(Value::as_f64), value.as_f64()) {
        if v < min {
            return Err(format!("{at}: {v} below {min}"));
        }
    }
    if let Some(obj) = value.as_object() {
        for key in schema.get("required").and_then(Value::as_array).into_iter().flatten() {
            let key = key.as_str().unwrap();
            if !obj.contains_key(key) {
                return Err(format!("{at}: missing `{key}`"));
            }
        }
        let props = schema.get("properties").and_then(Value::as_object);
        for (k, v) in obj {
            match props.and_then(|p| p.get(k)) {
                Some(s) => validate(s, root, v, &format!("{at}.{k}"))?,
                None if schema.get("additionalProperties") == Some(&Value::Bool(false)) => {
                    return Err(format!("{at}: unexpected `{k}`"))
                }
                None => {}
            }
        }
    }
    if let (Some(items), Some(arr)) = (schema.get("items"), value.as_array()) {
        for (i, v) in arr.iter().enumerate() {
            validate(items, root, v, &format!("{at}[{i}]"))?;
        }
    }
    Ok(())
}

fn check_report(out: &Output) -> Value {
    let schema: Value = serde_json::from_str(SCHEMA).unwrap();
    let report: Value = serde_json::from_slice(&out.stdout).expect("JSON on stdout");
    validate(&schema, &schema, &report, "report").unwrap();
    let command = report["command"].as_str().unwrap();
    if let Some(def) = schema["definitions"].get(command) {
        validate(def, &schema, &report["result"], "result").unwrap();
    }
    report
}

#[test]
fn solve_h8_json() {
    let dir = scratch("solve");
    let file = write_instance(&dir, "h8", "hg");
    let out = run(&["solve", &file, "--json"]);
    assert!(out.status.success());
    let report = check_report(&out);
    assert_eq!(report["result"]["tau"], 3);
    assert_eq!(report["inputs"][0]["path"], file.as_str());

    let out = run(&["solve", &file, "--engine", "brute", "--json"]);
    assert_eq!(check_report(&out)["result"]["witness"]["vertices"], serde_json::json!([0, 2, 4]));
    let out = run(&["solve", &file, "--canonical", "--include", "7", "--json"]);
    assert_eq!(check_report(&out)["result"]["tau"], 3);
}

#[test]
fn bound_exit_codes() {
    let dir = scratch("bound");
    let h8 = write_instance(&dir, "h8", "hg");
    let out = run(&["bound", &h8, "--theorem", "t3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("equality"));
    let out = run(&["bound", &h8, "--theorem", "t3", "--json"]);
    let report = check_report(&out);
    assert_eq!(report["result"]["lhs"], report["result"]["rhs"]);

    let h2 = write_instance(&dir, "h2", "hg");
    let out = run(&["bound", &h2, "--theorem", "t3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["bound", &h2, "--theorem", "t9"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["bound", "/nonexistent.hg", "--theorem", "t1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn node_budget_maps_to_exit_three() {
    let dir = scratch("budget");
    let h8 = write_instance(&dir, "h8", "hg");
    let out = bin()
        .args(["solve", &h8])
        .env("TRANSVERSAL_LAB_NODE_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn family_commands() {
    let dir = scratch("genb");
    let out = run(&["gen-b", "--max-n", "6", "--out", dir.to_str().unwrap()]);
    assert!(out.status.success());
    let hg_files: Vec<PathBuf> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "hg"))
        .collect();
    assert_eq!(hg_files.len(), 5);
    for f in &hg_files {
        let h = parse_hg(&std::fs::read_to_string(f).unwrap()).unwrap();
        let cert: transversal_lab::BCertificate =
            serde_json::from_str(&std::fs::read_to_string(f.with_extension("cert")).unwrap()).unwrap();
        assert!(cert.certifies(&h));
    }

    let out = run(&["verify-lemma5", "--max-n", "8", "--json", "--jobs", "2"]);
    assert!(out.status.success());
    let report = check_report(&out);
    assert_eq!(report["result"].as_array().unwrap().len(), 12);
}

#[test]
fn instances_round_trip() {
    let dir = scratch("instances");
    for (name, expected) in [("h8", h8()), ("h10", h10())] {
        let path = write_instance(&dir, name, "hg");
        let back = parse_hg(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert!(is_isomorphic(&back, &expected));
    }
    let out = run(&["instance", "nope"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["random", "--n", "8", "--regular", "3", "--seed", "4"]);
    assert!(out.status.success());
    let again = run(&["random", "--n", "8", "--regular", "3", "--seed", "4"]);
    assert_eq!(out.stdout, again.stdout);
    let h = parse_hg(&String::from_utf8_lossy(&out.stdout)).unwrap();
    assert!(h.is_regular(3) && h.is_uniform(4));
    assert_eq!(run(&["random", "--n", "9", "--regular", "3"]).status.code(), Some(2));
}

#[test]
fn domination_commands() {
    let dir = scratch("domination");
    let gr = write_instance(&dir, "heawood-bc", "gr");
    let g = parse_gr(&std::fs::read_to_string(&gr).unwrap()).unwrap();
    assert_eq!(g.n(), 14);

    let out_hg = dir.join("onh.hg");
    let out = run(&["onh", &gr, "-o", out_hg.to_str().unwrap()]);
    assert!(out.status.success());
    let h = parse_hg(&std::fs::read_to_string(&out_hg).unwrap()).unwrap();
    assert_eq!((h.n(), h.m(), h.components().len()), (14, 14, 2));

    let out = run(&["gammat", &gr, "--pipeline", "--json"]);
    assert!(out.status.success());
    let report = check_report(&out);
    assert_eq!(report["result"]["gamma_t"], 6);
    assert_eq!(report["result"]["pipeline"]["transversal"]["vertices"].as_array().unwrap().len(), 6);

    let c4 = write_instance(&dir, "c4", "gr");
    assert_eq!(run(&["gammat", &c4]).status.code(), Some(0));
    assert_eq!(run(&["gammat", &c4, "--pipeline"]).status.code(), Some(2));
}

#[test]
fn scan_command() {
    let out = run(&["scan", "c3", "--n", "10", "--seeds", "0..300", "--json"]);
    assert!(out.status.success());
    let report = check_report(&out);
    assert_eq!(report["result"]["instances"], 300);
    assert_eq!(report["result"]["violations"].as_array().unwrap().len(), 0);
    let reference = &report["result"]["reference"][0];
    assert_eq!(reference["lhs"], reference["rhs"]);

    let out = run(&["scan", "c2", "--n", "9", "--seeds", "5..50"]);
    assert!(out.status.success());
    assert_eq!(run(&["scan", "c4", "--n", "9"]).status.code(), Some(2));
    assert_eq!(run(&["scan", "c3", "--n", "9", "--seeds", "9..3"]).status.code(), Some(2));
}
