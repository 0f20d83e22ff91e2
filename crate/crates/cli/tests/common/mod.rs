#![allow(dead_code)]

use std::path::Path;
use std::process::Command;

use serde_json::{json, Value};

pub struct Run {
    pub code: i32,
    pub json: Value,
    pub stdout: String,
    pub stderr: String,
}

impl Run {
    /// The report without its volatile part, as emitted bytes.
    pub fn stable(&self) -> String {
        let mut v = self.json.clone();
        v.as_object_mut().expect("report is an object").remove("volatile");
        serde_json::to_string_pretty(&v).unwrap()
    }

    pub fn cache_status(&self) -> &str {
        self.json["volatile"]["cache"].as_str().unwrap_or("")
    }
}

pub fn run_with(args: &[&str], cache: Option<&Path>, env_cache: Option<&Path>) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bogomolov"));
    cmd.env_remove("BOGOMOLOV_CACHE_DIR");
    if let Some(dir) = env_cache {
        cmd.env("BOGOMOLOV_CACHE_DIR", dir);
    }
    if let Some(dir) = cache {
        cmd.arg("--cache-dir").arg(dir);
    }
    let out = cmd.args(args).output().expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let json = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    Run { code: out.status.code().unwrap_or(-1), json, stdout, stderr: String::from_utf8(out.stderr).unwrap() }
}

pub fn run(args: &[&str]) -> Run {
    run_with(args, None, None)
}

pub fn named(name: &str) -> Value {
    json!({ "kind": "named", "name": name })
}

/// `normal ⋊ acting` with one automorphism for the acting element `1`.
pub fn semidirect(normal: Value, acting: &str, table: Vec<u32>) -> Value {
    json!({ "kind": "semidirect", "normal": normal, "acting": named(acting), "action": { "1": table } })
}

pub fn c3_squared() -> Value {
    json!({ "kind": "product", "left": named("C3"), "right": named("C3") })
}

/// Element map on `C3 × C3` (index `3a + b`) from a map on coordinates.
pub fn c3_squared_map(f: impl Fn(u32, u32) -> (u32, u32)) -> Vec<u32> {
    (0..9)
        .map(|x| {
            let (a, b) = f(x / 3, x % 3);
            3 * (a % 3) + b % 3
        })
        .collect()
}

/// `x ↦ kx` on `Z/n`.
pub fn multiply(n: u32, k: u32) -> Vec<u32> {
    (0..n).map(|x| x * k % n).collect()
}

/// `(C3 × C3) ⋊ C2` with the inversion action.
pub fn c3_squared_by_inversion() -> Value {
    semidirect(c3_squared(), "C2", c3_squared_map(|a, b| (3 - a, 3 - b)))
}

/// Coprime semidirect products used by the isomorphism checks.
pub fn coprime_semidirects() -> Vec<(&'static str, Value)> {
    vec![
        ("C3:C2", semidirect(named("C3"), "C2", vec![0, 2, 1])),
        ("C5:C2", semidirect(named("C5"), "C2", multiply(5, 4))),
        ("C5:C4", semidirect(named("C5"), "C4", multiply(5, 2))),
        ("C7:C3", semidirect(named("C7"), "C3", multiply(7, 2))),
        ("C3:C4", semidirect(named("C3"), "C4", vec![0, 2, 1])),
        (
            "(C2xC2):C3",
            semidirect(json!({ "kind": "product", "left": named("C2"), "right": named("C2") }), "C3", vec![0, 2, 3, 1]),
        ),
        ("(C3xC3):C2", c3_squared_by_inversion()),
    ]
}

/// Fixed-point-free actions.
pub fn frobenius_groups() -> Vec<(&'static str, Value)> {
    vec![
        ("C7:C3", semidirect(named("C7"), "C3", multiply(7, 2))),
        ("C5:C4", semidirect(named("C5"), "C4", multiply(5, 2))),
        ("C7:C6", semidirect(named("C7"), "C6", multiply(7, 3))),
        (
            "(C2xC2):C3",
            semidirect(json!({ "kind": "product", "left": named("C2"), "right": named("C2") }), "C3", vec![0, 2, 3, 1]),
        ),
        ("(C3xC3):C4", semidirect(c3_squared(), "C4", c3_squared_map(|a, b| (3 - b, a)))),
        ("C3:C2", semidirect(named("C3"), "C2", vec![0, 2, 1])),
    ]
}

pub fn schema(name: &str) -> jsonschema::JSONSchema {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::JSONSchema::compile(&v).expect("schema compiles")
}

/// Validation errors as text, empty when valid.
pub fn violations(schema: &jsonschema::JSONSchema, v: &Value) -> Vec<String> {
    match schema.validate(v) {
        Ok(()) => Vec::new(),
        Err(errs) => errs.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    }
}
