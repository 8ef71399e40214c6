// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn lcem(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lcem"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = lcem(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn generate(dir: &Path, name: &str, n: usize, d: usize, seed: u64) -> String {
    let path = dir.join(name);
    let p = path.to_str().unwrap().to_string();
    ok(&[
        "generate",
        "--qubits",
        &n.to_string(),
        "--depth",
        &d.to_string(),
        "--seed",
        &seed.to_string(),
        "--out",
        &p,
    ]);
    p
}

fn read_json(path: &str) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn generate_is_byte_identical_and_round_trips() {
    let dir = TempDir::new().unwrap();
    let a = generate(dir.path(), "a.json", 65, 35, 4);
    let b = generate(dir.path(), "b.json", 65, 35, 4);
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    let inst = lcem::Instance::from_json(&text).unwrap();
    assert_eq!(inst.to_json() + "\n", text);

    let small = generate(dir.path(), "c.json", 10, 10, 1);
    let inst = lcem::Instance::from_json(&fs::read_to_string(small).unwrap()).unwrap();
    assert_eq!(inst.noise.terms_per_layer(), Some(100));
}

#[test]
fn benchmark_observables_parse_and_run() {
    let dir = TempDir::new().unwrap();
    let inst = generate(dir.path(), "i.json", 12, 6, 2);
    for (k, o) in ["Z1", "Z1Z10", "Z1Z4Z10"].iter().enumerate() {
        let out = dir.path().join(format!("pec{k}.json"));
        let out = out.to_str().unwrap();
        ok(&[
            "run-pec", "--instance", &inst, "--observable", o, "--shots", "2000", "--batches", "4", "--out", out,
        ]);
        let doc = read_json(out);
        assert_eq!(doc["tool"], "lcem");
        assert_eq!(doc["config"]["observable"], *o);
        assert_eq!(doc["result"]["batch_means"].as_array().unwrap().len(), 4);
        let csv = fs::read_to_string(Path::new(out).with_extension("csv")).unwrap();
        assert!(csv.starts_with("# tool: lcem"));
        assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 5);

        let lc = lcem(&["lightcone", "--instance", &inst, "--observable", o]);
        assert!(lc.status.success());
        let doc: Value = serde_json::from_slice(&lc.stdout).unwrap();
        assert_eq!(doc["result"]["lightcone"]["sizes"].as_array().unwrap().len(), 6);
    }
}

#[test]
fn zero_noise_instances_give_zero_columns() {
    let dir = TempDir::new().unwrap();
    let inst = generate(dir.path(), "i.json", 10, 4, 0);
    // Strip the noise and save it as a new instance.
    let mut doc = read_json(&inst);
    doc["noise"] = Value::Array(Vec::new());
    let quiet = dir.path().join("quiet.json");
    fs::write(&quiet, serde_json::to_string(&doc).unwrap()).unwrap();
    let quiet = quiet.to_str().unwrap();

    let out = lcem(&["run-zne", "--instance", quiet, "--observable", "Z1"]);
    assert!(out.status.success());
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    for key in ["exact_bias", "bound_local", "bound_standard", "bound_compact", "stat_error"] {
        assert_eq!(r["result"][key], 0.0, "{key}");
    }

    let out = lcem(&["run-pec", "--instance", quiet, "--observable", "Z1", "--shots", "100"]);
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["result"]["overhead_standard"], r["result"]["overhead_local"]);
}

#[test]
fn oracle_runs_reproduce_bit_exactly() {
    let dir = TempDir::new().unwrap();
    let inst = generate(dir.path(), "i.json", 20, 10, 5);
    let run = || lcem(&["run-zne", "--instance", &inst, "--observable", "Z1Z10"]).stdout;
    let first = run();
    assert_eq!(first, run());
    let doc: Value = serde_json::from_slice(&first).unwrap();
    let r = &doc["result"];
    assert!(r["exact_bias"].as_f64().unwrap().abs() <= r["bound_local"].as_f64().unwrap());
    assert_eq!(r["beta"].as_array().unwrap().len(), 3);
}

#[test]
fn sampled_runs_do_not_depend_on_threads() {
    let dir = TempDir::new().unwrap();
    let inst = generate(dir.path(), "i.json", 10, 6, 5);
    let run = |threads: &str| {
        ok(&[
            "--threads", threads, "run-zne", "--instance", &inst, "--observable", "Z1", "--shots", "3000",
            "--seed", "7",
        ])
        .stdout
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn bounds_sweep_has_the_documented_columns() {
    let out = ok(&["bounds", "--qubits", "10,20", "--seeds", "2", "--depth", "4"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rows = text.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(
        rows.next().unwrap(),
        "n,seed,ideal,exact_bias,bound_local,bound_standard,bound_compact,overhead_standard,overhead_local,terms_in_cone"
    );
    assert_eq!(rows.count(), 4);
}

#[test]
fn exit_codes_separate_config_and_domain_errors() {
    let dir = TempDir::new().unwrap();
    let inst = generate(dir.path(), "i.json", 10, 3, 0);
    let code = |args: &[&str]| lcem(args).status.code();
    assert_eq!(code(&["run-zne", "--instance", &inst, "--observable", "Q1"]), Some(2));
    assert_eq!(code(&["run-zne", "--instance", &inst, "--observable", "Z11"]), Some(2));
    assert_eq!(code(&["run-zne", "--instance", "missing.json", "--observable", "Z1"]), Some(2));
    assert_eq!(code(&["generate", "--qubits", "66", "--depth", "1"]), Some(2));
    assert_eq!(code(&["run-pec", "--instance", &inst, "--observable", "Z1", "--shots", "0"]), Some(2));
    assert_eq!(code(&["run-zne", "--instance", &inst, "--observable", "Z1", "--gains", "1,2,2"]), Some(3));
    assert_eq!(code(&["run-zne", "--instance", &inst, "--observable", "Z1", "--gains", "1,5000"]), Some(3));
    assert_eq!(code(&["run-zne", "--instance", &inst, "--observable", "Z1", "--order", "5"]), Some(2));
    assert_eq!(code(&["bogus"]), Some(2));
}
