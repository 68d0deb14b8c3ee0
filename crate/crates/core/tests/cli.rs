// Copyright 2026 The rivetlite Authors
//
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

use rivetlite::backend::builtin_topology;
use rivetlite::bench::{check_schema, mask_timing, LAYERWISE_SCHEMA, WARMUP_SCHEMA};
use rivetlite::circuit::random_circuit;
use rivetlite::transpiler::TranspiledCircuit;

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rivetlite")).args(args).env_remove("RIVETLITE_SEED").output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn write_circuit(dir: &Path, n: usize) -> String {
    let path = dir.join("in.json");
    fs::write(&path, random_circuit(n, 6, 1).measure_all().unwrap().to_json()).unwrap();
    path.display().to_string()
}

#[test]
fn transpile_writes_a_valid_circuit() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_circuit(dir.path(), 4);
    let output = dir.path().join("out.json");
    let out =
        cli(&["transpile", "--input", &input, "--backend", "ring-6", "--output", output.to_str().unwrap(), "-O", "2"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let summary = String::from_utf8(out.stdout).unwrap();
    assert!(summary.contains("depth") && summary.contains("two-qubit gates"), "{summary}");
    let t = TranspiledCircuit::from_json(&fs::read_to_string(&output).unwrap()).unwrap();
    t.check_invariants(&builtin_topology("ring-6").unwrap()).unwrap();
}

#[test]
fn transpile_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_circuit(dir.path(), 3);
    let out = cli(&["transpile", "-i", &input]);
    assert_eq!(code(&out), 0);
    let t = TranspiledCircuit::from_json(String::from_utf8(out.stdout).unwrap().trim()).unwrap();
    assert_eq!(t.physical.num_qubits(), 27);
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_circuit(dir.path(), 3);
    let garbage = dir.path().join("bad.json");
    fs::write(&garbage, "{\"n\": 1, \"gates\": [{\"name\": \"ccx\"").unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["transpile", "-i", "/nonexistent/circuit.json"],
        vec!["transpile", "-i", garbage.to_str().unwrap()],
        vec!["transpile", "-i", &input, "--backend", "torus-9"],
        vec!["transpile", "-i", &input, "-O", "7"],
        vec!["transpile", "-i", &input, "--bogus"],
        vec!["bench", "warmup", "--qubits", "0"],
        vec!["train", "iris", "--config", "/nonexistent.toml"],
        vec!["frobnicate"],
    ];
    for args in cases {
        let out = cli(&args);
        assert_eq!(code(&out), 2, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn pipeline_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_circuit(dir.path(), 5);
    let out = cli(&["transpile", "-i", &input, "--backend", "linear-3"]);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn warmup_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("w.csv");
    let md = dir.path().join("w.md");
    let out = cli(&[
        "bench",
        "warmup",
        "--qubits",
        "4",
        "--depth",
        "4",
        "--paulis",
        "3",
        "--trials",
        "2",
        "--shots",
        "2000",
        "--csv",
        csv.to_str().unwrap(),
        "--summary",
        md.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    check_schema(&text, WARMUP_SCHEMA).unwrap();
    // Per trial: one prefix row, then a monolithic and a stitched row per Pauli.
    assert_eq!(text.lines().count(), 2 + 2 * (1 + 2 * 3));
    assert!(fs::read_to_string(&md).unwrap().contains('|'));
}

#[test]
fn layerwise_bench_verifies() {
    let out =
        cli(&["bench", "layerwise", "--qubits", "4", "--steps", "3", "--trials", "1", "--verify", "--encoding", "zz"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    check_schema(&text, LAYERWISE_SCHEMA).unwrap();
    assert!(String::from_utf8(out.stderr).unwrap().contains("max semantic distance"));
}

#[test]
fn seed_falls_back_to_environment() {
    let args = ["bench", "warmup", "--qubits", "3", "--depth", "3", "--paulis", "2", "--trials", "1", "--shots", "500"];
    let explicit = cli(&[&args[..], &["--seed", "9"]].concat());
    let from_env =
        Command::new(env!("CARGO_BIN_EXE_rivetlite")).args(args).env("RIVETLITE_SEED", "9").output().unwrap();
    let default = cli(&args);
    let mask = |o: &Output| mask_timing(&String::from_utf8_lossy(&o.stdout));
    assert_eq!(mask(&explicit), mask(&from_env));
    assert_ne!(mask(&explicit), mask(&default));
}

#[test]
fn train_writes_trace() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("ll.toml");
    fs::write(
        &cfg,
        "num_steps = 2\nlayers_per_step = 1\nepochs_per_step = 2\nepochs_per_partition = 1\nrecord_transpile = false\n",
    )
    .unwrap();
    let trace = dir.path().join("trace.json");
    let out = cli(&["train", "iris", "--config", cfg.to_str().unwrap(), "--output", trace.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&trace).unwrap()).unwrap();
    assert_eq!(report["trace"]["checkpoints"].as_array().unwrap().len(), 2 + 2 * 2);
    assert_eq!(report["params"].as_object().unwrap().len(), 8);
    assert!(report.get("regular").is_none());
    let acc = report["test_accuracy"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&acc));
}
