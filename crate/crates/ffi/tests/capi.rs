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

use std::ffi::{CStr, CString};
use std::ptr;

use rivetlite_ffi::*;

const BELL: &str = r#"{"n": 3, "gates": [
    {"name": "h", "qubits": [0]},
    {"name": "cx", "qubits": [0, 2]}],
    "measurements": [[0, 0], [2, 1]]}"#;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = rivetlite_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

unsafe fn take_string(p: *mut libc::c_char) -> String {
    let s = CStr::from_ptr(p).to_string_lossy().into_owned();
    rivetlite_string_free(p);
    s
}

unsafe fn circuit(json: &str) -> *mut rivetlite_circuit {
    let mut c = ptr::null_mut();
    assert_eq!(rivetlite_circuit_from_json(cstr(json).as_ptr(), &mut c), rivetlite_status::Ok);
    c
}

unsafe fn topology(name: &str) -> *mut rivetlite_topology {
    let mut t = ptr::null_mut();
    assert_eq!(rivetlite_topology_builtin(cstr(name).as_ptr(), &mut t), rivetlite_status::Ok);
    t
}

#[test]
fn transpile_and_sample_round_trip() {
    unsafe {
        let c = circuit(BELL);
        let topo = topology("linear-3");
        assert_eq!(rivetlite_circuit_num_qubits(c), 3);
        assert_eq!(rivetlite_topology_num_physical(topo), 3);

        let mut t = ptr::null_mut();
        assert_eq!(rivetlite_transpile(c, topo, 3, 7, &mut t), rivetlite_status::Ok);
        assert!(rivetlite_transpiled_two_qubit_count(t) >= 1);
        assert!(rivetlite_transpiled_depth(t) >= 2);
        assert!(rivetlite_transpiled_elapsed_seconds(t) >= 0.0);

        let mut json = ptr::null_mut();
        assert_eq!(rivetlite_transpiled_to_json(t, &mut json), rivetlite_status::Ok);
        let json = take_string(json);
        let parsed = rivetlite::transpiler::TranspiledCircuit::from_json(&json).unwrap();
        assert_eq!(parsed.physical.num_qubits(), 3);

        let mut counts = ptr::null_mut();
        assert_eq!(rivetlite_transpiled_sample_counts(t, 2000, 1, &mut counts), rivetlite_status::Ok);
        let counts: serde_json::Value = serde_json::from_str(&take_string(counts)).unwrap();
        assert_eq!(counts["shots"], 2000);
        let map = counts["counts"].as_object().unwrap();
        assert!(map.keys().all(|k| k == "00" || k == "11"), "{map:?}");

        rivetlite_transpiled_free(t);
        rivetlite_topology_free(topo);
        rivetlite_circuit_free(c);
    }
}

#[test]
fn stitched_suffix_keeps_prefix() {
    unsafe {
        let prefix = circuit(r#"{"n": 3, "gates": [{"name": "h", "qubits": [0]}, {"name": "cx", "qubits": [0, 2]}]}"#);
        let suffix =
            circuit(r#"{"n": 3, "gates": [{"name": "rx", "qubits": [1], "params": [0.4]}], "measurements": [[1, 0]]}"#);
        let topo = topology("heavyhex-27");
        let mut left = ptr::null_mut();
        assert_eq!(rivetlite_transpile(prefix, topo, 3, 0, &mut left), rivetlite_status::Ok);
        let mut joined = ptr::null_mut();
        assert_eq!(rivetlite_transpile_right(left, suffix, topo, 3, 0, &mut joined), rivetlite_status::Ok);
        assert!(rivetlite_transpiled_two_qubit_count(joined) >= rivetlite_transpiled_two_qubit_count(left));

        // The suffix measures, so nothing more can be appended.
        let mut again = ptr::null_mut();
        assert_eq!(rivetlite_transpile_right(joined, suffix, topo, 3, 0, &mut again), rivetlite_status::PipelineError);
        assert!(again.is_null());
        assert!(!last_error().is_empty());

        for t in [left, joined] {
            rivetlite_transpiled_free(t);
        }
        rivetlite_topology_free(topo);
        rivetlite_circuit_free(prefix);
        rivetlite_circuit_free(suffix);
    }
}

#[test]
fn errors_are_reported_by_code() {
    unsafe {
        let mut c = ptr::null_mut();
        assert_eq!(rivetlite_circuit_from_json(ptr::null(), &mut c), rivetlite_status::InvalidArgument);
        assert!(last_error().contains("null"));
        assert_eq!(rivetlite_circuit_from_json(cstr("{not json").as_ptr(), &mut c), rivetlite_status::ParseError);
        assert!(c.is_null());
        assert_eq!(rivetlite_circuit_from_json(cstr(BELL).as_ptr(), ptr::null_mut()), rivetlite_status::InvalidArgument);

        let mut t = ptr::null_mut();
        assert_eq!(rivetlite_topology_builtin(cstr("moebius-9").as_ptr(), &mut t), rivetlite_status::ParseError);
        assert!(last_error().contains("moebius-9"));

        let c = circuit(BELL);
        let small = topology("linear-2");
        let mut out = ptr::null_mut();
        assert_eq!(rivetlite_transpile(c, small, 3, 0, &mut out), rivetlite_status::PipelineError);
        assert_eq!(rivetlite_transpile(c, small, 9, 0, &mut out), rivetlite_status::InvalidArgument);
        assert_eq!(rivetlite_transpile(ptr::null(), small, 3, 0, &mut out), rivetlite_status::InvalidArgument);
        assert!(out.is_null());

        let mut counts = ptr::null_mut();
        assert_eq!(
            rivetlite_transpiled_sample_counts(ptr::null(), 10, 0, &mut counts),
            rivetlite_status::InvalidArgument
        );
        rivetlite_topology_free(small);
        rivetlite_circuit_free(c);
    }
}

#[test]
fn null_handles_are_harmless() {
    unsafe {
        rivetlite_circuit_free(ptr::null_mut());
        rivetlite_topology_free(ptr::null_mut());
        rivetlite_transpiled_free(ptr::null_mut());
        rivetlite_string_free(ptr::null_mut());
        assert_eq!(rivetlite_circuit_num_qubits(ptr::null()), 0);
        assert_eq!(rivetlite_transpiled_depth(ptr::null()), 0);
        assert!(rivetlite_transpiled_elapsed_seconds(ptr::null()) < 0.0);
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/rivetlite.h")).unwrap();
    let src = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 14);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    for code in ["RIVETLITE_STATUS_OK = 0", "RIVETLITE_STATUS_PANIC = 4"] {
        assert!(header.contains(code));
    }
}
