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

//! C ABI over the rivetlite transpiler.
//!
//! Objects cross the boundary as opaque handles created by `*_from_json`,
//! `rivetlite_topology_builtin` or the transpile calls and released with the
//! matching `*_free`. Every fallible call returns a [`rivetlite_status`] and
//! writes its result through an out-pointer; on failure the message is
//! available from [`rivetlite_last_error_message`] on the same thread.
//! Strings returned to the caller are released with
//! [`rivetlite_string_free`].

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use libc::{c_char, size_t};

use rivetlite::backend::{resolve_topology, Topology};
use rivetlite::circuit::Circuit;
use rivetlite::sim::Simulator;
use rivetlite::stitch::transpile_right;
use rivetlite::transpiler::{transpile, TranspileOptions, TranspiledCircuit};
use rivetlite::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[allow(non_camel_case_types)]
pub enum rivetlite_status {
    Ok = 0,
    /// Null pointer, bad UTF-8 or out-of-range option.
    InvalidArgument = 1,
    /// Malformed circuit, topology or device name.
    ParseError = 2,
    /// Transpilation or simulation failed.
    PipelineError = 3,
    /// A Rust panic was caught at the boundary.
    Panic = 4,
}

/// Virtual circuit.
#[allow(non_camel_case_types)]
pub struct rivetlite_circuit {
    inner: Circuit,
}

/// Device coupling graph and basis.
#[allow(non_camel_case_types)]
pub struct rivetlite_topology {
    inner: Topology,
}

/// Compiled circuit with its layouts.
#[allow(non_camel_case_types)]
pub struct rivetlite_transpiled {
    inner: TranspiledCircuit,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

struct Failure(rivetlite_status, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = if e.is_input_error() { rivetlite_status::ParseError } else { rivetlite_status::PipelineError };
        Failure(status, e.to_string())
    }
}

fn invalid(msg: &str) -> Failure {
    Failure(rivetlite_status::InvalidArgument, msg.to_owned())
}

/// Run `f`, recording any error or panic for `rivetlite_last_error_message`.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> rivetlite_status {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => rivetlite_status::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_owned());
            set_error(format!("panic: {msg}"));
            rivetlite_status::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(invalid(&format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| invalid(&format!("{what} is not valid UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| invalid(&format!("{what} is null")))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(invalid("out pointer is null"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(invalid("out pointer is null"));
    }
    *out = CString::new(s).map_err(|_| invalid("string contains NUL"))?.into_raw();
    Ok(())
}

fn options(optimization_level: u8, seed: u64) -> Result<TranspileOptions, Failure> {
    let opts = TranspileOptions { optimization_level, seed, ..TranspileOptions::default() };
    opts.validate().map_err(|e| Failure(rivetlite_status::InvalidArgument, e.to_string()))?;
    Ok(opts)
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn rivetlite_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must come from a rivetlite call that returns an owned string, and
/// must not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn rivetlite_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse a circuit from its JSON form.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn rivetlite_circuit_from_json(
    json: *const c_char,
    out: *mut *mut rivetlite_circuit,
) -> rivetlite_status {
    guard(|| {
        let text = str_arg(json, "json")?;
        let inner = Circuit::from_json(text).map_err(Error::from)?;
        put(out, rivetlite_circuit { inner })
    })
}

/// # Safety
/// `c` must be a circuit handle or null.
#[no_mangle]
pub unsafe extern "C" fn rivetlite_circuit_num_qubits(c: *const rivetlite_circuit) -> size_t {
    c.as_ref().map_or(0, |c| c.inner.num_qubits())
}

/// # Safety
/// `c` must be a circuit handle or null, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn rivetlite_circuit_free(c: *mut rivetlite_circuit) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Look up a device by builtin name (`heavyhex-27`, `linear-N`, `ring-N`,
/// `grid-RxC`) or load a topology JSON file.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn rivetlite_topology_builtin(
    name: *const c_char,
    out: *mut *mut rivetlite_topology,
) -> rivetlite_status {
    guard(|| {
        let name = str_arg(name, "name")?;
        let inner = resolve_topology(name).map_err(Error::from)?;
        put(out, rivetlite_topology { inner })
    })
}

/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn rivetlite_topology_from_json(
    json: *const c_char,
    out: *mut *mut rivetlite_topology,
) -> rivetlite_status {
    guard(|| {
        let text = str_arg(json, "json")?;
        let inner = Topology::from_json(text).map_err(Error::from)?;
        put(out, rivetlite_topology { inner })
    })
}

/// # Safety
/// `t` must be a topology handle or null.
#[no_mangle]
pub unsafe extern "C" fn rivetlite_topology_num_physical(t: *const rivetlite_topology) -> size_t {
    t.as_ref().map_or(0, |t| t.inner.num_physical())
}

/// # Safety
/// `t` must be a topology handle or null, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn rivetlite_topology_free(t: *mut rivetlite_topology) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Compile `circuit` for `topology` from scratch.
///
/// # Safety
/// Handles must be valid and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn rivetlite_transpile(
    circuit: *const rivetlite_circuit,
    topology: *const rivetlite_topology,
    optimization_level: u8,
    seed: u64,
    out: *mut *mut rivetlite_transpiled,
) -> rivetlite_status {
    guard(|| {
        let c = ref_arg(circuit, "circuit")?;
        let t = ref_arg(topology, "topology")?;
        let opts = options(optimization_level, seed)?;
        let inner = transpile(&c.inner, &t.inner, &opts).map_err(Error::from)?;
        put(out, rivetlite_transpiled { inner })
    })
}

/// Compile only `suffix` and append it to the already compiled `left`.
///
/// # Safety
/// Handles must be valid and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn rivetlite_transpile_right(
    left: *const rivetlite_transpiled,
    suffix: *const rivetlite_circuit,
    topology: *const rivetlite_topology,
    optimization_level: u8,
    seed: u64,
    out: *mut *mut rivetlite_transpiled,
) -> rivetlite_status {
    guard(|| {
        let left = ref_arg(left, "left")?;
        let suffix = ref_arg(suffix, "suffix")?;
        let t = ref_arg(topology, "topology")?;
        let opts = options(optimization_level, seed)?;
        let inner = transpile_right(&left.inner, &suffix.inner, &t.inner, &opts).map_err(Error::from)?;
        put(out, rivetlite_transpiled { inner })
    })
}

/// Serialize a compiled circuit; release the string with
/// `rivetlite_string_free`.
///
/// # Safety
/// `t` must be a valid handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn rivetlite_transpiled_to_json(
    t: *const rivetlite_transpiled,
    out: *mut *mut c_char,
) -> rivetlite_status {
    guard(|| {
        let t = ref_arg(t, "transpiled")?;
        put_string(out, t.inner.to_json())
    })
}

/// # Safety
/// `t` must be a transpiled handle or null.
#[no_mangle]
pub unsafe extern "C" fn rivetlite_transpiled_depth(t: *const rivetlite_transpiled) -> size_t {
    t.as_ref().map_or(0, |t| t.inner.physical.stats().depth)
}

/// # Safety
/// `t` must be a transpiled handle or null.
#[no_mangle]
pub unsafe extern "C" fn rivetlite_transpiled_two_qubit_count(t: *const rivetlite_transpiled) -> size_t {
    t.as_ref().map_or(0, |t| t.inner.physical.stats().two_qubit_count)
}

/// Wall-clock seconds the compile took, or a negative value for null.
///
/// # Safety
/// `t` must be a transpiled handle or null.
#[no_mangle]
pub unsafe extern "C" fn rivetlite_transpiled_elapsed_seconds(t: *const rivetlite_transpiled) -> f64 {
    t.as_ref().map_or(-1.0, |t| t.inner.elapsed_seconds)
}

/// Sample the compiled circuit's measurements `shots` times and return the
/// counts as JSON (`{"shots": N, "counts": {"01": k, ...}}`).
///
/// # Safety
/// `t` must be a valid handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn rivetlite_transpiled_sample_counts(
    t: *const rivetlite_transpiled,
    shots: u64,
    seed: u64,
    out: *mut *mut c_char,
) -> rivetlite_status {
    guard(|| {
        let t = ref_arg(t, "transpiled")?;
        if shots == 0 {
            return Err(invalid("shots must be positive"));
        }
        let counts = Simulator::default().sample(&t.inner.physical, shots, seed).map_err(Error::from)?;
        put_string(out, serde_json::to_string(&counts).expect("counts serialize"))
    })
}

/// # Safety
/// `t` must be a transpiled handle or null, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn rivetlite_transpiled_free(t: *mut rivetlite_transpiled) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}
