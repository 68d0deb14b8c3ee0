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

//! Dense-matrix reference used to check the library's simulator, compiler
//! and encoders. Gate matrices are written out by hand and every gate is
//! lifted to the full register before multiplying.

#![allow(dead_code)]

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64 as C;
use rivetlite::circuit::{Circuit, GateKind, ParameterBinding};
use rivetlite::transpiler::TranspiledCircuit;

pub type Matrix = Vec<Vec<C>>;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn identity(dim: usize) -> Matrix {
    (0..dim).map(|i| (0..dim).map(|j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) }).collect()).collect()
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let m = b[0].len();
    let mut out = vec![vec![c(0.0, 0.0); m]; n];
    for i in 0..n {
        for k in 0..b.len() {
            if a[i][k] == c(0.0, 0.0) {
                continue;
            }
            for j in 0..m {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

/// `a ⊗ b` with `a` on the more significant index.
pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (ra, rb) = (a.len(), b.len());
    let mut out = vec![vec![c(0.0, 0.0); ra * rb]; ra * rb];
    for i in 0..ra {
        for j in 0..ra {
            for k in 0..rb {
                for l in 0..rb {
                    out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

/// Matrix of `kind` on its own qubits; for two-qubit gates the first
/// listed qubit is the low bit of the 4x4 index.
pub fn gate_matrix(kind: GateKind, angles: &[f64]) -> Matrix {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    let r = FRAC_1_SQRT_2;
    let e = |phi: f64| C::from_polar(1.0, phi);
    match kind {
        GateKind::H => vec![vec![c(r, 0.0), c(r, 0.0)], vec![c(r, 0.0), c(-r, 0.0)]],
        GateKind::X => vec![vec![z, o], vec![o, z]],
        GateKind::Y => vec![vec![z, -i], vec![i, z]],
        GateKind::Z => vec![vec![o, z], vec![z, -o]],
        GateKind::S => vec![vec![o, z], vec![z, i]],
        GateKind::Sdg => vec![vec![o, z], vec![z, -i]],
        GateKind::SX => vec![vec![c(0.5, 0.5), c(0.5, -0.5)], vec![c(0.5, -0.5), c(0.5, 0.5)]],
        GateKind::RX => {
            let (co, si) = ((angles[0] / 2.0).cos(), (angles[0] / 2.0).sin());
            vec![vec![c(co, 0.0), c(0.0, -si)], vec![c(0.0, -si), c(co, 0.0)]]
        }
        GateKind::RY => {
            let (co, si) = ((angles[0] / 2.0).cos(), (angles[0] / 2.0).sin());
            vec![vec![c(co, 0.0), c(-si, 0.0)], vec![c(si, 0.0), c(co, 0.0)]]
        }
        GateKind::RZ => vec![vec![e(-angles[0] / 2.0), z], vec![z, e(angles[0] / 2.0)]],
        GateKind::U => {
            let (t, p, l) = (angles[0], angles[1], angles[2]);
            let (co, si) = ((t / 2.0).cos(), (t / 2.0).sin());
            vec![vec![c(co, 0.0), -e(l) * si], vec![e(p) * si, e(p + l) * co]]
        }
        // Index bit 0 is the control.
        GateKind::CX => {
            let mut m = vec![vec![z; 4]; 4];
            for (from, to) in [(0, 0), (1, 3), (2, 2), (3, 1)] {
                m[to][from] = o;
            }
            m
        }
        GateKind::CZ => {
            let mut m = identity(4);
            m[3][3] = -o;
            m
        }
        GateKind::Swap => {
            let mut m = vec![vec![z; 4]; 4];
            for (from, to) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
                m[to][from] = o;
            }
            m
        }
    }
}

/// Lift a gate on `qubits` to the full `n`-qubit register.
#[allow(clippy::needless_range_loop)]
pub fn embed(small: &Matrix, qubits: &[usize], n: usize) -> Matrix {
    let dim = 1usize << n;
    let mut out = vec![vec![c(0.0, 0.0); dim]; dim];
    for col in 0..dim {
        let sub_in = qubits.iter().enumerate().fold(0, |acc, (k, &q)| acc | (((col >> q) & 1) << k));
        let rest = qubits.iter().fold(col, |acc, &q| acc & !(1 << q));
        for (sub_out, row) in small.iter().enumerate() {
            let amp = row[sub_in];
            if amp == c(0.0, 0.0) {
                continue;
            }
            let full = qubits.iter().enumerate().fold(rest, |acc, (k, &q)| acc | (((sub_out >> k) & 1) << q));
            out[full][col] += amp;
        }
    }
    out
}

fn angles(circuit_gate: &rivetlite::circuit::Gate, binding: &ParameterBinding) -> Vec<f64> {
    circuit_gate.params().iter().map(|p| p.eval(&binding.lookup()).expect("bound")).collect()
}

/// Unitary of `circuit` (ignoring measurements), optionally relabelling
/// qubits through `relabel` onto an `n`-qubit register.
pub fn unitary_on(circuit: &Circuit, binding: &ParameterBinding, n: usize, relabel: &dyn Fn(usize) -> usize) -> Matrix {
    let mut u = identity(1 << n);
    for g in circuit.gates() {
        let qubits: Vec<usize> = g.qubits().iter().map(|&q| relabel(q)).collect();
        let m = embed(&gate_matrix(g.kind(), &angles(g, binding)), &qubits, n);
        u = matmul(&m, &u);
    }
    u
}

pub fn unitary(circuit: &Circuit) -> Matrix {
    unitary_on(circuit, &ParameterBinding::new(), circuit.num_qubits(), &|q| q)
}

/// First column of the unitary: the state reached from |0...0>.
pub fn state(circuit: &Circuit) -> Vec<C> {
    state_bound(circuit, &ParameterBinding::new())
}

pub fn state_bound(circuit: &Circuit, binding: &ParameterBinding) -> Vec<C> {
    let n = circuit.num_qubits();
    let mut psi = vec![c(0.0, 0.0); 1 << n];
    psi[0] = c(1.0, 0.0);
    for g in circuit.gates() {
        psi = apply(&psi, &gate_matrix(g.kind(), &angles(g, binding)), g.qubits());
    }
    psi
}

/// `small` acting on `qubits` of `psi`, column by column: each basis state
/// is split into the gate's sub-index and the untouched rest.
pub fn apply(psi: &[C], small: &Matrix, qubits: &[usize]) -> Vec<C> {
    let mut out = vec![c(0.0, 0.0); psi.len()];
    for (col, amp) in psi.iter().enumerate() {
        if *amp == c(0.0, 0.0) {
            continue;
        }
        let sub_in = qubits.iter().enumerate().fold(0, |acc, (k, &q)| acc | (((col >> q) & 1) << k));
        let rest = qubits.iter().fold(col, |acc, &q| acc & !(1 << q));
        for (sub_out, row) in small.iter().enumerate() {
            let full = qubits.iter().enumerate().fold(rest, |acc, (k, &q)| acc | (((sub_out >> k) & 1) << q));
            out[full] += row[sub_in] * amp;
        }
    }
    out
}

/// `1 - |<a|b>|` for normalized vectors: zero iff equal up to a global phase.
pub fn phase_distance(a: &[C], b: &[C]) -> f64 {
    let overlap: C = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    (1.0 - overlap.norm()).abs()
}

/// Largest entry of `a - e^{iφ} b`, with φ fixed by the largest entry of `b`.
pub fn matrix_distance_up_to_phase(a: &Matrix, b: &Matrix) -> f64 {
    let (mut bi, mut bj, mut best) = (0, 0, 0.0);
    for (i, row) in b.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if v.norm() > best {
                (bi, bj, best) = (i, j, v.norm());
            }
        }
    }
    let phase = a[bi][bj] / b[bi][bj];
    let phase = phase / phase.norm();
    a.iter().zip(b).flat_map(|(ra, rb)| ra.iter().zip(rb).map(move |(x, y)| (x - phase * y).norm())).fold(0.0, f64::max)
}

/// Compare a compiled circuit with its source using only the oracle: the
/// physical circuit is simulated on the qubits it touches and the source
/// state is placed on the final layout's physical qubits.
pub fn compiled_distance(virtual_circuit: &Circuit, t: &TranspiledCircuit, binding: &ParameterBinding) -> f64 {
    let mut used: Vec<usize> = t.initial_layout.as_slice().to_vec();
    used.extend_from_slice(t.final_layout.as_slice());
    for g in t.physical.gates() {
        used.extend_from_slice(g.qubits());
    }
    used.sort_unstable();
    used.dedup();
    assert!(used.len() <= 20, "oracle register too large: {}", used.len());
    let compact = |p: usize| used.binary_search(&p).unwrap();
    let m = used.len();

    // Start from |0>, apply the physical gates relabelled to compact indices.
    let mut got = vec![c(0.0, 0.0); 1 << m];
    got[0] = c(1.0, 0.0);
    for g in t.physical.gates() {
        let qubits: Vec<usize> = g.qubits().iter().map(|&q| compact(q)).collect();
        got = apply(&got, &gate_matrix(g.kind(), &angles(g, binding)), &qubits);
    }

    let psi = state_bound(virtual_circuit, binding);
    let n = virtual_circuit.num_qubits();
    let mut want = vec![c(0.0, 0.0); 1 << m];
    for (i, amp) in psi.iter().enumerate() {
        let j = (0..n).fold(0, |acc, v| acc | (((i >> v) & 1) << compact(t.final_layout.physical(v))));
        want[j] = *amp;
    }
    phase_distance(&got, &want)
}
