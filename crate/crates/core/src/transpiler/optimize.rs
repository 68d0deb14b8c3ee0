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

//! Peephole optimization on basis-gate circuits.
//!
//! * level 0: no-op
//! * level 1: merge adjacent `rz`, drop zero rotations, cancel `cx` pairs
//! * level 2: level 1, then resynthesize each numeric single-qubit run
//! * level 3: repeat level 2 until the gate count stops falling

use std::collections::BTreeSet;

use num_complex::Complex64;

use super::synth::{decompose_single_qubit, is_zero_angle, mat_mul, wrap_angle};
use crate::circuit::{Circuit, Gate, GateKind, Param};
use crate::sim::{single_qubit_matrix, Mat2};

const MAX_ROUNDS: usize = 10;

/// Optimize `circuit` at `level` (values above 3 behave like 3).
///
/// Resynthesized runs may use `x` only if the input already does; use
/// [`optimize_in`] to name the device basis explicitly.
pub fn optimize(circuit: &Circuit, level: u8) -> Circuit {
    let mut basis: BTreeSet<GateKind> = [GateKind::RZ, GateKind::SX].into_iter().collect();
    if circuit.gates().iter().any(|g| g.kind() == GateKind::X) {
        basis.insert(GateKind::X);
    }
    optimize_in(circuit, level, &basis)
}

/// [`optimize`] with resynthesis restricted to `basis`.
pub fn optimize_in(circuit: &Circuit, level: u8, basis: &BTreeSet<GateKind>) -> Circuit {
    match level {
        0 => circuit.clone(),
        1 => peephole(circuit),
        2 => resynthesize(&peephole(circuit), basis),
        _ => {
            let mut current = resynthesize(&peephole(circuit), basis);
            for _ in 1..MAX_ROUNDS {
                let next = resynthesize(&peephole(&current), basis);
                if next.len() >= current.len() {
                    break;
                }
                current = next;
            }
            current
        }
    }
}

fn normalized_rz(angle: Param) -> Option<Param> {
    match angle {
        Param::Value(v) if is_zero_angle(v) => None,
        Param::Value(v) => Some(Param::Value(wrap_angle(v))),
        p => Some(p),
    }
}

/// One linear sweep with a stack of surviving gates per wire, so that
/// cancellations cascade (`cx cx cx cx` vanishes entirely).
fn peephole(circuit: &Circuit) -> Circuit {
    let mut out: Vec<Option<Gate>> = Vec::with_capacity(circuit.len());
    let mut wires: Vec<Vec<usize>> = vec![Vec::new(); circuit.num_qubits()];

    for g in circuit.gates() {
        match g.kind() {
            GateKind::RZ => {
                let q = g.qubits()[0];
                let mut angle = g.params()[0].clone();
                if let Some(&top) = wires[q].last() {
                    if let Some(prev) = out[top].as_ref().filter(|p| p.kind() == GateKind::RZ) {
                        angle = prev.params()[0].add(&angle);
                        out[top] = None;
                        wires[q].pop();
                    }
                }
                if let Some(angle) = normalized_rz(angle) {
                    wires[q].push(out.len());
                    out.push(Some(Gate::rz(angle, q)));
                }
            }
            GateKind::CX | GateKind::CZ => {
                let (a, b) = (g.qubits()[0], g.qubits()[1]);
                let shared = match (wires[a].last(), wires[b].last()) {
                    (Some(&i), Some(&j)) if i == j => Some(i),
                    _ => None,
                };
                let cancels = shared.is_some_and(|i| {
                    out[i].as_ref().is_some_and(|p| {
                        p.kind() == g.kind()
                            && (p.qubits() == g.qubits() || (g.kind() == GateKind::CZ && p.qubits()[0] == b))
                    })
                });
                if cancels {
                    out[shared.unwrap()] = None;
                    wires[a].pop();
                    wires[b].pop();
                } else {
                    wires[a].push(out.len());
                    wires[b].push(out.len());
                    out.push(Some(g.clone()));
                }
            }
            _ => {
                for &q in g.qubits() {
                    wires[q].push(out.len());
                }
                out.push(Some(g.clone()));
            }
        }
    }
    Circuit::from_parts_unchecked(
        circuit.num_qubits(),
        out.into_iter().flatten().collect(),
        circuit.measurements().to_vec(),
    )
}

fn run_matrix(run: &[Gate]) -> Mat2 {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    run.iter().fold([[one, zero], [zero, one]], |acc, g| {
        let angles: Vec<f64> = g.params().iter().map(|p| p.value().expect("runs are numeric")).collect();
        mat_mul(&single_qubit_matrix(g.kind(), &angles), &acc)
    })
}

fn flush(run: &mut Vec<Gate>, q: usize, basis: &BTreeSet<GateKind>, out: &mut Vec<Gate>) {
    if run.len() > 1 || run.first().is_some_and(|g| !basis.contains(&g.kind())) {
        let candidate = decompose_single_qubit(&run_matrix(run), q, basis);
        if candidate.len() < run.len() {
            out.extend(candidate);
            run.clear();
            return;
        }
    }
    out.append(run);
}

fn resynthesize(circuit: &Circuit, basis: &BTreeSet<GateKind>) -> Circuit {
    let mut runs: Vec<Vec<Gate>> = vec![Vec::new(); circuit.num_qubits()];
    let mut out = Vec::with_capacity(circuit.len());
    for g in circuit.gates() {
        if g.qubits().len() == 1 && !g.is_parameterized() {
            runs[g.qubits()[0]].push(g.clone());
            continue;
        }
        for &q in g.qubits() {
            flush(&mut runs[q], q, basis, &mut out);
        }
        out.push(g.clone());
    }
    for (q, run) in runs.iter_mut().enumerate() {
        flush(run, q, basis, &mut out);
    }
    Circuit::from_parts_unchecked(circuit.num_qubits(), out, circuit.measurements().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::Topology;
    use crate::circuit::random_circuit;
    use crate::sim::statevector;
    use crate::transpiler::{translate, unroll};

    #[test]
    fn rz_merge_and_cx_cancel() {
        let mut c = Circuit::new(2);
        c.rz(0.25, 0).rz(0.5, 0).cx(0, 1).cx(0, 1);
        let o = optimize(&c, 1);
        assert_eq!(o.len(), 1);
        assert!((o.gates()[0].params()[0].value().unwrap() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn cascading_cancellation() {
        let mut c = Circuit::new(2);
        c.cx(0, 1).rz(0.3, 1).rz(-0.3, 1).cx(0, 1);
        assert!(optimize(&c, 1).is_empty());
    }

    #[test]
    fn reversed_cx_does_not_cancel() {
        let mut c = Circuit::new(2);
        c.cx(0, 1).cx(1, 0);
        assert_eq!(optimize(&c, 3).len(), 2);
    }

    #[test]
    fn symbolic_rz_merges_as_expression() {
        let mut c = Circuit::new(1);
        c.rz("a", 0).rz(0.5, 0);
        let o = optimize(&c, 3);
        assert_eq!(o.len(), 1);
        assert_eq!(o.gates()[0].params()[0].to_string(), "a + 0.5");
    }

    #[test]
    fn double_hadamard_vanishes_at_level_two() {
        let mut c = Circuit::new(1);
        c.h(0).h(0);
        let t = translate(&c, &Topology::default_basis()).unwrap();
        assert_eq!(t.len(), 6);
        assert!(optimize(&t, 2).is_empty());
    }

    #[test]
    fn levels_preserve_state_and_never_grow() {
        let basis = Topology::default_basis();
        for seed in 0..40 {
            let c = translate(&unroll(&random_circuit(3, 8, seed)), &basis).unwrap();
            let want = statevector(&c).unwrap();
            let mut previous = c.len();
            for level in 0..=3 {
                let o = optimize_in(&c, level, &basis);
                assert!(o.len() <= c.len());
                assert!(o.len() <= previous || level == 0, "level {level} grew");
                previous = o.len();
                assert!(o.gates().iter().all(|g| basis.contains(&g.kind())));
                assert!(statevector(&o).unwrap().equal_up_to_phase(&want, 1e-9), "seed {seed} level {level}");
            }
        }
    }
}
