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

//! Semantic checks between a virtual circuit and its compiled form.
//!
//! Physical circuits live on wide devices, so only the qubits that matter
//! (those touched by gates plus both layout images) are simulated. Qubits
//! outside the final-layout image must end in |0>, which the comparison
//! enforces implicitly.

use num_complex::Complex64;

use crate::circuit::{Circuit, ParameterBinding};
use crate::sim::{SimError, Simulator, StateVector};
use crate::transpiler::TranspiledCircuit;

/// Widest compact register the checks simulate.
pub const VERIFY_MAX_QUBITS: usize = 20;

fn active_set(t: &TranspiledCircuit) -> Vec<usize> {
    let mut active = t.physical.active_qubits();
    active.extend_from_slice(t.initial_layout.as_slice());
    active.extend_from_slice(t.final_layout.as_slice());
    active.sort_unstable();
    active.dedup();
    active
}

/// Final compact state of `t.physical` (measurements ignored) and the
/// physical qubit behind each of its positions.
pub fn physical_state(t: &TranspiledCircuit) -> Result<(StateVector, Vec<usize>), SimError> {
    let active = active_set(t);
    let body = t.physical.remove_final_measurements();
    let state = Simulator::with_max_qubits(VERIFY_MAX_QUBITS).compact_statevector(&body, &active)?;
    Ok((state, active))
}

/// The virtual state embedded at final-layout positions of the compact
/// register described by `active`.
pub fn expected_state(
    virtual_circuit: &Circuit,
    t: &TranspiledCircuit,
    active: &[usize],
) -> Result<StateVector, SimError> {
    let body = virtual_circuit.remove_final_measurements();
    let virt = Simulator::default().statevector(&body, &ParameterBinding::new())?;
    let positions: Vec<usize> = t
        .final_layout
        .as_slice()
        .iter()
        .map(|p| active.binary_search(p).map_err(|_| SimError::InvalidLayout))
        .collect::<Result<_, _>>()?;
    if positions.len() != virt.num_qubits() {
        return Err(SimError::InvalidLayout);
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << active.len()];
    for (i, &a) in virt.amplitudes().iter().enumerate() {
        let j = positions.iter().enumerate().fold(0usize, |acc, (q, &pos)| acc | (((i >> q) & 1) << pos));
        amps[j] = a;
    }
    StateVector::from_amplitudes(amps).ok_or(SimError::InvalidLayout)
}

/// Largest amplitude error between the compiled and the virtual state after
/// undoing the final layout and aligning global phase.
pub fn semantic_distance(virtual_circuit: &Circuit, t: &TranspiledCircuit) -> Result<f64, SimError> {
    let (got, active) = physical_state(t)?;
    let want = expected_state(virtual_circuit, t, &active)?;
    Ok(got.distance_up_to_phase(&want))
}

pub fn equivalent(virtual_circuit: &Circuit, t: &TranspiledCircuit, tol: f64) -> Result<bool, SimError> {
    Ok(semantic_distance(virtual_circuit, t)? <= tol)
}
