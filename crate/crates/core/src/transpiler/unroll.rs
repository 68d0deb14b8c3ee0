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

use crate::circuit::{Circuit, Gate, GateKind};

/// Expand `swap` into three `cx` and `cz` into `h; cx; h`. Everything else
/// is already a vocabulary 1q/2q gate and passes through.
pub fn unroll(circuit: &Circuit) -> Circuit {
    let mut gates = Vec::with_capacity(circuit.len());
    for g in circuit.gates() {
        match (g.kind(), g.qubits()) {
            (GateKind::Swap, &[a, b]) => {
                gates.extend([Gate::cx(a, b), Gate::cx(b, a), Gate::cx(a, b)]);
            }
            (GateKind::CZ, &[a, b]) => {
                gates.extend([Gate::one(GateKind::H, b), Gate::cx(a, b), Gate::one(GateKind::H, b)]);
            }
            _ => gates.push(g.clone()),
        }
    }
    Circuit::from_parts_unchecked(circuit.num_qubits(), gates, circuit.measurements().to_vec())
}
