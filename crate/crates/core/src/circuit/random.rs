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

use std::f64::consts::TAU;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Circuit, Gate, GateKind, Param};

const ONE_QUBIT: [GateKind; 11] = [
    GateKind::H,
    GateKind::X,
    GateKind::Y,
    GateKind::Z,
    GateKind::S,
    GateKind::Sdg,
    GateKind::SX,
    GateKind::RX,
    GateKind::RY,
    GateKind::RZ,
    GateKind::U,
];
const TWO_QUBIT: [GateKind; 3] = [GateKind::CX, GateKind::CZ, GateKind::Swap];

/// Seeded random circuit of exactly `depth` layers.
///
/// Every layer shuffles the register and fills it completely with a mix of
/// one- and two-qubit gates, so the circuit depth equals `depth` whenever
/// `depth >= 1`. The ChaCha stream makes the output identical across
/// platforms for a given seed.
pub fn random_circuit(num_qubits: usize, depth: usize, seed: u64) -> Circuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut circuit = Circuit::new(num_qubits);
    let mut order: Vec<usize> = (0..num_qubits).collect();
    for _ in 0..depth {
        order.shuffle(&mut rng);
        let mut rest = order.as_slice();
        while !rest.is_empty() {
            let gate = if rest.len() >= 2 && rng.gen_bool(0.5) {
                let kind = TWO_QUBIT[rng.gen_range(0..TWO_QUBIT.len())];
                let g = Gate::raw(kind, &rest[..2], &[]);
                rest = &rest[2..];
                g
            } else {
                let kind = ONE_QUBIT[rng.gen_range(0..ONE_QUBIT.len())];
                let params: Vec<Param> =
                    (0..kind.num_params()).map(|_| Param::Value(rng.gen_range(0.0..TAU))).collect();
                let g = Gate::raw(kind, &rest[..1], &params);
                rest = &rest[1..];
                g
            };
            circuit.gates.push(gate);
        }
    }
    circuit
}
