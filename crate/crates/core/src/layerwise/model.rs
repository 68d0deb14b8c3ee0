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

//! Readout, loss, gradients and the optimizer.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use super::LayerwiseError;
use crate::circuit::{Circuit, GateKind, ParameterBinding};
use crate::encode::layer_symbol;
use crate::sim::{SimError, StateVector, MAX_QUBITS};

/// Probabilities are clipped to `[P_CLIP, 1 - P_CLIP]` inside the loss.
pub const P_CLIP: f64 = 1e-7;

/// A single partial derivative `dC/dtheta`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradientEstimate {
    pub param: String,
    pub value: f64,
}

/// Class-1 probability from the last qubit: `(1 - <Z>) / 2`.
pub fn probability_from_z(z: f64) -> f64 {
    (1.0 - z) / 2.0
}

/// `<Z>` on the last qubit of `circuit` run from `initial` (or |0...0>).
pub fn expectation_z_last(
    circuit: &Circuit,
    binding: &ParameterBinding,
    initial: Option<&StateVector>,
) -> Result<f64, LayerwiseError> {
    let mut state = match initial {
        Some(s) => s.clone(),
        None if circuit.num_qubits() > MAX_QUBITS => {
            return Err(SimError::TooWide { width: circuit.num_qubits(), max: MAX_QUBITS }.into());
        }
        None => StateVector::zero(circuit.num_qubits()),
    };
    state.evolve(&circuit.remove_final_measurements(), binding)?;
    Ok(state.expectation_z(circuit.num_qubits() - 1))
}

/// Probability of label 1 for the state `circuit` prepares from |0...0>.
pub fn predict(circuit: &Circuit, binding: &ParameterBinding) -> Result<f64, LayerwiseError> {
    let missing: Vec<String> = circuit.free_symbols().into_iter().filter(|s| !binding.contains(s)).collect();
    if let Some(name) = missing.into_iter().next() {
        return Err(LayerwiseError::UnknownParameter(name));
    }
    Ok(probability_from_z(expectation_z_last(circuit, binding, None)?))
}

/// Shift-rule derivative of `<Z_last>` with respect to `param`, which must
/// be bound and appear as the bare angle of exactly one rotation.
pub fn parameter_shift_gradient(
    circuit: &Circuit,
    binding: &ParameterBinding,
    param: &str,
    sample: Option<&StateVector>,
) -> Result<GradientEstimate, LayerwiseError> {
    let theta = binding.get(param).ok_or_else(|| LayerwiseError::UnknownParameter(param.to_owned()))?;
    let mut bare = 0;
    for g in circuit.gates() {
        for p in g.params() {
            let mut names = Default::default();
            p.collect_symbols(&mut names);
            if names.contains(param) {
                let rotation = matches!(g.kind(), GateKind::RX | GateKind::RY | GateKind::RZ);
                if !rotation || p.as_symbol() != Some(param) {
                    return Err(LayerwiseError::NotSingleRotation(param.to_owned()));
                }
                bare += 1;
            }
        }
    }
    if bare != 1 {
        return Err(LayerwiseError::NotSingleRotation(param.to_owned()));
    }
    let mut shifted = binding.clone();
    shifted.insert(param, theta + FRAC_PI_2);
    let plus = expectation_z_last(circuit, &shifted, sample)?;
    shifted.insert(param, theta - FRAC_PI_2);
    let minus = expectation_z_last(circuit, &shifted, sample)?;
    Ok(GradientEstimate { param: param.to_owned(), value: (plus - minus) / 2.0 })
}

/// Binary cross-entropy of a clipped probability.
pub fn bce(p: f64, label: u8) -> f64 {
    let p = p.clamp(P_CLIP, 1.0 - P_CLIP);
    if label == 1 {
        -p.ln()
    } else {
        -(1.0 - p).ln()
    }
}

/// `d bce / d p` at the clipped probability.
pub fn bce_grad(p: f64, label: u8) -> f64 {
    let p = p.clamp(P_CLIP, 1.0 - P_CLIP);
    (p - f64::from(label)) / (p * (1.0 - p))
}

/// Stacked ry + cx-chain layers evaluated directly on a state, without
/// going through symbol lookups. Parameter `l * n + q` is
/// `theta_{l}_{q}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ansatz {
    pub n_qubits: usize,
    pub layers: usize,
}

impl Ansatz {
    pub fn new(n_qubits: usize, layers: usize) -> Self {
        Self { n_qubits, layers }
    }

    pub fn num_parameters(&self) -> usize {
        self.n_qubits * self.layers
    }

    /// Symbol names in creation order.
    pub fn names(&self) -> Vec<String> {
        (0..self.layers).flat_map(|l| (0..self.n_qubits).map(move |q| layer_symbol(l, q))).collect()
    }

    pub fn binding(&self, values: &[f64]) -> ParameterBinding {
        self.names().into_iter().zip(values.iter().copied()).collect()
    }

    /// Values in creation order; unbound names read as 0.
    pub fn values_from(&self, binding: &ParameterBinding) -> Vec<f64> {
        self.names().iter().map(|n| binding.get(n).unwrap_or(0.0)).collect()
    }

    pub fn apply(&self, state: &mut StateVector, values: &[f64]) {
        debug_assert_eq!(values.len(), self.num_parameters());
        for layer in values.chunks(self.n_qubits) {
            for (q, &theta) in layer.iter().enumerate() {
                state.apply_gate(GateKind::RY, &[q], &[theta]);
            }
            for q in 1..self.n_qubits {
                state.apply_gate(GateKind::CX, &[q - 1, q], &[]);
            }
        }
    }

    /// `<Z_last>` after the ansatz acts on `initial`.
    pub fn z_last(&self, initial: &StateVector, values: &[f64]) -> f64 {
        let mut state = initial.clone();
        self.apply(&mut state, values);
        state.expectation_z(self.n_qubits - 1)
    }

    /// Shift-rule derivative of `<Z_last>` for parameter `index`.
    pub fn z_gradient(&self, initial: &StateVector, values: &mut [f64], index: usize) -> f64 {
        let theta = values[index];
        values[index] = theta + FRAC_PI_2;
        let plus = self.z_last(initial, values);
        values[index] = theta - FRAC_PI_2;
        let minus = self.z_last(initial, values);
        values[index] = theta;
        (plus - minus) / 2.0
    }
}

/// Adam over a fixed set of parameter slots.
#[derive(Clone, Debug)]
pub struct Adam {
    lr: f64,
    beta1: f64,
    beta2: f64,
    eps: f64,
    m: Vec<f64>,
    v: Vec<f64>,
    t: i32,
}

impl Adam {
    pub fn new(len: usize, lr: f64) -> Self {
        Self { lr, beta1: 0.9, beta2: 0.999, eps: 1e-8, m: vec![0.0; len], v: vec![0.0; len], t: 0 }
    }

    /// Update `params[slots[k]]` with `grads[k]`.
    pub fn step(&mut self, params: &mut [f64], slots: &[usize], grads: &[f64]) {
        debug_assert_eq!(slots.len(), grads.len());
        self.t += 1;
        let c1 = 1.0 - self.beta1.powi(self.t);
        let c2 = 1.0 - self.beta2.powi(self.t);
        for (k, (&slot, &g)) in slots.iter().zip(grads).enumerate() {
            self.m[k] = self.beta1 * self.m[k] + (1.0 - self.beta1) * g;
            self.v[k] = self.beta2 * self.v[k] + (1.0 - self.beta2) * g * g;
            let m_hat = self.m[k] / c1;
            let v_hat = self.v[k] / c2;
            params[slot] -= self.lr * m_hat / (v_hat.sqrt() + self.eps);
        }
    }
}
