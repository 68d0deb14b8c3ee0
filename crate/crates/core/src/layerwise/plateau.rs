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

//! Gradient-variance estimate for randomly initialized deep ansatzes.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::model::Ansatz;
use super::LayerwiseError;
use crate::sim::StateVector;

/// Widest register the estimate accepts.
pub const PLATEAU_MAX_QUBITS: usize = 10;
/// Fewest parameter draws the estimate accepts.
pub const PLATEAU_MIN_SAMPLES: usize = 50;

/// Sample variance of `d<Z_last>/d theta` for the qubit-0 parameter of the
/// middle layer, over `samples` parameter vectors drawn uniformly from
/// `[0, 2pi)`.
pub fn barren_plateau_variance(n: usize, layers: usize, samples: usize, seed: u64) -> Result<f64, LayerwiseError> {
    if n == 0 || n > PLATEAU_MAX_QUBITS {
        return Err(LayerwiseError::Guard(format!("n = {n} must be in 1..={PLATEAU_MAX_QUBITS}")));
    }
    if layers == 0 {
        return Err(LayerwiseError::Guard("layers must be positive".into()));
    }
    if samples < PLATEAU_MIN_SAMPLES {
        return Err(LayerwiseError::Guard(format!("samples = {samples} is below {PLATEAU_MIN_SAMPLES}")));
    }
    let ansatz = Ansatz::new(n, layers);
    let target = (layers / 2) * n;
    let zero = StateVector::zero(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = vec![0.0; ansatz.num_parameters()];
    let grads: Vec<f64> = (0..samples)
        .map(|_| {
            values.iter_mut().for_each(|v| *v = rng.gen_range(0.0..TAU));
            ansatz.z_gradient(&zero, &mut values, target)
        })
        .collect();
    let mean = grads.iter().sum::<f64>() / samples as f64;
    Ok(grads.iter().map(|g| (g - mean).powi(2)).sum::<f64>() / (samples - 1) as f64)
}
