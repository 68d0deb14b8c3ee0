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

//! Layerwise learning of a parameterized classifier.
//!
//! Phase 1 grows the ansatz a few layers at a time and trains only the
//! newest layers; Phase 2 sweeps over contiguous parameter partitions.
//! Expectations are exact (statevector), gradients use the shift rule, and
//! each growth step is compiled both by stitching onto the previous step
//! and from scratch so the two costs can be compared.

mod config;
mod dataset;
mod model;
mod plateau;
mod train;

use thiserror::Error;

use crate::circuit::CircuitError;
use crate::encode::EncodeError;
use crate::sim::SimError;
use crate::transpiler::TranspileError;

pub use config::LLConfig;
pub use dataset::{Dataset, Split};
pub use model::{
    bce, bce_grad, expectation_z_last, parameter_shift_gradient, predict, probability_from_z, Adam, Ansatz,
    GradientEstimate, P_CLIP,
};
pub use plateau::{barren_plateau_variance, PLATEAU_MAX_QUBITS, PLATEAU_MIN_SAMPLES};
pub use train::{
    encoding_prefix, evaluate, growth_transpiles, partition_slots, train_layerwise, train_phase1, train_phase2,
    train_regular, Checkpoint, EncodedSet, Stage, StepTranspile, TrainTrace,
};

#[derive(Debug, Error)]
pub enum LayerwiseError {
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("label {0} is not 0 or 1")]
    NonBinaryLabel(u8),
    #[error("dataset: {0}")]
    Dataset(String),
    #[error("config: {0}")]
    Config(String),
    #[error("unknown parameter {0:?}")]
    UnknownParameter(String),
    #[error("parameter {0:?} is not the bare angle of exactly one rotation")]
    NotSingleRotation(String),
    #[error("{0}")]
    Guard(String),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Transpile(#[from] TranspileError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}
