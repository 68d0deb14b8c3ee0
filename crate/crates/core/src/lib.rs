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

//! Incremental transpilation of quantum circuits.
//!
//! A compiled circuit is kept together with the layouts needed to extend it,
//! so appending layers or measurement rotations only compiles the new part.
//!
//! ```
//! use rivetlite::backend::builtin_topology;
//! use rivetlite::circuit::{random_circuit, Circuit};
//! use rivetlite::stitch::transpile_right;
//! use rivetlite::transpiler::{transpile, TranspileOptions};
//!
//! let device = builtin_topology("heavyhex-27").unwrap();
//! let opts = TranspileOptions::default();
//! let prefix = transpile(&random_circuit(4, 8, 1), &device, &opts).unwrap();
//!
//! let mut rotation = Circuit::new(4);
//! rotation.h(0).sdg(1).h(1);
//! let full = transpile_right(&prefix, &rotation.measure_all().unwrap(), &device, &opts).unwrap();
//! full.check_invariants(&device).unwrap();
//! ```

pub mod backend;
pub mod bench;
pub mod circuit;
pub mod encode;
pub mod layerwise;
pub mod pauli;
pub mod sim;
pub mod stitch;
pub mod transpiler;
pub mod verify;

use thiserror::Error;

/// Any error the library can produce.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Circuit(#[from] circuit::CircuitError),
    #[error(transparent)]
    Backend(#[from] backend::BackendError),
    #[error(transparent)]
    Transpile(#[from] transpiler::TranspileError),
    #[error(transparent)]
    Sim(#[from] sim::SimError),
    #[error(transparent)]
    Pauli(#[from] pauli::PauliError),
    #[error(transparent)]
    Encode(#[from] encode::EncodeError),
    #[error(transparent)]
    Layerwise(#[from] layerwise::LayerwiseError),
    #[error(transparent)]
    Bench(#[from] bench::BenchError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl Error {
    /// Whether the error stems from user input (files, flags, configs)
    /// rather than from running the pipeline.
    pub fn is_input_error(&self) -> bool {
        use layerwise::LayerwiseError as L;
        matches!(
            self,
            Error::Circuit(_)
                | Error::Backend(_)
                | Error::Pauli(_)
                | Error::Encode(_)
                | Error::Io { .. }
                | Error::Transpile(transpiler::TranspileError::InvalidOptions(_))
                | Error::Layerwise(L::Config(_) | L::Dataset(_) | L::EmptyDataset | L::NonBinaryLabel(_) | L::Guard(_))
                | Error::Bench(bench::BenchError::Guard(_) | bench::BenchError::Backend(_))
        )
    }
}
