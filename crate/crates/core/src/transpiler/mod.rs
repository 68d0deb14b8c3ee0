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

//! The compilation pipeline: unroll, layout, routing, basis translation and
//! peephole optimization.
//!
//! ```text
//! virtual circuit
//!   -> unroll          swap/cz expanded into cx-based forms
//!   -> choose_layout   virtual -> physical placement
//!   -> route           SWAP insertion for the coupling graph
//!   -> translate       rewrite into the device basis
//!   -> optimize        rz merging, cx cancellation, 1q resynthesis
//! ```
//!
//! Every stage is a pure function; [`transpile`] chains them and records
//! wall-clock time per stage.

mod layout;
mod optimize;
mod routing;
mod synth;
mod translate;
mod unroll;

use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::backend::Topology;
use crate::circuit::{Circuit, CircuitError, GateKind};

pub use layout::{choose_layout, LAYOUT_NOISE_WEIGHT};
pub use optimize::{optimize, optimize_in};
pub use routing::{route, route_gates, Routed};
pub use synth::{decompose_single_qubit, wrap_angle};
pub use translate::translate;
pub use unroll::unroll;

#[derive(Debug, Error)]
pub enum TranspileError {
    #[error("circuit has {circuit} qubits but the device only has {device}")]
    WiderThanDevice { circuit: usize, device: usize },
    #[error("invalid transpile options: {0}")]
    InvalidOptions(String),
    #[error("gate {0} cannot be expressed in the target basis")]
    NonTranslatable(GateKind),
    #[error("invalid layout: {0}")]
    InvalidLayout(String),
    #[error("the left circuit still carries measurements; remove them before stitching")]
    LeftHasMeasurements,
    #[error("suffix acts on {suffix} qubits but the prefix layout covers {prefix}")]
    WidthMismatch { suffix: usize, prefix: usize },
    #[error("routing exceeded its swap budget of {0}")]
    RoutingDiverged(usize),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

/// Injective map from virtual qubits to physical qubits of a device.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Layout {
    v2p: Vec<usize>,
    num_physical: usize,
}

impl Layout {
    pub fn new(v2p: Vec<usize>, num_physical: usize) -> Result<Self, TranspileError> {
        let layout = Self { v2p, num_physical };
        if layout.is_valid() {
            Ok(layout)
        } else {
            Err(TranspileError::InvalidLayout(format!("{:?} on {num_physical} physical qubits", layout.v2p)))
        }
    }

    /// Virtual `q` on physical `q`.
    pub fn trivial(num_virtual: usize, num_physical: usize) -> Self {
        assert!(num_virtual <= num_physical);
        Self { v2p: (0..num_virtual).collect(), num_physical }
    }

    pub fn is_valid(&self) -> bool {
        let mut seen = vec![false; self.num_physical];
        self.v2p.iter().all(|&p| p < self.num_physical && !std::mem::replace(&mut seen[p], true))
    }

    pub fn len(&self) -> usize {
        self.v2p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v2p.is_empty()
    }

    pub fn num_physical(&self) -> usize {
        self.num_physical
    }

    #[inline]
    pub fn physical(&self, virtual_qubit: usize) -> usize {
        self.v2p[virtual_qubit]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.v2p
    }

    /// Physical -> virtual lookup table.
    pub fn p2v(&self) -> Vec<Option<usize>> {
        let mut out = vec![None; self.num_physical];
        for (v, &p) in self.v2p.iter().enumerate() {
            out[p] = Some(v);
        }
        out
    }

    /// The inverse permutation; only defined when the layout is a bijection.
    pub fn inverse(&self) -> Option<Layout> {
        if self.v2p.len() != self.num_physical {
            return None;
        }
        let v2p = self.p2v().into_iter().collect::<Option<Vec<_>>>()?;
        Some(Layout { v2p, num_physical: self.num_physical })
    }

    pub(crate) fn swap_physical(&mut self, a: usize, b: usize, p2v: &mut [Option<usize>]) {
        let (va, vb) = (p2v[a], p2v[b]);
        if let Some(v) = va {
            self.v2p[v] = b;
        }
        if let Some(v) = vb {
            self.v2p[v] = a;
        }
        p2v.swap(a, b);
    }
}

/// Pipeline knobs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TranspileOptions {
    pub optimization_level: u8,
    pub seed: u64,
    pub lookahead_window: usize,
    pub lookahead_weight: f64,
}

impl Default for TranspileOptions {
    fn default() -> Self {
        Self { optimization_level: 3, seed: 42, lookahead_window: 20, lookahead_weight: 0.5 }
    }
}

impl TranspileOptions {
    pub fn with_level(level: u8) -> Self {
        Self { optimization_level: level, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), TranspileError> {
        if self.optimization_level > 3 {
            return Err(TranspileError::InvalidOptions(format!(
                "optimization_level {} not in 0..=3",
                self.optimization_level
            )));
        }
        if !(self.lookahead_weight >= 0.0 && self.lookahead_weight.is_finite()) {
            return Err(TranspileError::InvalidOptions(format!(
                "lookahead_weight {} must be finite and non-negative",
                self.lookahead_weight
            )));
        }
        Ok(())
    }

    /// Stable text identifying these options, used in cache keys.
    pub fn fingerprint(&self) -> String {
        format!("o{}-s{}-w{}-l{:?}", self.optimization_level, self.seed, self.lookahead_window, self.lookahead_weight)
    }
}

/// Seconds spent in each stage of one transpile call.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StageTimes {
    pub layout: f64,
    pub routing: f64,
    pub translation: f64,
    pub optimization: f64,
}

impl StageTimes {
    pub fn total(&self) -> f64 {
        self.layout + self.routing + self.translation + self.optimization
    }
}

/// A physical-basis circuit together with the layouts needed to reuse it.
#[derive(Clone, Debug, PartialEq)]
pub struct TranspiledCircuit {
    pub physical: Circuit,
    pub initial_layout: Layout,
    pub final_layout: Layout,
    pub source_hash: String,
    pub elapsed_seconds: f64,
    pub stage_seconds: StageTimes,
    pub swaps_inserted: usize,
}

/// Hex SHA-256 of a circuit's canonical JSON.
pub fn circuit_hash(c: &Circuit) -> String {
    hex::encode(Sha256::digest(c.to_json().as_bytes()))
}

pub(crate) fn remap_measurements(
    virtual_measurements: &[(usize, usize)],
    layout: &Layout,
    physical: &mut Circuit,
) -> Result<(), CircuitError> {
    for &(q, c) in virtual_measurements {
        physical.measure(layout.physical(q), c)?;
    }
    Ok(())
}

/// Full pipeline with layout search.
pub fn transpile(
    circuit: &Circuit,
    topology: &Topology,
    opts: &TranspileOptions,
) -> Result<TranspiledCircuit, TranspileError> {
    opts.validate()?;
    if circuit.num_qubits() > topology.num_physical() {
        return Err(TranspileError::WiderThanDevice { circuit: circuit.num_qubits(), device: topology.num_physical() });
    }
    let start = Instant::now();
    let mut times = StageTimes::default();

    let body = unroll(&circuit.remove_final_measurements());
    let layout = choose_layout(&body, topology, opts)?;
    times.layout = start.elapsed().as_secs_f64();

    let mut out = run_backend_stages(&body, layout, topology, opts, &mut times)?;
    remap_measurements(circuit.measurements(), &out.final_layout, &mut out.physical)?;
    out.source_hash = circuit_hash(circuit);
    out.elapsed_seconds = start.elapsed().as_secs_f64();
    out.stage_seconds = times;
    Ok(out)
}

/// Route, translate and optimize an unrolled, measurement-free circuit from
/// a fixed initial layout.
pub(crate) fn run_backend_stages(
    body: &Circuit,
    layout: Layout,
    topology: &Topology,
    opts: &TranspileOptions,
    times: &mut StageTimes,
) -> Result<TranspiledCircuit, TranspileError> {
    let t = Instant::now();
    let routed = route_gates(body, &layout, topology, opts)?;
    times.routing = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let translated = translate(&routed.circuit, topology.basis())?;
    times.translation = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let physical = optimize_in(&translated, opts.optimization_level, topology.basis());
    times.optimization = t.elapsed().as_secs_f64();

    Ok(TranspiledCircuit {
        physical,
        initial_layout: layout,
        final_layout: routed.final_layout,
        source_hash: String::new(),
        elapsed_seconds: 0.0,
        stage_seconds: *times,
        swaps_inserted: routed.swaps,
    })
}

/// A broken guarantee found by [`TranspiledCircuit::check_invariants`].
#[derive(Debug, Error, PartialEq)]
pub enum InvariantViolation {
    #[error("gate {0} is not in the device basis")]
    NotInBasis(String),
    #[error("two-qubit gate on uncoupled pair ({0}, {1})")]
    Uncoupled(usize, usize),
    #[error("physical circuit has {got} qubits, device has {want}")]
    Width { got: usize, want: usize },
    #[error("layout is not a valid injection into the device")]
    BadLayout,
    #[error("initial and final layouts cover different virtual registers")]
    LayoutDomains,
    #[error("measurement of physical qubit {0} does not read a virtual qubit's final position")]
    Measurement(usize),
}

impl TranspiledCircuit {
    pub fn num_virtual(&self) -> usize {
        self.initial_layout.len()
    }

    /// Hardware validity: basis, coupling, layouts, measurement placement.
    pub fn check_invariants(&self, topology: &Topology) -> Result<(), InvariantViolation> {
        if self.physical.num_qubits() != topology.num_physical() {
            return Err(InvariantViolation::Width { got: self.physical.num_qubits(), want: topology.num_physical() });
        }
        for g in self.physical.gates() {
            if !topology.supports(g.kind()) {
                return Err(InvariantViolation::NotInBasis(g.to_string()));
            }
            if let [a, b] = *g.qubits() {
                if !topology.is_coupled(a, b) {
                    return Err(InvariantViolation::Uncoupled(a, b));
                }
            }
        }
        for layout in [&self.initial_layout, &self.final_layout] {
            if !layout.is_valid() || layout.num_physical() != topology.num_physical() {
                return Err(InvariantViolation::BadLayout);
            }
        }
        if self.initial_layout.len() != self.final_layout.len() {
            return Err(InvariantViolation::LayoutDomains);
        }
        for &(p, _) in self.physical.measurements() {
            if !self.final_layout.as_slice().contains(&p) {
                return Err(InvariantViolation::Measurement(p));
            }
        }
        Ok(())
    }

    /// Substitute `binding` into the physical circuit's symbolic angles.
    pub fn bind(&self, binding: &crate::circuit::ParameterBinding) -> Result<TranspiledCircuit, CircuitError> {
        Ok(TranspiledCircuit { physical: self.physical.bind(binding)?, ..self.clone() })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&TranspiledRepr::from(self)).expect("transpiled JSON is always serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, CircuitError> {
        let repr: TranspiledRepr = serde_json::from_str(text).map_err(|e| CircuitError::Parse(e.to_string()))?;
        let n = repr.circuit.num_qubits();
        let layout = |v: Vec<usize>| Layout::new(v, n).map_err(|e| CircuitError::Parse(e.to_string()));
        Ok(TranspiledCircuit {
            initial_layout: layout(repr.initial_layout)?,
            final_layout: layout(repr.final_layout)?,
            physical: repr.circuit,
            source_hash: repr.source_hash,
            elapsed_seconds: repr.elapsed_seconds,
            stage_seconds: repr.stage_seconds,
            swaps_inserted: repr.swaps_inserted,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct TranspiledRepr {
    #[serde(flatten)]
    circuit: Circuit,
    initial_layout: Vec<usize>,
    final_layout: Vec<usize>,
    #[serde(default)]
    source_hash: String,
    #[serde(default)]
    swaps_inserted: usize,
    elapsed_seconds: f64,
    #[serde(default)]
    stage_seconds: StageTimes,
}

impl From<&TranspiledCircuit> for TranspiledRepr {
    fn from(t: &TranspiledCircuit) -> Self {
        TranspiledRepr {
            circuit: t.physical.clone(),
            initial_layout: t.initial_layout.as_slice().to_vec(),
            final_layout: t.final_layout.as_slice().to_vec(),
            source_hash: t.source_hash.clone(),
            swaps_inserted: t.swaps_inserted,
            elapsed_seconds: t.elapsed_seconds,
            stage_seconds: t.stage_seconds,
        }
    }
}
