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

//! Phase 1 (layer growth), Phase 2 (partition sweeps) and the all-at-once
//! baseline.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::model::{bce, bce_grad, probability_from_z, Adam, Ansatz};
use super::{Dataset, LLConfig, LayerwiseError, Split};
#[cfg(test)]
use crate::backend::builtin_topology;
use crate::backend::{resolve_topology, Topology};
use crate::circuit::{Circuit, ParameterBinding};
use crate::encode::{angle_encode_symbolic, pqc_layers, zz_feature_map, Encoding};
use crate::sim::{Simulator, StateVector};
use crate::stitch::transpile_right;
use crate::transpiler::{transpile, TranspileOptions, TranspiledCircuit};

/// Which schedule produced a checkpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Growth,
    Sweep,
    Regular,
}

/// State after one block of training.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub stage: Stage,
    /// Growth step, or partition index within a sweep.
    pub index: usize,
    pub sweep: usize,
    pub trained_parameters: usize,
    pub train_loss_before: f64,
    pub train_loss_after: f64,
    pub test_loss: f64,
    pub test_accuracy: f64,
}

/// Everything recorded while training.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainTrace {
    /// Mean training loss after every epoch, in order.
    pub epoch_losses: Vec<f64>,
    pub checkpoints: Vec<Checkpoint>,
    /// Per growth step: seconds to append the new layers to the compiled prefix.
    pub stitched_seconds: Vec<f64>,
    /// Per growth step: seconds to compile the whole circuit from scratch.
    pub monolithic_seconds: Vec<f64>,
}

impl TrainTrace {
    pub fn accuracies(&self) -> Vec<f64> {
        self.checkpoints.iter().map(|c| c.test_accuracy).collect()
    }

    pub fn final_accuracy(&self) -> Option<f64> {
        self.checkpoints.last().map(|c| c.test_accuracy)
    }

    pub fn extend(&mut self, other: TrainTrace) {
        self.epoch_losses.extend(other.epoch_losses);
        self.checkpoints.extend(other.checkpoints);
        self.stitched_seconds.extend(other.stitched_seconds);
        self.monolithic_seconds.extend(other.monolithic_seconds);
    }
}

/// Samples turned into encoded states once, up front.
#[derive(Clone, Debug)]
pub struct EncodedSet {
    pub states: Vec<StateVector>,
    pub labels: Vec<u8>,
}

impl EncodedSet {
    pub fn new(encoding: Encoding, n_qubits: usize, data: &Dataset) -> Result<Self, LayerwiseError> {
        data.validate()?;
        let needed = encoding.qubits_for(data.num_features());
        if needed != n_qubits {
            return Err(LayerwiseError::Config(format!(
                "{encoding} encoding of {} features needs {needed} qubits, config has {n_qubits}",
                data.num_features()
            )));
        }
        let sim = Simulator::default();
        let states = data
            .features
            .iter()
            .map(|f| Ok(sim.statevector(&encoding.encode(f)?, &ParameterBinding::new())?))
            .collect::<Result<_, LayerwiseError>>()?;
        Ok(Self { states, labels: data.labels.clone() })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Mean loss and accuracy of `values` on this set.
    pub fn evaluate(&self, ansatz: &Ansatz, values: &[f64]) -> (f64, f64) {
        let mut loss = 0.0;
        let mut correct = 0usize;
        for (state, &y) in self.states.iter().zip(&self.labels) {
            let p = probability_from_z(ansatz.z_last(state, values));
            loss += bce(p, y);
            correct += usize::from(u8::from(p >= 0.5) == y);
        }
        let n = self.len() as f64;
        (loss / n, correct as f64 / n)
    }
}

struct Trainer<'a> {
    cfg: &'a LLConfig,
    train: EncodedSet,
    test: EncodedSet,
    rng: ChaCha8Rng,
}

impl<'a> Trainer<'a> {
    fn new(cfg: &'a LLConfig, split: &Split, stream: u64) -> Result<Self, LayerwiseError> {
        cfg.validate()?;
        let train = EncodedSet::new(cfg.encoding, cfg.n_qubits, &split.train)?;
        let test = EncodedSet::new(cfg.encoding, cfg.n_qubits, &split.test)?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(stream);
        Ok(Self { cfg, train, test, rng })
    }

    /// Train `values[slots]` for `epochs` epochs with everything else frozen.
    fn fit(
        &mut self,
        ansatz: &Ansatz,
        values: &mut [f64],
        slots: &[usize],
        epochs: usize,
        trace: &mut TrainTrace,
    ) -> (f64, f64) {
        let before = self.train.evaluate(ansatz, values).0;
        let mut opt = Adam::new(slots.len(), self.cfg.learning_rate);
        let mut order: Vec<usize> = (0..self.train.len()).collect();
        let mut grads = vec![0.0; slots.len()];
        let mut after = before;
        for _ in 0..epochs {
            order.shuffle(&mut self.rng);
            for batch in order.chunks(self.cfg.batch_size) {
                grads.iter_mut().for_each(|g| *g = 0.0);
                for &i in batch {
                    let state = &self.train.states[i];
                    let y = self.train.labels[i];
                    let p = probability_from_z(ansatz.z_last(state, values));
                    // dp/dz = -1/2
                    let scale = -0.5 * bce_grad(p, y);
                    for (g, &slot) in grads.iter_mut().zip(slots) {
                        *g += scale * ansatz.z_gradient(state, values, slot);
                    }
                }
                let inv = 1.0 / batch.len() as f64;
                grads.iter_mut().for_each(|g| *g *= inv);
                opt.step(values, slots, &grads);
            }
            after = self.train.evaluate(ansatz, values).0;
            trace.epoch_losses.push(after);
        }
        (before, after)
    }

    #[allow(clippy::too_many_arguments)]
    fn checkpoint(
        &self,
        ansatz: &Ansatz,
        values: &[f64],
        stage: Stage,
        index: usize,
        sweep: usize,
        slots: usize,
        losses: (f64, f64),
    ) -> Checkpoint {
        let (test_loss, test_accuracy) = self.test.evaluate(ansatz, values);
        Checkpoint {
            stage,
            index,
            sweep,
            trained_parameters: slots,
            train_loss_before: losses.0,
            train_loss_after: losses.1,
            test_loss,
            test_accuracy,
        }
    }
}

/// Virtual circuit that precedes the trainable layers when compiling: the
/// symbolic feature map, or the first training sample for amplitude
/// encoding (whose circuit depends on the data values).
pub fn encoding_prefix(cfg: &LLConfig, train: &Dataset) -> Result<Circuit, LayerwiseError> {
    Ok(match cfg.encoding {
        Encoding::Angle => angle_encode_symbolic(cfg.n_qubits)?,
        Encoding::Zz => zz_feature_map(cfg.n_qubits, 1)?,
        Encoding::Amplitude => {
            let first = train.features.first().ok_or(LayerwiseError::EmptyDataset)?;
            Encoding::Amplitude.encode(first)?
        }
    })
}

/// Compiled circuits of one growth step, both ways.
#[derive(Clone, Debug)]
pub struct StepTranspile {
    pub virtual_circuit: Circuit,
    pub stitched: TranspiledCircuit,
    pub monolithic: TranspiledCircuit,
    /// Suffix time, plus the prefix compile on the first step.
    pub stitched_seconds: f64,
    pub monolithic_seconds: f64,
}

/// Compile `steps` growth steps of `layers_per_step` layers each on top of
/// `prefix`, once by appending to the previous result and once from scratch.
pub fn growth_transpiles(
    prefix: &Circuit,
    steps: usize,
    layers_per_step: usize,
    topology: &Topology,
    opts: &TranspileOptions,
) -> Result<Vec<StepTranspile>, LayerwiseError> {
    let n = prefix.num_qubits();
    let compiled_prefix = transpile(prefix, topology, opts)?;
    let mut running = compiled_prefix.clone();
    let mut virtual_circuit = prefix.clone();
    let mut out = Vec::with_capacity(steps);
    for step in 0..steps {
        let suffix = pqc_layers(n, step * layers_per_step, layers_per_step);
        virtual_circuit = virtual_circuit.compose(&suffix)?;
        let stitched = transpile_right(&running, &suffix, topology, opts)?;
        let monolithic = transpile(&virtual_circuit, topology, opts)?;
        let mut stitched_seconds = stitched.elapsed_seconds;
        if step == 0 {
            stitched_seconds += compiled_prefix.elapsed_seconds;
        }
        out.push(StepTranspile {
            virtual_circuit: virtual_circuit.clone(),
            stitched: stitched.clone(),
            monolithic_seconds: monolithic.elapsed_seconds,
            monolithic,
            stitched_seconds,
        });
        running = stitched;
    }
    Ok(out)
}

/// Phase 1: grow the ansatz `layers_per_step` layers at a time, training only
/// the newest layers each step. New parameters start at 0.
pub fn train_phase1(cfg: &LLConfig, split: &Split) -> Result<(ParameterBinding, TrainTrace), LayerwiseError> {
    let mut trainer = Trainer::new(cfg, split, 1)?;
    let mut trace = TrainTrace::default();
    if cfg.record_transpile {
        let topology = resolve_topology(&cfg.topology).map_err(|e| LayerwiseError::Config(e.to_string()))?;
        let prefix = encoding_prefix(cfg, &split.train)?;
        let steps =
            growth_transpiles(&prefix, cfg.num_steps, cfg.layers_per_step, &topology, &TranspileOptions::default())?;
        for step in steps {
            trace.stitched_seconds.push(step.stitched_seconds);
            trace.monolithic_seconds.push(step.monolithic_seconds);
        }
    }
    let mut values: Vec<f64> = Vec::new();
    for step in 0..cfg.num_steps {
        let ansatz = Ansatz::new(cfg.n_qubits, (step + 1) * cfg.layers_per_step);
        let first = values.len();
        values.resize(ansatz.num_parameters(), 0.0);
        let slots: Vec<usize> = (first..values.len()).collect();
        let losses = trainer.fit(&ansatz, &mut values, &slots, cfg.epochs_per_step, &mut trace);
        trace.checkpoints.push(trainer.checkpoint(&ansatz, &values, Stage::Growth, step, 0, slots.len(), losses));
    }
    let ansatz = Ansatz::new(cfg.n_qubits, cfg.total_layers());
    Ok((ansatz.binding(&values), trace))
}

/// Contiguous blocks of `0..total` in creation order, sizes differing by at
/// most one.
pub fn partition_slots(total: usize, partitions: usize) -> Vec<Vec<usize>> {
    (0..partitions).map(|b| (b * total / partitions..(b + 1) * total / partitions).collect()).collect()
}

/// Phase 2: sweep over parameter partitions, training one block at a time.
pub fn train_phase2(
    cfg: &LLConfig,
    params: &ParameterBinding,
    split: &Split,
) -> Result<(ParameterBinding, TrainTrace), LayerwiseError> {
    let mut trainer = Trainer::new(cfg, split, 2)?;
    let ansatz = Ansatz::new(cfg.n_qubits, cfg.total_layers());
    for name in ansatz.names() {
        if !params.contains(&name) {
            return Err(LayerwiseError::UnknownParameter(name));
        }
    }
    let mut values = ansatz.values_from(params);
    let mut trace = TrainTrace::default();
    let blocks = partition_slots(values.len(), cfg.partitions);
    for sweep in 0..cfg.sweeps {
        for (index, slots) in blocks.iter().enumerate() {
            let losses = trainer.fit(&ansatz, &mut values, slots, cfg.epochs_per_partition, &mut trace);
            trace.checkpoints.push(trainer.checkpoint(
                &ansatz,
                &values,
                Stage::Sweep,
                index,
                sweep,
                slots.len(),
                losses,
            ));
        }
    }
    Ok((ansatz.binding(&values), trace))
}

/// Phase 1 followed by Phase 2, with one merged trace.
pub fn train_layerwise(cfg: &LLConfig, split: &Split) -> Result<(ParameterBinding, TrainTrace), LayerwiseError> {
    let (params, mut trace) = train_phase1(cfg, split)?;
    let (params, phase2) = train_phase2(cfg, &params, split)?;
    trace.extend(phase2);
    Ok((params, trace))
}

/// Baseline: all `total_layers` layers trained jointly from zero for
/// `regular_epochs` epochs.
pub fn train_regular(cfg: &LLConfig, split: &Split) -> Result<(ParameterBinding, TrainTrace), LayerwiseError> {
    let mut trainer = Trainer::new(cfg, split, 3)?;
    let ansatz = Ansatz::new(cfg.n_qubits, cfg.total_layers());
    let mut values = vec![0.0; ansatz.num_parameters()];
    let slots: Vec<usize> = (0..values.len()).collect();
    let mut trace = TrainTrace::default();
    let losses = trainer.fit(&ansatz, &mut values, &slots, cfg.regular_epochs, &mut trace);
    trace.checkpoints.push(trainer.checkpoint(&ansatz, &values, Stage::Regular, 0, 0, slots.len(), losses));
    Ok((ansatz.binding(&values), trace))
}

/// Test loss and accuracy of trained `params`.
pub fn evaluate(cfg: &LLConfig, params: &ParameterBinding, data: &Dataset) -> Result<(f64, f64), LayerwiseError> {
    let ansatz = Ansatz::new(cfg.n_qubits, cfg.total_layers());
    let set = EncodedSet::new(cfg.encoding, cfg.n_qubits, data)?;
    Ok(set.evaluate(&ansatz, &ansatz.values_from(params)))
}
