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

//! Ideal dense statevector simulation.
//!
//! Qubit 0 is the least-significant bit of a basis-state index, and count
//! keys print classical bit 0 as the rightmost character.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, Gate, GateKind, ParameterBinding};
use crate::pauli::PauliString;
use crate::transpiler::Layout;

/// Widest register the default simulator accepts.
pub const MAX_QUBITS: usize = 14;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("{width} qubits exceeds the simulator limit of {max}")]
    TooWide { width: usize, max: usize },
    #[error("circuit has measurements; strip them before computing a statevector")]
    HasMeasurements,
    #[error("circuit has no measurements to sample")]
    NoMeasurements,
    #[error("Pauli string of length {pauli} does not match {qubits} qubits")]
    WidthMismatch { pauli: usize, qubits: usize },
    #[error("layout is not injective over the state width")]
    InvalidLayout,
    #[error("counts distribution is empty")]
    EmptyCounts,
    #[error("counts keys have mixed lengths")]
    RaggedKeys,
    #[error("counts key {0:?} is not a bitstring")]
    BadKey(String),
    #[error("shots ({shots}) do not match the sum of counts ({sum})")]
    ShotMismatch { shots: u64, sum: u64 },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

pub type Mat2 = [[Complex64; 2]; 2];

const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// 2x2 unitary of a single-qubit gate with numeric angles.
pub fn single_qubit_matrix(kind: GateKind, angles: &[f64]) -> Mat2 {
    let zero = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    match kind {
        GateKind::H => {
            [[c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)], [c(FRAC_1_SQRT_2, 0.0), c(-FRAC_1_SQRT_2, 0.0)]]
        }
        GateKind::X => [[zero, one], [one, zero]],
        GateKind::Y => [[zero, c(0.0, -1.0)], [c(0.0, 1.0), zero]],
        GateKind::Z => [[one, zero], [zero, c(-1.0, 0.0)]],
        GateKind::S => [[one, zero], [zero, c(0.0, 1.0)]],
        GateKind::Sdg => [[one, zero], [zero, c(0.0, -1.0)]],
        GateKind::SX => [[c(0.5, 0.5), c(0.5, -0.5)], [c(0.5, -0.5), c(0.5, 0.5)]],
        GateKind::RX => {
            let (s, co) = (angles[0] / 2.0).sin_cos();
            [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]]
        }
        GateKind::RY => {
            let (s, co) = (angles[0] / 2.0).sin_cos();
            [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
        }
        GateKind::RZ => {
            let half = angles[0] / 2.0;
            [[Complex64::from_polar(1.0, -half), zero], [zero, Complex64::from_polar(1.0, half)]]
        }
        GateKind::U => {
            let (theta, phi, lambda) = (angles[0], angles[1], angles[2]);
            let (s, co) = (theta / 2.0).sin_cos();
            [
                [c(co, 0.0), -Complex64::from_polar(s, lambda)],
                [Complex64::from_polar(s, phi), Complex64::from_polar(co, phi + lambda)],
            ]
        }
        GateKind::CX | GateKind::CZ | GateKind::Swap => panic!("{kind} is not a single-qubit gate"),
    }
}

/// Dense state of `num_qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// |0...0>.
    pub fn zero(num_qubits: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Self { num_qubits, amps }
    }

    /// Wrap raw amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Option<Self> {
        let n = amps.len();
        (n.is_power_of_two()).then(|| Self { num_qubits: n.trailing_zeros() as usize, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(Complex64::norm_sqr).collect()
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn apply_matrix(&mut self, m: &Mat2, q: usize) {
        let stride = 1usize << q;
        for base in (0..self.amps.len()).step_by(stride << 1) {
            for i in base..base + stride {
                let (a0, a1) = (self.amps[i], self.amps[i + stride]);
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i + stride] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    fn apply_cx(&mut self, control: usize, target: usize) {
        let (cm, tm) = (1usize << control, 1usize << target);
        for i in 0..self.amps.len() {
            if i & cm != 0 && i & tm == 0 {
                self.amps.swap(i, i | tm);
            }
        }
    }

    fn apply_cz(&mut self, a: usize, b: usize) {
        let mask = (1usize << a) | (1usize << b);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *amp = -*amp;
            }
        }
    }

    fn apply_swap(&mut self, a: usize, b: usize) {
        let (am, bm) = (1usize << a, 1usize << b);
        for i in 0..self.amps.len() {
            if i & am != 0 && i & bm == 0 {
                self.amps.swap(i, (i & !am) | bm);
            }
        }
    }

    /// Apply one gate whose qubits are already expressed in this state's indices.
    pub fn apply_gate(&mut self, kind: GateKind, qubits: &[usize], angles: &[f64]) {
        match kind {
            GateKind::CX => self.apply_cx(qubits[0], qubits[1]),
            GateKind::CZ => self.apply_cz(qubits[0], qubits[1]),
            GateKind::Swap => self.apply_swap(qubits[0], qubits[1]),
            _ => self.apply_matrix(&single_qubit_matrix(kind, angles), qubits[0]),
        }
    }

    fn apply_with<F>(&mut self, gate: &Gate, map: &[usize], lookup: &F) -> Result<(), CircuitError>
    where
        F: Fn(&str) -> Option<f64>,
    {
        let mut angles = [0.0; 3];
        for (slot, p) in angles.iter_mut().zip(gate.params()) {
            *slot = p.eval(lookup)?;
        }
        let mut qubits = [0usize; 2];
        for (slot, &q) in qubits.iter_mut().zip(gate.qubits()) {
            *slot = map[q];
        }
        self.apply_gate(gate.kind(), &qubits[..gate.qubits().len()], &angles[..gate.params().len()]);
        Ok(())
    }

    /// Run every gate of `circuit`, resolving symbols through `binding`.
    /// Measurements are ignored.
    pub fn evolve(&mut self, circuit: &Circuit, binding: &ParameterBinding) -> Result<(), SimError> {
        assert_eq!(circuit.num_qubits(), self.num_qubits, "circuit and state widths differ");
        let identity: Vec<usize> = (0..self.num_qubits).collect();
        let lookup = binding.lookup();
        for g in circuit.gates() {
            self.apply_with(g, &identity, &lookup)?;
        }
        Ok(())
    }

    /// Apply a Pauli string in place (Y contributes its factor of i).
    pub fn apply_pauli(&mut self, pauli: &PauliString) {
        for (q, ch) in pauli.per_qubit() {
            let kind = match ch {
                'X' => GateKind::X,
                'Y' => GateKind::Y,
                'Z' => GateKind::Z,
                _ => continue,
            };
            self.apply_matrix(&single_qubit_matrix(kind, &[]), q);
        }
    }

    /// Exact <psi|P|psi>.
    pub fn expectation(&self, pauli: &PauliString) -> Result<f64, SimError> {
        if pauli.len() != self.num_qubits {
            return Err(SimError::WidthMismatch { pauli: pauli.len(), qubits: self.num_qubits });
        }
        let mut applied = self.clone();
        applied.apply_pauli(pauli);
        Ok(self.inner(&applied).re)
    }

    /// <Z> on a single qubit.
    pub fn expectation_z(&self, q: usize) -> f64 {
        let mask = 1usize << q;
        self.amps.iter().enumerate().map(|(i, a)| if i & mask == 0 { a.norm_sqr() } else { -a.norm_sqr() }).sum()
    }

    /// Largest amplitude difference after aligning global phase.
    pub fn distance_up_to_phase(&self, other: &StateVector) -> f64 {
        if self.amps.len() != other.amps.len() {
            return f64::INFINITY;
        }
        let overlap = self.inner(other);
        let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { Complex64::new(1.0, 0.0) };
        self.amps.iter().zip(&other.amps).map(|(a, b)| (a * phase - b).norm()).fold(0.0, f64::max)
    }

    pub fn equal_up_to_phase(&self, other: &StateVector, tol: f64) -> bool {
        self.distance_up_to_phase(other) <= tol
    }
}

/// Simulator with a configurable width guard.
#[derive(Clone, Copy, Debug)]
pub struct Simulator {
    max_qubits: usize,
}

impl Default for Simulator {
    fn default() -> Self {
        Self { max_qubits: MAX_QUBITS }
    }
}

impl Simulator {
    pub fn with_max_qubits(max_qubits: usize) -> Self {
        Self { max_qubits }
    }

    fn guard(&self, width: usize) -> Result<(), SimError> {
        if width > self.max_qubits {
            Err(SimError::TooWide { width, max: self.max_qubits })
        } else {
            Ok(())
        }
    }

    /// Exact final state of a measurement-free circuit.
    pub fn statevector(&self, circuit: &Circuit, binding: &ParameterBinding) -> Result<StateVector, SimError> {
        if circuit.has_measurements() {
            return Err(SimError::HasMeasurements);
        }
        self.guard(circuit.num_qubits())?;
        let mut state = StateVector::zero(circuit.num_qubits());
        state.evolve(circuit, binding)?;
        Ok(state)
    }

    /// Final state restricted to `active` qubits (ascending), which must
    /// include every qubit any gate touches. Qubit `active[i]` becomes
    /// index `i` of the returned state.
    pub fn compact_statevector(&self, circuit: &Circuit, active: &[usize]) -> Result<StateVector, SimError> {
        self.guard(active.len())?;
        let mut map = vec![usize::MAX; circuit.num_qubits()];
        for (i, &q) in active.iter().enumerate() {
            map[q] = i;
        }
        let mut state = StateVector::zero(active.len());
        let empty = ParameterBinding::new();
        let lookup = empty.lookup();
        for g in circuit.gates() {
            assert!(g.qubits().iter().all(|&q| map[q] != usize::MAX), "gate {g} touches an inactive qubit");
            state.apply_with(g, &map, &lookup)?;
        }
        Ok(state)
    }

    /// Multinomial sampling of the measured classical bits.
    ///
    /// Only qubits touched by gates or measurements are simulated, so wide
    /// physical circuits are fine as long as their active part fits.
    pub fn sample(&self, circuit: &Circuit, shots: u64, seed: u64) -> Result<Counts, SimError> {
        if !circuit.has_measurements() {
            return Err(SimError::NoMeasurements);
        }
        let active = circuit.active_qubits();
        let state = self.compact_statevector(circuit, &active)?;
        let width = circuit.measurements().iter().map(|&(_, c)| c + 1).max().unwrap_or(0);
        let position = |q: usize| active.binary_search(&q).expect("measured qubits are active");
        let wires: Vec<(usize, usize)> = circuit.measurements().iter().map(|&(q, c)| (position(q), c)).collect();

        let mut marginal: BTreeMap<u64, f64> = BTreeMap::new();
        for (i, amp) in state.amps.iter().enumerate() {
            let p = amp.norm_sqr();
            if p == 0.0 {
                continue;
            }
            let outcome = wires.iter().fold(0u64, |acc, &(bit, clbit)| acc | ((((i >> bit) & 1) as u64) << clbit));
            *marginal.entry(outcome).or_default() += p;
        }
        let outcomes: Vec<u64> = marginal.keys().copied().collect();
        let mut cumulative = Vec::with_capacity(outcomes.len());
        let mut acc = 0.0;
        for p in marginal.values() {
            acc += p;
            cumulative.push(acc);
        }

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut tallies = vec![0u64; outcomes.len()];
        for _ in 0..shots {
            let r = rng.gen::<f64>() * acc;
            let idx = cumulative.partition_point(|&c| c <= r).min(outcomes.len() - 1);
            tallies[idx] += 1;
        }
        let counts =
            outcomes.iter().zip(tallies).filter(|&(_, n)| n > 0).map(|(&o, n)| (format_bits(o, width), n)).collect();
        Ok(Counts { shots, counts })
    }
}

fn format_bits(value: u64, width: usize) -> String {
    (0..width).rev().map(|b| if (value >> b) & 1 == 1 { '1' } else { '0' }).collect()
}

/// Exact statevector with the default width guard.
pub fn statevector(circuit: &Circuit) -> Result<StateVector, SimError> {
    Simulator::default().statevector(circuit, &ParameterBinding::new())
}

pub fn sample(circuit: &Circuit, shots: u64, seed: u64) -> Result<Counts, SimError> {
    Simulator::default().sample(circuit, shots, seed)
}

/// Exact <psi|P|psi> for the state prepared by `circuit`.
pub fn expectation(circuit: &Circuit, pauli: &PauliString) -> Result<f64, SimError> {
    if pauli.len() != circuit.num_qubits() {
        return Err(SimError::WidthMismatch { pauli: pauli.len(), qubits: circuit.num_qubits() });
    }
    statevector(circuit)?.expectation(pauli)
}

/// Move virtual qubit `q` of `state` to position `layout[q]` of a state as
/// wide as the layout's device. Positions outside the image start in |0>.
pub fn permute(state: &StateVector, layout: &Layout) -> Result<StateVector, SimError> {
    let n = state.num_qubits;
    if layout.len() != n || !layout.is_valid() {
        return Err(SimError::InvalidLayout);
    }
    let width = layout.num_physical();
    Simulator::default().guard(width)?;
    let mut out = vec![Complex64::new(0.0, 0.0); 1 << width];
    for (i, &amp) in state.amps.iter().enumerate() {
        let j = (0..n).fold(0usize, |acc, q| acc | (((i >> q) & 1) << layout.physical(q)));
        out[j] = amp;
    }
    Ok(StateVector { num_qubits: width, amps: out })
}

/// Measurement outcomes keyed by little-endian bitstring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CountsRepr", into = "CountsRepr")]
pub struct Counts {
    shots: u64,
    counts: BTreeMap<String, u64>,
}

#[derive(Serialize, Deserialize)]
struct CountsRepr {
    shots: u64,
    counts: BTreeMap<String, u64>,
}

impl From<Counts> for CountsRepr {
    fn from(c: Counts) -> Self {
        CountsRepr { shots: c.shots, counts: c.counts }
    }
}

impl TryFrom<CountsRepr> for Counts {
    type Error = SimError;

    fn try_from(r: CountsRepr) -> Result<Self, Self::Error> {
        let sum: u64 = r.counts.values().sum();
        if sum != r.shots {
            return Err(SimError::ShotMismatch { shots: r.shots, sum });
        }
        Counts::new(r.counts)
    }
}

impl Counts {
    /// Validate keys; shots is the sum of counts.
    pub fn new(counts: BTreeMap<String, u64>) -> Result<Self, SimError> {
        let mut width = None;
        for key in counts.keys() {
            if key.is_empty() || !key.chars().all(|c| c == '0' || c == '1') {
                return Err(SimError::BadKey(key.clone()));
            }
            if *width.get_or_insert(key.len()) != key.len() {
                return Err(SimError::RaggedKeys);
            }
        }
        let shots = counts.values().sum();
        Ok(Self { shots, counts })
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn get(&self, key: &str) -> u64 {
        self.counts.get(key).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.counts.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn num_bits(&self) -> Option<usize> {
        self.counts.keys().next().map(String::len)
    }

    pub fn frequency(&self, key: &str) -> f64 {
        if self.shots == 0 {
            0.0
        } else {
            self.get(key) as f64 / self.shots as f64
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("counts JSON is always serializable")
    }
}

impl<K: Into<String>> FromIterator<(K, u64)> for Counts {
    /// Panics on malformed keys; prefer [`Counts::new`] for untrusted input.
    fn from_iter<I: IntoIterator<Item = (K, u64)>>(iter: I) -> Self {
        Counts::new(iter.into_iter().map(|(k, v)| (k.into(), v)).collect()).expect("valid counts keys")
    }
}

/// `(sum_k sqrt(p_k q_k))^2` over normalized frequencies.
pub fn hellinger_fidelity(p: &Counts, q: &Counts) -> Result<f64, SimError> {
    if p.shots == 0 || q.shots == 0 {
        return Err(SimError::EmptyCounts);
    }
    let overlap: f64 = p
        .counts
        .iter()
        .filter_map(|(k, &n)| q.counts.get(k).map(|&m| (n as f64 / p.shots as f64 * m as f64 / q.shots as f64).sqrt()))
        .sum();
    Ok((overlap * overlap).min(1.0))
}
