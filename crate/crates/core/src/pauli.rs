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

//! Pauli-basis measurement support.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::circuit::Circuit;
use crate::sim::Counts;

#[derive(Debug, Error)]
pub enum PauliError {
    #[error("Pauli string does not match number of qubits ({len} vs {num_qubits})")]
    Length { len: usize, num_qubits: usize },
    #[error("invalid Pauli character {0:?}; expected one of I, X, Y, Z")]
    BadChar(char),
    #[error("Pauli string is empty")]
    Empty,
    #[error("counts are empty")]
    EmptyCounts,
    #[error("counts keys have {bits} bits but the Pauli string has {len} characters")]
    KeyLength { bits: usize, len: usize },
}

/// A Pauli operator over `{I, X, Y, Z}`. The character at position `i`
/// counted from the right acts on qubit `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString(String);

impl PauliString {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `(qubit, letter)` pairs starting from qubit 0.
    pub fn per_qubit(&self) -> impl Iterator<Item = (usize, char)> + '_ {
        self.0.chars().rev().enumerate()
    }

    pub fn identity(n: usize) -> Self {
        PauliString("I".repeat(n))
    }
}

impl FromStr for PauliString {
    type Err = PauliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Err(PauliError::Empty);
        }
        if let Some(bad) = s.chars().find(|c| !matches!(c, 'I' | 'X' | 'Y' | 'Z')) {
            return Err(PauliError::BadChar(bad));
        }
        Ok(PauliString(s.to_owned()))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Post-rotation mapping a measurement of `pauli` onto the Z basis:
/// `h` for X, `sdg` then `h` for Y, nothing for I and Z.
pub fn create_rotation_circuit(num_qubits: usize, pauli: &PauliString) -> Result<Circuit, PauliError> {
    if pauli.len() != num_qubits {
        return Err(PauliError::Length { len: pauli.len(), num_qubits });
    }
    let mut qc = Circuit::new(num_qubits);
    for (q, p) in pauli.per_qubit() {
        match p {
            'X' => {
                qc.h(q);
            }
            'Y' => {
                qc.sdg(q).h(q);
            }
            _ => {}
        }
    }
    Ok(qc)
}

/// Uniform i.i.d. letters from `{I, X, Y, Z}`.
pub fn random_pauli(num_qubits: usize, seed: u64) -> PauliString {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_pauli_with(num_qubits, &mut rng)
}

pub fn random_pauli_with<R: Rng>(num_qubits: usize, rng: &mut R) -> PauliString {
    const LETTERS: [char; 4] = ['I', 'X', 'Y', 'Z'];
    PauliString((0..num_qubits).map(|_| LETTERS[rng.gen_range(0..4)]).collect())
}

/// Estimate `<P>` from counts taken after the rotation circuit: each
/// outcome contributes `(-1)^(parity of bits at non-identity positions)`
/// times its frequency.
pub fn expectation_from_counts(counts: &Counts, pauli: &PauliString) -> Result<f64, PauliError> {
    if counts.shots() == 0 {
        return Err(PauliError::EmptyCounts);
    }
    let bits = counts.num_bits().ok_or(PauliError::EmptyCounts)?;
    if bits != pauli.len() {
        return Err(PauliError::KeyLength { bits, len: pauli.len() });
    }
    // Keys and Pauli strings share the same orientation, so positions line up.
    let mask: Vec<bool> = pauli.as_str().chars().map(|c| c != 'I').collect();
    let total: f64 = counts
        .iter()
        .map(|(key, n)| {
            let odd = key.chars().zip(&mask).filter(|&(b, &m)| m && b == '1').count() % 2 == 1;
            if odd {
                -(n as f64)
            } else {
                n as f64
            }
        })
        .sum();
    Ok(total / counts.shots() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateKind;
    use crate::sim;

    #[test]
    fn rotation_for_ixyiyx() {
        let p: PauliString = "IXYIYX".parse().unwrap();
        let qc = create_rotation_circuit(6, &p).unwrap();
        let got: Vec<(GateKind, usize)> = qc.gates().iter().map(|g| (g.kind(), g.qubits()[0])).collect();
        let want = [
            (GateKind::H, 0),
            (GateKind::Sdg, 1),
            (GateKind::H, 1),
            (GateKind::Sdg, 3),
            (GateKind::H, 3),
            (GateKind::H, 4),
        ];
        assert_eq!(got, want);
        assert!(qc.depth() <= 2);
    }

    #[test]
    fn identity_string_gives_empty_circuit() {
        let qc = create_rotation_circuit(4, &"IIII".parse().unwrap()).unwrap();
        assert!(qc.is_empty());
        let qc = create_rotation_circuit(2, &"ZZ".parse().unwrap()).unwrap();
        assert!(qc.is_empty());
    }

    #[test]
    fn rejects_bad_strings() {
        assert!(matches!("IXA".parse::<PauliString>(), Err(PauliError::BadChar('A'))));
        assert!(matches!("".parse::<PauliString>(), Err(PauliError::Empty)));
        let p: PauliString = "XY".parse().unwrap();
        assert!(matches!(create_rotation_circuit(3, &p), Err(PauliError::Length { .. })));
    }

    #[test]
    fn random_pauli_is_deterministic_and_uniform() {
        assert_eq!(random_pauli(6, 11), random_pauli(6, 11));
        assert_eq!(random_pauli(1, 3).len(), 1);
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let draws = 10_000;
        let mut freq = [[0usize; 4]; 3];
        for _ in 0..draws {
            for (pos, ch) in random_pauli_with(3, &mut rng).as_str().chars().enumerate() {
                freq[pos]["IXYZ".find(ch).unwrap()] += 1;
            }
        }
        for row in freq {
            let mut chi2 = 0.0;
            for n in row {
                let f = n as f64 / draws as f64;
                assert!((f - 0.25).abs() <= 0.02, "letter frequency {f}");
                chi2 += (n as f64 - 2500.0).powi(2) / 2500.0;
            }
            // 3 degrees of freedom, p = 0.001 critical value.
            assert!(chi2 < 16.27, "chi-square {chi2}");
        }
    }

    #[test]
    fn expectation_from_counts_examples() {
        let z: PauliString = "Z".parse().unwrap();
        let c0: Counts = [("0", 1u64)].into_iter().collect();
        let c1: Counts = [("1", 1u64)].into_iter().collect();
        let uniform: Counts = [("0", 5u64), ("1", 5)].into_iter().collect();
        assert_eq!(expectation_from_counts(&c0, &z).unwrap(), 1.0);
        assert_eq!(expectation_from_counts(&c1, &z).unwrap(), -1.0);
        assert_eq!(expectation_from_counts(&uniform, &z).unwrap(), 0.0);
        let zi: PauliString = "ZI".parse().unwrap();
        let c: Counts = [("01", 3u64), ("11", 1)].into_iter().collect();
        assert_eq!(expectation_from_counts(&c, &zi).unwrap(), 0.5);
        assert!(matches!(expectation_from_counts(&c, &z), Err(PauliError::KeyLength { .. })));
    }

    #[test]
    fn single_qubit_x_measurement_matches_statevector() {
        let x: PauliString = "X".parse().unwrap();
        let mut prep = Circuit::new(1);
        prep.ry(0.7, 0).rz(0.3, 0);
        let exact = sim::expectation(&prep, &x).unwrap();
        let rotated = prep.compose(&create_rotation_circuit(1, &x).unwrap()).unwrap();
        let counts = sim::sample(&rotated.measure_all().unwrap(), 100_000, 17).unwrap();
        let estimate = expectation_from_counts(&counts, &x).unwrap();
        let sigma = ((1.0 - exact * exact) / 100_000.0).sqrt();
        assert!((estimate - exact).abs() <= 3.0 * sigma, "{estimate} vs {exact}");
    }
}
