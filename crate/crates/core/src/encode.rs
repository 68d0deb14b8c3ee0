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

//! Data-encoding circuits and the trainable layer used by the classifiers.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::circuit::{Circuit, Expr, Param, ParameterBinding};

#[derive(Debug, Error, PartialEq)]
pub enum EncodeError {
    #[error("no features given")]
    Empty,
    #[error("feature {index} is not finite ({value})")]
    NonFinite { index: usize, value: f64 },
    #[error("amplitude encoding needs a power-of-two length, got {0}")]
    NotPowerOfTwo(usize),
    #[error("amplitude encoding needs non-negative entries; feature {index} is {value}")]
    Negative { index: usize, value: f64 },
    #[error("cannot amplitude-encode the zero vector")]
    ZeroVector,
    #[error("{what} needs at least {min} qubits, got {got}")]
    TooFewQubits { what: &'static str, min: usize, got: usize },
    #[error("reps must be at least 1")]
    NoReps,
    #[error("unknown encoding {0:?}; expected angle, amplitude or zz")]
    UnknownEncoding(String),
}

/// Name of the `i`-th feature symbol.
pub fn feature_symbol(i: usize) -> String {
    format!("x_{i}")
}

/// Name of the parameter of `qubit` in PQC layer `layer`.
pub fn layer_symbol(layer: usize, qubit: usize) -> String {
    format!("theta_{layer}_{qubit}")
}

/// Binding `x_i -> features[i]`.
pub fn feature_binding(features: &[f64]) -> ParameterBinding {
    features.iter().enumerate().map(|(i, &v)| (feature_symbol(i), v)).collect()
}

fn check_finite(features: &[f64]) -> Result<(), EncodeError> {
    if features.is_empty() {
        return Err(EncodeError::Empty);
    }
    match features.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(EncodeError::NonFinite { index, value: features[index] }),
        None => Ok(()),
    }
}

/// `rx(x_i)` on qubit `i`.
pub fn angle_encode(features: &[f64]) -> Result<Circuit, EncodeError> {
    check_finite(features)?;
    let mut c = Circuit::new(features.len());
    for (q, &x) in features.iter().enumerate() {
        c.rx(x, q);
    }
    Ok(c)
}

/// [`angle_encode`] with symbols `x_0 .. x_{n-1}` in place of values.
pub fn angle_encode_symbolic(n: usize) -> Result<Circuit, EncodeError> {
    if n == 0 {
        return Err(EncodeError::Empty);
    }
    let mut c = Circuit::new(n);
    for q in 0..n {
        c.rx(Param::symbol(feature_symbol(q)), q);
    }
    Ok(c)
}

fn gray(i: usize) -> usize {
    i ^ (i >> 1)
}

/// Uniformly controlled `ry` on `target`: for control value `c` (bit `b` is
/// qubit `controls[b]`) the target sees `ry(angles[c])`. Expanded with a
/// Gray-code walk into `2^k` rotations and `2^k` cx.
fn multiplexed_ry(c: &mut Circuit, target: usize, controls: &[usize], angles: &[f64]) {
    let k = controls.len();
    let size = 1usize << k;
    debug_assert_eq!(angles.len(), size);
    if angles.iter().all(|&a| a == 0.0) {
        return;
    }
    if k == 0 {
        c.ry(angles[0], target);
        return;
    }
    let scale = 1.0 / size as f64;
    for i in 0..size {
        let g = gray(i);
        let theta: f64 = angles
            .iter()
            .enumerate()
            .map(|(ctrl, &a)| if (ctrl & g).count_ones().is_multiple_of(2) { a } else { -a })
            .sum::<f64>()
            * scale;
        c.ry(theta, target);
        let flip = if i + 1 < size { (i + 1).trailing_zeros() as usize } else { k - 1 };
        c.cx(controls[flip], target);
    }
}

/// Prepare `features / |features|` as the amplitudes of `log2(len)` qubits.
pub fn amplitude_encode(features: &[f64]) -> Result<Circuit, EncodeError> {
    check_finite(features)?;
    let len = features.len();
    if !len.is_power_of_two() || len < 2 {
        return Err(EncodeError::NotPowerOfTwo(len));
    }
    if let Some(index) = features.iter().position(|&v| v < 0.0) {
        return Err(EncodeError::Negative { index, value: features[index] });
    }
    if features.iter().all(|&v| v == 0.0) {
        return Err(EncodeError::ZeroVector);
    }
    let n = len.trailing_zeros() as usize;
    let mut c = Circuit::new(n);
    for level in 0..n {
        let target = n - 1 - level;
        let controls: Vec<usize> = (target + 1..n).collect();
        let block = 1usize << (target + 1);
        let half = block / 2;
        let angles: Vec<f64> = features
            .chunks(block)
            .map(|chunk| {
                let lower = chunk[..half].iter().map(|v| v * v).sum::<f64>().sqrt();
                let upper = chunk[half..].iter().map(|v| v * v).sum::<f64>().sqrt();
                2.0 * upper.atan2(lower)
            })
            .collect();
        multiplexed_ry(&mut c, target, &controls, &angles);
    }
    Ok(c)
}

/// Second-order Pauli-Z feature map over symbols `x_0 .. x_{n-1}`.
pub fn zz_feature_map(n: usize, reps: usize) -> Result<Circuit, EncodeError> {
    if n < 2 {
        return Err(EncodeError::TooFewQubits { what: "zz_feature_map", min: 2, got: n });
    }
    if reps == 0 {
        return Err(EncodeError::NoReps);
    }
    let x = |i: usize| Expr::symbol(feature_symbol(i));
    let mut c = Circuit::new(n);
    for _ in 0..reps {
        for q in 0..n {
            c.h(q);
        }
        for q in 0..n {
            c.rz(x(q).mul(Expr::Const(2.0)), q);
        }
        for i in 0..n {
            for j in i + 1..n {
                let angle = Expr::Const(PI).sub(x(i)).mul(Expr::Const(PI).sub(x(j))).mul(Expr::Const(2.0));
                c.cx(i, j).rz(angle, j).cx(i, j);
            }
        }
    }
    Ok(c)
}

/// One trainable layer: `ry(theta_{layer}_{q})` on every qubit, then a
/// linear cx chain.
pub fn pqc_layer(n: usize, layer: usize) -> Circuit {
    let mut c = Circuit::new(n);
    for q in 0..n {
        c.ry(Param::symbol(layer_symbol(layer, q)), q);
    }
    for q in 1..n {
        c.cx(q - 1, q);
    }
    c
}

/// `count` consecutive layers starting at index `first`.
pub fn pqc_layers(n: usize, first: usize, count: usize) -> Circuit {
    let mut c = Circuit::new(n);
    for layer in first..first + count {
        c = c.compose(&pqc_layer(n, layer)).expect("layers share a width");
    }
    c
}

/// Encoding strategy selectable by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Encoding {
    Angle,
    Amplitude,
    Zz,
}

impl Encoding {
    pub fn name(self) -> &'static str {
        match self {
            Encoding::Angle => "angle",
            Encoding::Amplitude => "amplitude",
            Encoding::Zz => "zz",
        }
    }

    /// Qubits needed for `num_features` features.
    pub fn qubits_for(self, num_features: usize) -> usize {
        match self {
            Encoding::Amplitude => num_features.next_power_of_two().trailing_zeros() as usize,
            Encoding::Angle | Encoding::Zz => num_features,
        }
    }

    /// Concrete (bound) encoding circuit of one sample.
    pub fn encode(self, features: &[f64]) -> Result<Circuit, EncodeError> {
        match self {
            Encoding::Angle => angle_encode(features),
            Encoding::Amplitude => amplitude_encode(features),
            Encoding::Zz => {
                check_finite(features)?;
                let map = zz_feature_map(features.len(), 1)?;
                Ok(map.bind(&feature_binding(features)).expect("every feature symbol is bound"))
            }
        }
    }
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Encoding {
    type Err = EncodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "angle" => Ok(Encoding::Angle),
            "amplitude" => Ok(Encoding::Amplitude),
            "zz" => Ok(Encoding::Zz),
            _ => Err(EncodeError::UnknownEncoding(s.to_owned())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateKind;
    use crate::sim::statevector;
    use crate::transpiler::optimize;

    fn real_state(c: &Circuit) -> Vec<f64> {
        let s = statevector(c).unwrap();
        s.amplitudes()
            .iter()
            .map(|a| {
                assert!(a.im.abs() < 1e-12);
                a.re
            })
            .collect()
    }

    #[test]
    fn angle_encoding_basics() {
        let zero = angle_encode(&[0.0; 4]).unwrap();
        assert_eq!(zero.depth(), 1);
        assert!((statevector(&zero).unwrap().amplitudes()[0].norm() - 1.0).abs() < 1e-12);
        let flip = angle_encode(&[PI]).unwrap();
        let mut x = Circuit::new(1);
        x.x(0);
        assert!(statevector(&flip).unwrap().equal_up_to_phase(&statevector(&x).unwrap(), 1e-12));
        assert_eq!(angle_encode(&[]), Err(EncodeError::Empty));
        assert!(matches!(angle_encode(&[f64::NAN]), Err(EncodeError::NonFinite { index: 0, .. })));
        assert_eq!(angle_encode_symbolic(3).unwrap().free_symbols().len(), 3);
    }

    #[test]
    fn amplitude_basis_and_uniform() {
        let s = real_state(&amplitude_encode(&[1.0, 0.0, 0.0, 0.0]).unwrap());
        assert!((s[0] - 1.0).abs() < 1e-12);
        let s = real_state(&amplitude_encode(&[1.0; 4]).unwrap());
        assert!(s.iter().all(|a| (a - 0.5).abs() < 1e-12));
    }

    #[test]
    fn amplitude_round_trip_and_gate_budget() {
        let v: Vec<f64> = (0..16).map(|i| ((i * 7 + 3) % 11) as f64).collect();
        let c = amplitude_encode(&v).unwrap();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        for (a, want) in real_state(&c).iter().zip(&v) {
            assert!((a - want / norm).abs() < 1e-12);
        }
        // 1 + 2 + 4 + 8 rotations and 2 + 4 + 8 cx.
        let ops = c.count_ops();
        let count = |k| ops.iter().find(|(g, _)| *g == k).map_or(0, |(_, n)| *n);
        assert_eq!(count(GateKind::RY), 15);
        assert_eq!(count(GateKind::CX), 14);
    }

    #[test]
    fn amplitude_errors() {
        assert_eq!(amplitude_encode(&[1.0, 2.0, 3.0]), Err(EncodeError::NotPowerOfTwo(3)));
        assert!(matches!(amplitude_encode(&[1.0, -1.0]), Err(EncodeError::Negative { index: 1, .. })));
        assert_eq!(amplitude_encode(&[0.0, 0.0]), Err(EncodeError::ZeroVector));
    }

    #[test]
    fn zz_map_shape() {
        let c = zz_feature_map(2, 1).unwrap();
        let names: Vec<_> = c.gates().iter().map(|g| g.name()).collect();
        assert_eq!(names, ["h", "h", "rz", "rz", "cx", "rz", "cx"]);
        assert_eq!(zz_feature_map(3, 2).unwrap().len(), 2 * zz_feature_map(3, 1).unwrap().len());
        assert!(zz_feature_map(1, 1).is_err());
        assert_eq!(zz_feature_map(2, 0), Err(EncodeError::NoReps));
    }

    #[test]
    fn zz_pair_angles_vanish_at_pi() {
        let c = zz_feature_map(3, 1).unwrap().bind(&feature_binding(&[PI; 3])).unwrap();
        let pair_rz: Vec<f64> = c
            .gates()
            .windows(2)
            .filter(|w| w[0].kind() == GateKind::CX && w[1].kind() == GateKind::RZ)
            .map(|w| w[1].params()[0].value().unwrap())
            .collect();
        assert_eq!(pair_rz.len(), 3);
        assert!(pair_rz.iter().all(|a| a.abs() < 1e-12));
        let reduced = optimize(&c, 1);
        assert!(reduced.gates().iter().all(|g| matches!(g.kind(), GateKind::H | GateKind::RZ)));
    }

    #[test]
    fn pqc_shape() {
        let l = pqc_layer(4, 0);
        assert_eq!(l.free_symbols().len(), 4);
        assert_eq!(l.stats().two_qubit_count, 3);
        let one = pqc_layer(1, 0);
        assert_eq!(one.len(), 1);
        assert_eq!(pqc_layers(4, 0, 6).free_symbols().len(), 24);
    }

    #[test]
    fn encoding_names() {
        for e in [Encoding::Angle, Encoding::Amplitude, Encoding::Zz] {
            assert_eq!(e.name().parse::<Encoding>().unwrap(), e);
        }
        assert!("basis".parse::<Encoding>().is_err());
        assert_eq!(Encoding::Amplitude.qubits_for(16), 4);
    }
}
