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

//! Single-qubit resynthesis into the `rz`/`sx`/`x` basis.

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;

use crate::circuit::{Gate, GateKind, Param};
use crate::sim::Mat2;

const ANGLE_TOL: f64 = 1e-10;

/// Map an angle into `(-pi, pi]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

pub(crate) fn is_zero_angle(theta: f64) -> bool {
    wrap_angle(theta).abs() < ANGLE_TOL
}

/// Euler angles `(theta, phi, lambda)` with `m ~ rz(phi) ry(theta) rz(lambda)`
/// up to global phase.
pub(crate) fn zyz_angles(m: &Mat2) -> (f64, f64, f64) {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let scale = det.sqrt().inv();
    let su = [[m[0][0] * scale, m[0][1] * scale], [m[1][0] * scale, m[1][1] * scale]];
    let theta = 2.0 * su[1][0].norm().atan2(su[0][0].norm());
    let sum_half = su[1][1].arg();
    let diff_half = su[1][0].arg();
    (theta, sum_half + diff_half, sum_half - diff_half)
}

/// `a * b`, i.e. `b` applied first.
pub(crate) fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn push_rz(out: &mut Vec<Gate>, angle: f64, q: usize) {
    if !is_zero_angle(angle) {
        out.push(Gate::rz(Param::Value(wrap_angle(angle)), q));
    }
}

/// Shortest gate sequence (in circuit order) implementing `m` on qubit `q`
/// up to global phase. `x` is only used when the basis contains it.
pub fn decompose_single_qubit(m: &Mat2, q: usize, basis: &BTreeSet<GateKind>) -> Vec<Gate> {
    let (theta, phi, lambda) = zyz_angles(m);
    let mut out = Vec::with_capacity(5);
    if theta.abs() < ANGLE_TOL {
        push_rz(&mut out, phi + lambda, q);
    } else if (theta - PI).abs() < ANGLE_TOL {
        push_rz(&mut out, lambda - phi + PI, q);
        if basis.contains(&GateKind::X) {
            out.push(Gate::one(GateKind::X, q));
        } else {
            out.extend([Gate::one(GateKind::SX, q), Gate::one(GateKind::SX, q)]);
        }
    } else if (theta - FRAC_PI_2).abs() < ANGLE_TOL {
        push_rz(&mut out, lambda - FRAC_PI_2, q);
        out.push(Gate::one(GateKind::SX, q));
        push_rz(&mut out, phi + FRAC_PI_2, q);
    } else {
        push_rz(&mut out, lambda, q);
        out.push(Gate::one(GateKind::SX, q));
        push_rz(&mut out, theta + PI, q);
        out.push(Gate::one(GateKind::SX, q));
        push_rz(&mut out, phi + PI, q);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::Topology;
    use crate::sim::single_qubit_matrix;

    fn product(gates: &[Gate]) -> Mat2 {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        gates.iter().fold([[one, zero], [zero, one]], |acc, g| {
            let angles: Vec<f64> = g.params().iter().map(|p| p.value().unwrap()).collect();
            mat_mul(&single_qubit_matrix(g.kind(), &angles), &acc)
        })
    }

    fn same_up_to_phase(a: &Mat2, b: &Mat2) -> bool {
        let overlap: Complex64 =
            (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).map(|(i, j)| a[i][j].conj() * b[i][j]).sum();
        (overlap.norm() - 2.0).abs() < 1e-9
    }

    #[test]
    fn wrap_angle_range() {
        assert_eq!(wrap_angle(PI), PI);
        assert!((wrap_angle(-PI) - PI).abs() < 1e-12);
        assert!((wrap_angle(3.0 * PI / 2.0) + FRAC_PI_2).abs() < 1e-12);
        assert!(wrap_angle(TAU).abs() < 1e-12);
    }

    #[test]
    fn resynthesis_reproduces_unitaries() {
        let basis = Topology::default_basis();
        let mut no_x = basis.clone();
        no_x.remove(&GateKind::X);
        let cases = [
            single_qubit_matrix(GateKind::H, &[]),
            single_qubit_matrix(GateKind::X, &[]),
            single_qubit_matrix(GateKind::Y, &[]),
            single_qubit_matrix(GateKind::SX, &[]),
            single_qubit_matrix(GateKind::RZ, &[0.4]),
            single_qubit_matrix(GateKind::RX, &[FRAC_PI_2]),
            single_qubit_matrix(GateKind::RY, &[-2.1]),
            single_qubit_matrix(GateKind::U, &[0.3, 1.7, -0.8]),
            single_qubit_matrix(GateKind::U, &[PI, 0.2, 0.9]),
        ];
        for m in &cases {
            for b in [&basis, &no_x] {
                let gates = decompose_single_qubit(m, 0, b);
                assert!(gates.len() <= 5);
                assert!(gates.iter().all(|g| b.contains(&g.kind())));
                assert!(same_up_to_phase(&product(&gates), m), "{gates:?}");
            }
        }
    }

    #[test]
    fn identity_is_empty() {
        let m = single_qubit_matrix(GateKind::RZ, &[TAU]);
        assert!(decompose_single_qubit(&m, 0, &Topology::default_basis()).is_empty());
    }

    #[test]
    fn hadamard_needs_three_gates() {
        let m = single_qubit_matrix(GateKind::H, &[]);
        assert_eq!(decompose_single_qubit(&m, 0, &Topology::default_basis()).len(), 3);
    }
}
