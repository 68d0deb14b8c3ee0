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

//! Rule-based rewriting into a device basis.
//!
//! | gate        | rewrite (circuit order)                          |
//! |-------------|--------------------------------------------------|
//! | `h`         | `rz(pi/2) sx rz(pi/2)`                           |
//! | `x`         | kept, or `sx sx`                                 |
//! | `y`         | `rz(pi) x`                                       |
//! | `z`         | `rz(pi)`                                         |
//! | `s` / `sdg` | `rz(pi/2)` / `rz(-pi/2)`                         |
//! | `rx(t)`     | `rz(pi/2) sx rz(t+pi) sx rz(pi/2)`               |
//! | `ry(t)`     | `sx rz(t+pi) sx rz(pi)`                          |
//! | `u(t,p,l)`  | `rz(l) sx rz(t+pi) sx rz(p+pi)`                  |
//! | `cz` / `cx` | kept, or conjugated by `h` on the target         |
//! | `swap`      | three `cx`                                       |
//!
//! Every row holds up to global phase; symbolic angles pass through as
//! shifted expressions.

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, PI};

use super::TranspileError;
use crate::circuit::{Circuit, Gate, GateKind, Param};

struct Emitter<'a> {
    basis: &'a BTreeSet<GateKind>,
    out: Vec<Gate>,
}

impl Emitter<'_> {
    fn rz(&mut self, angle: Param, q: usize) {
        self.out.push(Gate::rz(angle, q));
    }

    fn rzf(&mut self, angle: f64, q: usize) {
        self.rz(Param::Value(angle), q);
    }

    fn sx(&mut self, q: usize) {
        self.out.push(Gate::one(GateKind::SX, q));
    }

    fn x(&mut self, q: usize) {
        if self.basis.contains(&GateKind::X) {
            self.out.push(Gate::one(GateKind::X, q));
        } else {
            self.sx(q);
            self.sx(q);
        }
    }

    fn h(&mut self, q: usize) {
        self.rzf(FRAC_PI_2, q);
        self.sx(q);
        self.rzf(FRAC_PI_2, q);
    }

    fn cx(&mut self, c: usize, t: usize) -> Result<(), TranspileError> {
        if self.basis.contains(&GateKind::CX) {
            self.out.push(Gate::cx(c, t));
        } else if self.basis.contains(&GateKind::CZ) {
            self.h(t);
            self.out.push(Gate::raw(GateKind::CZ, &[c, t], &[]));
            self.h(t);
        } else {
            return Err(TranspileError::NonTranslatable(GateKind::CX));
        }
        Ok(())
    }

    fn gate(&mut self, g: &Gate) -> Result<(), TranspileError> {
        let q = g.qubits();
        let p = g.params();
        match g.kind() {
            GateKind::H => self.h(q[0]),
            GateKind::X => self.x(q[0]),
            GateKind::Y => {
                self.rzf(PI, q[0]);
                self.x(q[0]);
            }
            GateKind::Z => self.rzf(PI, q[0]),
            GateKind::S => self.rzf(FRAC_PI_2, q[0]),
            GateKind::Sdg => self.rzf(-FRAC_PI_2, q[0]),
            GateKind::SX => self.sx(q[0]),
            GateKind::RZ => self.rz(p[0].clone(), q[0]),
            GateKind::RX => {
                self.rzf(FRAC_PI_2, q[0]);
                self.sx(q[0]);
                self.rz(p[0].shifted(PI), q[0]);
                self.sx(q[0]);
                self.rzf(FRAC_PI_2, q[0]);
            }
            GateKind::RY => {
                self.sx(q[0]);
                self.rz(p[0].shifted(PI), q[0]);
                self.sx(q[0]);
                self.rzf(PI, q[0]);
            }
            GateKind::U => {
                self.rz(p[2].clone(), q[0]);
                self.sx(q[0]);
                self.rz(p[0].shifted(PI), q[0]);
                self.sx(q[0]);
                self.rz(p[1].shifted(PI), q[0]);
            }
            GateKind::CX => self.cx(q[0], q[1])?,
            GateKind::CZ => {
                if self.basis.contains(&GateKind::CZ) {
                    self.out.push(g.clone());
                } else {
                    self.h(q[1]);
                    self.cx(q[0], q[1])?;
                    self.h(q[1]);
                }
            }
            GateKind::Swap => {
                self.cx(q[0], q[1])?;
                self.cx(q[1], q[0])?;
                self.cx(q[0], q[1])?;
            }
        }
        Ok(())
    }
}

/// Rewrite every gate into `basis`, which must contain `rz` and `sx`.
pub fn translate(circuit: &Circuit, basis: &BTreeSet<GateKind>) -> Result<Circuit, TranspileError> {
    for needed in [GateKind::RZ, GateKind::SX] {
        if !basis.contains(&needed) {
            return Err(TranspileError::NonTranslatable(needed));
        }
    }
    let mut em = Emitter { basis, out: Vec::with_capacity(circuit.len() * 3) };
    for g in circuit.gates() {
        if basis.contains(&g.kind()) {
            em.out.push(g.clone());
        } else {
            em.gate(g)?;
        }
    }
    Ok(Circuit::from_parts_unchecked(circuit.num_qubits(), em.out, circuit.measurements().to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::Topology;
    use crate::circuit::ParameterBinding;
    use crate::sim::statevector;

    fn probe(kind: GateKind) -> Circuit {
        let mut c = Circuit::new(2);
        c.h(0).rx(0.4, 1).cx(0, 1).ry(1.1, 0);
        let qubits: &[usize] = if kind.is_two_qubit() { &[1, 0] } else { &[1] };
        let params = match kind.num_params() {
            0 => vec![],
            1 => vec![Param::Value(0.77)],
            _ => vec![Param::Value(0.3), Param::Value(-1.2), Param::Value(2.5)],
        };
        c.apply(kind, qubits, params).unwrap();
        c
    }

    #[test]
    fn every_gate_preserves_the_state() {
        let mut cz_basis = Topology::default_basis();
        cz_basis.remove(&GateKind::CX);
        cz_basis.remove(&GateKind::X);
        cz_basis.insert(GateKind::CZ);
        for basis in [Topology::default_basis(), cz_basis] {
            for kind in GateKind::ALL {
                let c = probe(kind);
                let t = translate(&c, &basis).unwrap();
                assert!(t.gates().iter().all(|g| basis.contains(&g.kind())), "{kind}");
                let a = statevector(&c).unwrap();
                let b = statevector(&t).unwrap();
                assert!(a.equal_up_to_phase(&b, 1e-10), "{kind} on {basis:?}");
            }
        }
    }

    #[test]
    fn basis_gates_pass_through() {
        let mut c = Circuit::new(2);
        c.rz(0.3, 0).cx(0, 1).sx(1).x(0);
        assert_eq!(translate(&c, &Topology::default_basis()).unwrap(), c);
    }

    #[test]
    fn symbolic_angles_shift() {
        let mut c = Circuit::new(1);
        c.rx("theta", 0);
        let t = translate(&c, &Topology::default_basis()).unwrap();
        assert_eq!(t.free_symbols().into_iter().collect::<Vec<_>>(), ["theta"]);
        let binding: ParameterBinding = [("theta", 0.9)].into_iter().collect();
        let a = statevector(&c.bind(&binding).unwrap()).unwrap();
        let b = statevector(&t.bind(&binding).unwrap()).unwrap();
        assert!(a.equal_up_to_phase(&b, 1e-12));
    }

    #[test]
    fn missing_rz_is_an_error() {
        let basis: BTreeSet<GateKind> = [GateKind::SX, GateKind::CX].into_iter().collect();
        let mut c = Circuit::new(1);
        c.h(0);
        assert!(matches!(translate(&c, &basis), Err(TranspileError::NonTranslatable(GateKind::RZ))));
    }
}
