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

//! Gate-level circuit IR.
//!
//! A [`Circuit`] is an immutable-by-convention value: every structural
//! operation (`append`, `measure_all`, `bind`, ...) returns a new circuit.
//! Only the builder methods mutate in place, and they are meant for
//! construction.

mod json;
mod param;
mod random;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;
use thiserror::Error;

pub use param::{Expr, Param, ParameterBinding};
pub use random::random_circuit;

#[derive(Debug, Error)]
pub enum CircuitError {
    #[error("unknown gate name {0:?}")]
    UnknownGate(String),
    #[error("gate {gate} expects {expected} qubit(s), got {got}")]
    Arity { gate: GateKind, expected: usize, got: usize },
    #[error("gate {gate} expects {expected} parameter(s), got {got}")]
    ParamCount { gate: GateKind, expected: usize, got: usize },
    #[error("gate {0} acts twice on the same qubit")]
    DuplicateQubit(GateKind),
    #[error("non-finite angle {0}")]
    NonFiniteParam(f64),
    #[error("qubit {qubit} out of range for a {num_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("circuit must have at least one qubit")]
    EmptyRegister,
    #[error("qubit {0} is measured; measurements must be terminal")]
    GateAfterMeasurement(usize),
    #[error("qubit {0} is already measured")]
    AlreadyMeasured(usize),
    #[error("classical bit {0} is already written")]
    DuplicateClbit(usize),
    #[error("circuit already carries measurements")]
    HasMeasurements,
    #[error("qubit map has {got} entries but the suffix has {expected} qubits")]
    MapLength { expected: usize, got: usize },
    #[error("qubit map is not injective (qubit {0} repeated)")]
    MapNotInjective(usize),
    #[error("missing value for parameter {0:?}")]
    MissingSymbol(String),
    #[error("binding names parameter {0:?} which the circuit does not use")]
    UnknownSymbol(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// The fixed gate vocabulary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    S,
    Sdg,
    SX,
    RX,
    RY,
    RZ,
    CX,
    CZ,
    Swap,
    U,
}

impl GateKind {
    pub const ALL: [GateKind; 14] = [
        GateKind::H,
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::S,
        GateKind::Sdg,
        GateKind::SX,
        GateKind::RX,
        GateKind::RY,
        GateKind::RZ,
        GateKind::CX,
        GateKind::CZ,
        GateKind::Swap,
        GateKind::U,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::SX => "sx",
            GateKind::RX => "rx",
            GateKind::RY => "ry",
            GateKind::RZ => "rz",
            GateKind::CX => "cx",
            GateKind::CZ => "cz",
            GateKind::Swap => "swap",
            GateKind::U => "u",
        }
    }

    pub fn num_qubits(self) -> usize {
        match self {
            GateKind::CX | GateKind::CZ | GateKind::Swap => 2,
            _ => 1,
        }
    }

    pub fn num_params(self) -> usize {
        match self {
            GateKind::RX | GateKind::RY | GateKind::RZ => 1,
            GateKind::U => 3,
            _ => 0,
        }
    }

    pub fn is_two_qubit(self) -> bool {
        self.num_qubits() == 2
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = CircuitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GateKind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| CircuitError::UnknownGate(s.to_owned()))
    }
}

/// One gate application. Construction validates arity, parameter count and
/// qubit distinctness; register bounds are checked when the gate is pushed
/// into a [`Circuit`].
#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    kind: GateKind,
    qubits: SmallVec<[usize; 2]>,
    params: SmallVec<[Param; 1]>,
}

impl Gate {
    pub fn new(kind: GateKind, qubits: &[usize], params: Vec<Param>) -> Result<Self, CircuitError> {
        if qubits.len() != kind.num_qubits() {
            return Err(CircuitError::Arity { gate: kind, expected: kind.num_qubits(), got: qubits.len() });
        }
        if params.len() != kind.num_params() {
            return Err(CircuitError::ParamCount { gate: kind, expected: kind.num_params(), got: params.len() });
        }
        if qubits.len() == 2 && qubits[0] == qubits[1] {
            return Err(CircuitError::DuplicateQubit(kind));
        }
        if let Some(v) = params.iter().filter_map(Param::value).find(|v| !v.is_finite()) {
            return Err(CircuitError::NonFiniteParam(v));
        }
        Ok(Self { kind, qubits: qubits.into(), params: params.into() })
    }

    // Callers inside the crate that already satisfy the invariants.
    pub(crate) fn raw(kind: GateKind, qubits: &[usize], params: &[Param]) -> Self {
        debug_assert_eq!(qubits.len(), kind.num_qubits());
        debug_assert_eq!(params.len(), kind.num_params());
        Self { kind, qubits: qubits.into(), params: params.into() }
    }

    pub(crate) fn one(kind: GateKind, q: usize) -> Self {
        Self::raw(kind, &[q], &[])
    }

    pub(crate) fn rz(angle: Param, q: usize) -> Self {
        Self::raw(GateKind::RZ, &[q], &[angle])
    }

    pub(crate) fn cx(control: usize, target: usize) -> Self {
        Self::raw(GateKind::CX, &[control, target], &[])
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn params(&self) -> &[Param] {
        &self.params
    }

    pub fn is_parameterized(&self) -> bool {
        self.params.iter().any(Param::is_symbolic)
    }

    /// Same gate with every qubit sent through `map`.
    pub fn remapped(&self, map: impl Fn(usize) -> usize) -> Gate {
        Gate { kind: self.kind, qubits: self.qubits.iter().map(|&q| map(q)).collect(), params: self.params.clone() }
    }

    pub(crate) fn with_params(&self, params: SmallVec<[Param; 1]>) -> Gate {
        Gate { kind: self.kind, qubits: self.qubits.clone(), params }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.name())?;
        if !self.params.is_empty() {
            f.write_str("(")?;
            for (i, p) in self.params.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str(")")?;
        }
        for (i, q) in self.qubits.iter().enumerate() {
            write!(f, "{}q{q}", if i == 0 { " " } else { ", " })?;
        }
        Ok(())
    }
}

/// Depth and gate counts of a circuit. Measurements are not counted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CircuitStats {
    pub depth: usize,
    pub two_qubit_count: usize,
    pub total_gates: usize,
}

/// Ordered gate list over a virtual register plus terminal measurements.
///
/// Classical bits are implicit: a measurement `(q, c)` writes qubit `q` into
/// classical bit `c`, and each classical bit is written at most once.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
    measurements: Vec<(usize, usize)>,
}

impl Circuit {
    /// An empty circuit on `num_qubits` qubits.
    ///
    /// Panics if `num_qubits` is zero; use [`Circuit::try_new`] for input
    /// that has not been validated.
    pub fn new(num_qubits: usize) -> Self {
        Self::try_new(num_qubits).expect("a circuit needs at least one qubit")
    }

    pub fn try_new(num_qubits: usize) -> Result<Self, CircuitError> {
        if num_qubits == 0 {
            return Err(CircuitError::EmptyRegister);
        }
        Ok(Self { num_qubits, gates: Vec::new(), measurements: Vec::new() })
    }

    pub(crate) fn from_parts_unchecked(num_qubits: usize, gates: Vec<Gate>, measurements: Vec<(usize, usize)>) -> Self {
        Self { num_qubits, gates, measurements }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn measurements(&self) -> &[(usize, usize)] {
        &self.measurements
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn has_measurements(&self) -> bool {
        !self.measurements.is_empty()
    }

    fn check_qubit(&self, q: usize) -> Result<(), CircuitError> {
        if q >= self.num_qubits {
            Err(CircuitError::QubitOutOfRange { qubit: q, num_qubits: self.num_qubits })
        } else {
            Ok(())
        }
    }

    /// Append a validated gate.
    pub fn push(&mut self, gate: Gate) -> Result<&mut Self, CircuitError> {
        for &q in gate.qubits() {
            self.check_qubit(q)?;
            if self.measurements.iter().any(|&(mq, _)| mq == q) {
                return Err(CircuitError::GateAfterMeasurement(q));
            }
        }
        self.gates.push(gate);
        Ok(self)
    }

    /// Build and append a gate.
    pub fn apply(&mut self, kind: GateKind, qubits: &[usize], params: Vec<Param>) -> Result<&mut Self, CircuitError> {
        self.push(Gate::new(kind, qubits, params)?)
    }

    fn build(&mut self, kind: GateKind, qubits: &[usize], params: Vec<Param>) -> &mut Self {
        if let Err(e) = self.apply(kind, qubits, params) {
            panic!("invalid {kind} on {qubits:?}: {e}");
        }
        self
    }

    pub fn h(&mut self, q: usize) -> &mut Self {
        self.build(GateKind::H, &[q], vec![])
    }

    pub fn x(&mut self, q: usize) -> &mut Self {
        self.build(GateKind::X, &[q], vec![])
    }

    pub fn y(&mut self, q: usize) -> &mut Self {
        self.build(GateKind::Y, &[q], vec![])
    }

    pub fn z(&mut self, q: usize) -> &mut Self {
        self.build(GateKind::Z, &[q], vec![])
    }

    pub fn s(&mut self, q: usize) -> &mut Self {
        self.build(GateKind::S, &[q], vec![])
    }

    pub fn sdg(&mut self, q: usize) -> &mut Self {
        self.build(GateKind::Sdg, &[q], vec![])
    }

    pub fn sx(&mut self, q: usize) -> &mut Self {
        self.build(GateKind::SX, &[q], vec![])
    }

    pub fn rx(&mut self, theta: impl Into<Param>, q: usize) -> &mut Self {
        self.build(GateKind::RX, &[q], vec![theta.into()])
    }

    pub fn ry(&mut self, theta: impl Into<Param>, q: usize) -> &mut Self {
        self.build(GateKind::RY, &[q], vec![theta.into()])
    }

    pub fn rz(&mut self, theta: impl Into<Param>, q: usize) -> &mut Self {
        self.build(GateKind::RZ, &[q], vec![theta.into()])
    }

    pub fn u(
        &mut self,
        theta: impl Into<Param>,
        phi: impl Into<Param>,
        lambda: impl Into<Param>,
        q: usize,
    ) -> &mut Self {
        self.build(GateKind::U, &[q], vec![theta.into(), phi.into(), lambda.into()])
    }

    pub fn cx(&mut self, control: usize, target: usize) -> &mut Self {
        self.build(GateKind::CX, &[control, target], vec![])
    }

    pub fn cz(&mut self, a: usize, b: usize) -> &mut Self {
        self.build(GateKind::CZ, &[a, b], vec![])
    }

    pub fn swap(&mut self, a: usize, b: usize) -> &mut Self {
        self.build(GateKind::Swap, &[a, b], vec![])
    }

    /// Record a terminal measurement of `qubit` into classical bit `clbit`.
    pub fn measure(&mut self, qubit: usize, clbit: usize) -> Result<&mut Self, CircuitError> {
        self.check_qubit(qubit)?;
        if self.measurements.iter().any(|&(q, _)| q == qubit) {
            return Err(CircuitError::AlreadyMeasured(qubit));
        }
        if self.measurements.iter().any(|&(_, c)| c == clbit) {
            return Err(CircuitError::DuplicateClbit(clbit));
        }
        self.measurements.push((qubit, clbit));
        Ok(self)
    }

    /// Copy of `self` followed by `suffix`, whose qubit `i` lands on `qubit_map[i]`.
    pub fn append(&self, suffix: &Circuit, qubit_map: &[usize]) -> Result<Circuit, CircuitError> {
        if self.has_measurements() {
            return Err(CircuitError::HasMeasurements);
        }
        if qubit_map.len() != suffix.num_qubits {
            return Err(CircuitError::MapLength { expected: suffix.num_qubits, got: qubit_map.len() });
        }
        let mut seen = vec![false; self.num_qubits];
        for &q in qubit_map {
            self.check_qubit(q)?;
            if std::mem::replace(&mut seen[q], true) {
                return Err(CircuitError::MapNotInjective(q));
            }
        }
        let mut out = self.clone();
        out.gates.extend(suffix.gates.iter().map(|g| g.remapped(|q| qubit_map[q])));
        out.measurements = suffix.measurements.iter().map(|&(q, c)| (qubit_map[q], c)).collect();
        Ok(out)
    }

    /// `append` with the identity map; widths must agree.
    pub fn compose(&self, suffix: &Circuit) -> Result<Circuit, CircuitError> {
        let map: Vec<usize> = (0..suffix.num_qubits).collect();
        self.append(suffix, &map)
    }

    /// Copy with measurement `(q, q)` on every qubit.
    pub fn measure_all(&self) -> Result<Circuit, CircuitError> {
        if self.has_measurements() {
            return Err(CircuitError::HasMeasurements);
        }
        let mut out = self.clone();
        out.measurements = (0..self.num_qubits).map(|q| (q, q)).collect();
        Ok(out)
    }

    pub fn remove_final_measurements(&self) -> Circuit {
        Circuit { num_qubits: self.num_qubits, gates: self.gates.clone(), measurements: Vec::new() }
    }

    pub fn free_symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for p in self.gates.iter().flat_map(|g| g.params.iter()) {
            p.collect_symbols(&mut out);
        }
        out
    }

    pub fn is_parameterized(&self) -> bool {
        self.gates.iter().any(Gate::is_parameterized)
    }

    /// Fully bind every free symbol. The binding must name exactly the
    /// circuit's free symbols.
    pub fn bind(&self, binding: &ParameterBinding) -> Result<Circuit, CircuitError> {
        let free = self.free_symbols();
        if let Some(missing) = free.iter().find(|s| !binding.contains(s)) {
            return Err(CircuitError::MissingSymbol(missing.clone()));
        }
        if let Some(extra) = binding.names().find(|s| !free.contains(*s)) {
            return Err(CircuitError::UnknownSymbol(extra.to_owned()));
        }
        Ok(self.bind_partial(binding))
    }

    /// Substitute whichever symbols `binding` knows; others stay symbolic.
    pub fn bind_partial(&self, binding: &ParameterBinding) -> Circuit {
        let lookup = binding.lookup();
        let gates = self
            .gates
            .iter()
            .map(|g| {
                if g.is_parameterized() {
                    g.with_params(g.params.iter().map(|p| p.substitute(&lookup)).collect())
                } else {
                    g.clone()
                }
            })
            .collect();
        Circuit { num_qubits: self.num_qubits, gates, measurements: self.measurements.clone() }
    }

    pub fn stats(&self) -> CircuitStats {
        let mut level = vec![0usize; self.num_qubits];
        let mut two_qubit_count = 0;
        for g in &self.gates {
            let next = g.qubits.iter().map(|&q| level[q]).max().unwrap_or(0) + 1;
            for &q in &g.qubits {
                level[q] = next;
            }
            if g.kind.is_two_qubit() {
                two_qubit_count += 1;
            }
        }
        CircuitStats { depth: level.into_iter().max().unwrap_or(0), two_qubit_count, total_gates: self.gates.len() }
    }

    pub fn depth(&self) -> usize {
        self.stats().depth
    }

    /// Count of gates of each kind, in vocabulary order.
    pub fn count_ops(&self) -> Vec<(GateKind, usize)> {
        GateKind::ALL
            .into_iter()
            .map(|k| (k, self.gates.iter().filter(|g| g.kind == k).count()))
            .filter(|&(_, n)| n > 0)
            .collect()
    }

    /// Qubits touched by at least one gate or measurement, ascending.
    pub fn active_qubits(&self) -> Vec<usize> {
        let mut used = vec![false; self.num_qubits];
        for &q in self.gates.iter().flat_map(|g| g.qubits.iter()) {
            used[q] = true;
        }
        for &(q, _) in &self.measurements {
            used[q] = true;
        }
        used.iter().enumerate().filter_map(|(q, &u)| u.then_some(q)).collect()
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "circuit on {} qubit(s)", self.num_qubits)?;
        for g in &self.gates {
            writeln!(f, "  {g}")?;
        }
        for (q, c) in &self.measurements {
            writeln!(f, "  measure q{q} -> c{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gate_validation() {
        assert!(matches!(Gate::new(GateKind::CX, &[0], vec![]), Err(CircuitError::Arity { .. })));
        assert!(matches!(Gate::new(GateKind::RX, &[0], vec![]), Err(CircuitError::ParamCount { .. })));
        assert!(matches!(Gate::new(GateKind::CZ, &[1, 1], vec![]), Err(CircuitError::DuplicateQubit(_))));
        assert!(matches!(
            Gate::new(GateKind::RZ, &[0], vec![Param::Value(f64::NAN)]),
            Err(CircuitError::NonFiniteParam(_))
        ));
        let mut c = Circuit::new(2);
        assert!(matches!(c.apply(GateKind::H, &[2], vec![]), Err(CircuitError::QubitOutOfRange { .. })));
        assert!("ccx".parse::<GateKind>().is_err());
        assert_eq!("sdg".parse::<GateKind>().unwrap(), GateKind::Sdg);
    }

    #[test]
    fn append_identity_map_reproduces_suffix() {
        let suffix = random_circuit(6, 10, 42);
        let out = Circuit::new(6).append(&suffix, &[0, 1, 2, 3, 4, 5]).unwrap();
        assert_eq!(out, suffix);
    }

    #[test]
    fn append_remaps_and_validates() {
        let mut base = Circuit::new(3);
        base.h(0);
        let mut suffix = Circuit::new(2);
        suffix.cx(0, 1);
        let out = base.append(&suffix, &[2, 0]).unwrap();
        assert_eq!(out.gates()[1].qubits(), &[2, 0]);
        assert!(matches!(base.append(&suffix, &[0]), Err(CircuitError::MapLength { .. })));
        assert!(matches!(base.append(&suffix, &[0, 3]), Err(CircuitError::QubitOutOfRange { .. })));
        assert!(matches!(base.append(&suffix, &[1, 1]), Err(CircuitError::MapNotInjective(1))));
        let measured = base.measure_all().unwrap();
        assert!(matches!(measured.append(&suffix, &[0, 1]), Err(CircuitError::HasMeasurements)));
    }

    #[test]
    fn measure_all_and_remove() {
        let c = Circuit::new(2);
        let m = c.measure_all().unwrap();
        assert_eq!(m.measurements(), &[(0, 0), (1, 1)]);
        assert!(matches!(m.measure_all(), Err(CircuitError::HasMeasurements)));
        assert_eq!(m.remove_final_measurements(), c);
        assert_eq!(c.remove_final_measurements(), c);

        let mut m = m;
        assert!(matches!(m.apply(GateKind::X, &[0], vec![]), Err(CircuitError::GateAfterMeasurement(0))));
        let mut c = Circuit::new(2);
        c.measure(0, 1).unwrap();
        assert!(matches!(c.measure(1, 1), Err(CircuitError::DuplicateClbit(1))));
        assert!(matches!(c.measure(0, 0), Err(CircuitError::AlreadyMeasured(0))));
    }

    #[test]
    fn bind_checks_domain() {
        let mut c = Circuit::new(1);
        c.rx("theta", 0);
        assert!(matches!(c.bind(&ParameterBinding::new()), Err(CircuitError::MissingSymbol(_))));
        let b: ParameterBinding = [("theta", 1.0), ("phi", 2.0)].into_iter().collect();
        assert!(matches!(c.bind(&b), Err(CircuitError::UnknownSymbol(s)) if s == "phi"));
        let b: ParameterBinding = [("theta", 1.0)].into_iter().collect();
        let bound = c.bind(&b).unwrap();
        assert_eq!(bound.gates()[0].params()[0], Param::Value(1.0));
        assert!(bound.free_symbols().is_empty());

        let plain = random_circuit(3, 4, 1);
        assert_eq!(plain.bind(&ParameterBinding::new()).unwrap(), plain);
    }

    #[test]
    fn stats_examples() {
        assert_eq!(Circuit::new(1).stats(), CircuitStats::default());
        let mut c = Circuit::new(2);
        c.cx(0, 1);
        assert_eq!(c.stats(), CircuitStats { depth: 1, two_qubit_count: 1, total_gates: 1 });
        let mut c = Circuit::new(2);
        c.h(0).cx(0, 1).h(1);
        assert_eq!(c.stats(), CircuitStats { depth: 3, two_qubit_count: 1, total_gates: 3 });
    }

    #[test]
    fn free_symbols_track_expressions() {
        let mut c = Circuit::new(2);
        c.rz(Param::Symbolic("2*(pi - a)*(pi - b)".parse().unwrap()), 1).ry("c", 0);
        let names: Vec<_> = c.free_symbols().into_iter().collect();
        assert_eq!(names, ["a", "b", "c"]);
    }
}
