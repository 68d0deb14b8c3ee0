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

mod common;

use std::collections::BTreeSet;
use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::FileFailurePersistence;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rivetlite::backend::{builtin_topology, Topology};
use rivetlite::circuit::{random_circuit, Circuit, Gate, GateKind, Param, ParameterBinding};
use rivetlite::sim::Simulator;
use rivetlite::transpiler::{
    decompose_single_qubit, optimize, optimize_in, translate, transpile, unroll, TranspileOptions,
};

use common::{compiled_distance, matrix_distance_up_to_phase, phase_distance, state, unitary};

const TOL: f64 = 1e-9;
const DEVICES: [&str; 4] = ["linear-8", "ring-8", "grid-3x3", "heavyhex-27"];

fn basis(kinds: &[GateKind]) -> BTreeSet<GateKind> {
    kinds.iter().copied().collect()
}

fn single_gate(kind: GateKind, rng: &mut ChaCha8Rng) -> Circuit {
    let n = kind.num_qubits().max(2);
    let mut c = Circuit::new(n);
    let qubits: Vec<usize> = if kind.num_qubits() == 2 { vec![1, 0] } else { vec![1] };
    let params = (0..kind.num_params()).map(|_| Param::Value(rng.gen_range(-PI..PI))).collect();
    c.apply(kind, &qubits, params).unwrap();
    c
}

#[test]
fn oracle_agrees_with_simulator() {
    let sim = Simulator::default();
    for seed in 0..40 {
        let n = 1 + (seed as usize % 5);
        let c = random_circuit(n, 6, seed);
        let got = sim.statevector(&c, &ParameterBinding::new()).unwrap();
        assert!(phase_distance(got.amplitudes(), &state(&c)) < 1e-12, "seed {seed}");
    }
}

#[test]
fn every_rule_preserves_the_unitary() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let bases = [
        Topology::default_basis(),
        basis(&[GateKind::RZ, GateKind::SX, GateKind::CZ]),
        basis(&[GateKind::RZ, GateKind::SX, GateKind::X, GateKind::CX, GateKind::CZ]),
    ];
    for b in &bases {
        for kind in GateKind::ALL {
            for _ in 0..5 {
                let c = single_gate(kind, &mut rng);
                let t = translate(&c, b).unwrap();
                assert!(t.gates().iter().all(|g| b.contains(&g.kind())), "{kind:?} left non-basis gates");
                let d = matrix_distance_up_to_phase(&unitary(&t), &unitary(&c));
                assert!(d <= TOL, "{kind:?} in {b:?}: {d}");
            }
        }
    }
}

#[test]
fn zyz_synthesis_matches_random_unitaries() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let with_x = Topology::default_basis();
    let without_x = basis(&[GateKind::RZ, GateKind::SX, GateKind::CX]);
    for case in 0..200 {
        let (t, p, l) = match case % 4 {
            0 => (0.0, rng.gen_range(-PI..PI), rng.gen_range(-PI..PI)),
            1 => (PI, rng.gen_range(-PI..PI), rng.gen_range(-PI..PI)),
            2 => (PI / 2.0, rng.gen_range(-PI..PI), rng.gen_range(-PI..PI)),
            _ => (rng.gen_range(0.0..PI), rng.gen_range(-PI..PI), rng.gen_range(-PI..PI)),
        };
        let mut c = Circuit::new(1);
        c.u(t, p, l, 0);
        let m = common::gate_matrix(GateKind::U, &[t, p, l]);
        let mat = [[m[0][0], m[0][1]], [m[1][0], m[1][1]]];
        for b in [&with_x, &without_x] {
            let mut out = Circuit::new(1);
            for g in decompose_single_qubit(&mat, 0, b) {
                assert!(b.contains(&g.kind()));
                out.push(g).unwrap();
            }
            assert!(out.len() <= 5);
            let d = matrix_distance_up_to_phase(&unitary(&out), &m);
            assert!(d <= TOL, "case {case}: {d}");
        }
    }
}

#[test]
fn peephole_rewrites_preserve_the_unitary() {
    let cases: Vec<Circuit> = vec![
        {
            let mut c = Circuit::new(1);
            c.rz(0.3, 0).rz(-1.1, 0).rz(0.8, 0);
            c
        },
        {
            let mut c = Circuit::new(2);
            c.cx(0, 1).cx(0, 1).rz(2.0 * PI, 1);
            c
        },
        {
            let mut c = Circuit::new(3);
            c.cx(0, 1).cz(1, 2).cz(1, 2).cx(0, 1).sx(2).sx(2);
            c
        },
        {
            let mut c = Circuit::new(2);
            c.sx(0).rz(0.4, 0).sx(0).rz(1.3, 0).sx(0).rz(-0.2, 0).cx(1, 0).cx(0, 1);
            c
        },
    ];
    for c in &cases {
        for level in 0..=3 {
            let o = optimize(c, level);
            assert!(o.len() <= c.len());
            let d = matrix_distance_up_to_phase(&unitary(&o), &unitary(c));
            assert!(d <= TOL, "level {level}: {d}");
        }
    }
}

#[test]
fn optimization_levels_on_translated_circuits() {
    let b = Topology::default_basis();
    for seed in 0..30 {
        let c = translate(&unroll(&random_circuit(3, 8, seed)), &b).unwrap();
        let u = unitary(&c);
        let mut previous = c.len();
        for level in 1..=3 {
            let o = optimize_in(&c, level, &b);
            assert!(o.gates().iter().all(|g| b.contains(&g.kind())));
            assert!(o.len() <= c.len());
            assert!(matrix_distance_up_to_phase(&unitary(&o), &u) <= TOL, "seed {seed} level {level}");
            if level >= 2 {
                assert!(o.len() <= previous, "seed {seed} level {level} grew");
            }
            previous = o.len();
        }
    }
}

#[test]
fn compiled_circuits_keep_their_measurements_on_final_positions() {
    let topo = builtin_topology("heavyhex-27").unwrap();
    let c = random_circuit(5, 10, 3).measure_all().unwrap();
    let t = transpile(&c, &topo, &TranspileOptions::default()).unwrap();
    t.check_invariants(&topo).unwrap();
    let mut expected: Vec<(usize, usize)> = (0..5).map(|v| (t.final_layout.physical(v), v)).collect();
    let mut got = t.physical.measurements().to_vec();
    expected.sort_unstable();
    got.sort_unstable();
    assert_eq!(got, expected);
}

#[test]
fn symbolic_angles_survive_compilation() {
    let topo = builtin_topology("linear-4").unwrap();
    let mut c = Circuit::new(3);
    c.h(0).ry(Param::symbol("a"), 1).cx(0, 2).rz(Param::symbol("b"), 2).rx(Param::symbol("a"), 0);
    let t = transpile(&c, &topo, &TranspileOptions::default()).unwrap();
    t.check_invariants(&topo).unwrap();
    for (a, b) in [(0.3, -1.2), (2.0, 0.5)] {
        let binding: ParameterBinding = [("a", a), ("b", b)].into_iter().collect();
        assert!(compiled_distance(&c, &t, &binding) < TOL);
    }
}

#[test]
fn oracle_sees_a_broken_compile() {
    let topo = builtin_topology("linear-3").unwrap();
    let mut c = Circuit::new(2);
    c.h(0).cx(0, 1);
    let mut t = transpile(&c, &topo, &TranspileOptions::default()).unwrap();
    let mut tampered = t.physical.clone();
    tampered.push(Gate::new(GateKind::X, &[t.final_layout.physical(1)], vec![]).unwrap()).unwrap();
    t.physical = tampered;
    assert!(compiled_distance(&c, &t, &ParameterBinding::new()) > 0.1);
}

#[test]
fn complex_helper_is_sane() {
    let a = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
    let b = vec![Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)];
    assert!(phase_distance(&a, &b) < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 48,
        failure_persistence: Some(Box::new(FileFailurePersistence::Off)),
        ..ProptestConfig::default()
    })]

    #[test]
    fn compile_is_valid_and_faithful(
        n in 2usize..=5,
        depth in 1usize..=12,
        seed in any::<u64>(),
        device in 0usize..DEVICES.len(),
        level in 0u8..=3,
    ) {
        let topo = builtin_topology(DEVICES[device]).unwrap();
        let c = random_circuit(n, depth, seed);
        let opts = TranspileOptions { optimization_level: level, seed, ..TranspileOptions::default() };
        let t = transpile(&c, &topo, &opts).unwrap();
        prop_assert!(t.check_invariants(&topo).is_ok());
        let d = compiled_distance(&c, &t, &ParameterBinding::new());
        prop_assert!(d < TOL, "distance {}", d);
    }

    #[test]
    fn compile_is_deterministic(n in 2usize..=6, seed in any::<u64>(), device in 0usize..DEVICES.len()) {
        let topo = builtin_topology(DEVICES[device]).unwrap();
        let c = random_circuit(n, 8, seed);
        let opts = TranspileOptions { seed, ..TranspileOptions::default() };
        let a = transpile(&c, &topo, &opts).unwrap();
        let b = transpile(&c, &topo, &opts).unwrap();
        prop_assert_eq!(a.physical.to_json(), b.physical.to_json());
        prop_assert_eq!(a.initial_layout, b.initial_layout);
        prop_assert_eq!(a.final_layout, b.final_layout);
    }

    #[test]
    fn unroll_and_translate_preserve_state(seed in any::<u64>(), n in 1usize..=4) {
        let c = random_circuit(n, 6, seed);
        let t = translate(&unroll(&c), &Topology::default_basis()).unwrap();
        prop_assert!(phase_distance(&state(&t), &state(&c)) < TOL);
    }
}
