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

//! Front-layer SWAP routing with bounded lookahead.
//!
//! Gates are executed as soon as all their predecessors have run and, for
//! two-qubit gates, their operands sit on coupled physical qubits. The
//! blocked two-qubit gates form the front layer. While it is non-empty we
//! pick the candidate SWAP (an edge touching a front-layer qubit) with the
//! lowest `front distance + weight * lookahead distance` among those that
//! strictly shrink the front distance. If no candidate shrinks it, the
//! oldest front gate is walked along a shortest path instead, which is what
//! keeps the loop from cycling.

use std::time::Instant;

use super::{remap_measurements, Layout, StageTimes, TranspileError, TranspileOptions, TranspiledCircuit};
use crate::backend::Topology;
use crate::circuit::{Circuit, Gate};

/// Output of [`route_gates`]: a physical-width circuit whose two-qubit gates
/// all sit on coupled pairs, plus the layout after the inserted SWAPs.
#[derive(Clone, Debug)]
pub struct Routed {
    pub circuit: Circuit,
    pub final_layout: Layout,
    pub swaps: usize,
}

struct Router<'a> {
    gates: &'a [Gate],
    topology: &'a Topology,
    window: usize,
    weight: f64,
    wires: Vec<Vec<usize>>,
    head: Vec<usize>,
    executed: Vec<bool>,
    in_front: Vec<bool>,
    front: Vec<usize>,
    cursor: usize,
    layout: Layout,
    p2v: Vec<Option<usize>>,
    out: Vec<Gate>,
    swaps: usize,
}

impl<'a> Router<'a> {
    fn new(circuit: &'a Circuit, layout: &Layout, topology: &'a Topology, opts: &TranspileOptions) -> Self {
        let gates = circuit.gates();
        let mut wires = vec![Vec::new(); circuit.num_qubits()];
        for (i, g) in gates.iter().enumerate() {
            for &q in g.qubits() {
                wires[q].push(i);
            }
        }
        Router {
            gates,
            topology,
            window: opts.lookahead_window,
            weight: opts.lookahead_weight,
            wires,
            head: vec![0; circuit.num_qubits()],
            executed: vec![false; gates.len()],
            in_front: vec![false; gates.len()],
            front: Vec::new(),
            cursor: 0,
            p2v: layout.p2v(),
            layout: layout.clone(),
            out: Vec::with_capacity(gates.len()),
            swaps: 0,
        }
    }

    fn is_ready(&self, g: usize) -> bool {
        self.gates[g].qubits().iter().all(|&q| self.wires[q].get(self.head[q]) == Some(&g))
    }

    fn emit(&mut self, g: usize) {
        let gate = &self.gates[g];
        self.executed[g] = true;
        if self.in_front[g] {
            self.in_front[g] = false;
            self.front.retain(|&f| f != g);
        }
        for &q in gate.qubits() {
            self.head[q] += 1;
        }
        let layout = &self.layout;
        self.out.push(gate.remapped(|q| layout.physical(q)));
    }

    /// Execute everything reachable from `stack` without inserting SWAPs.
    fn drain(&mut self, mut stack: Vec<usize>) {
        while let Some(g) = stack.pop() {
            if self.executed[g] || !self.is_ready(g) {
                continue;
            }
            if let [a, b] = *self.gates[g].qubits() {
                if !self.topology.is_coupled(self.layout.physical(a), self.layout.physical(b)) {
                    if !self.in_front[g] {
                        self.in_front[g] = true;
                        self.front.push(g);
                    }
                    continue;
                }
            }
            self.emit(g);
            for &q in self.gates[g].qubits() {
                if let Some(&next) = self.wires[q].get(self.head[q]) {
                    stack.push(next);
                }
            }
        }
    }

    fn pair(&self, g: usize) -> (usize, usize) {
        let q = self.gates[g].qubits();
        (q[0], q[1])
    }

    fn lookahead(&mut self) -> Vec<(usize, usize)> {
        while self.cursor < self.gates.len() && self.executed[self.cursor] {
            self.cursor += 1;
        }
        let mut out = Vec::with_capacity(self.window);
        let mut i = self.cursor;
        while out.len() < self.window && i < self.gates.len() {
            if !self.executed[i] && !self.in_front[i] && self.gates[i].kind().is_two_qubit() {
                out.push(self.pair(i));
            }
            i += 1;
        }
        out
    }

    /// Distance sum over `pairs` with physical qubits `x` and `y` exchanged.
    fn swapped_distance(&self, pairs: &[(usize, usize)], x: usize, y: usize) -> u32 {
        let dist = self.topology.distances();
        let pos = |v: usize| {
            let p = self.layout.physical(v);
            if p == x {
                y
            } else if p == y {
                x
            } else {
                p
            }
        };
        pairs.iter().map(|&(a, b)| dist.get(pos(a), pos(b))).sum()
    }

    fn choose_swap(&mut self) -> (usize, usize) {
        let front: Vec<(usize, usize)> = self.front.iter().map(|&g| self.pair(g)).collect();
        let dist = self.topology.distances();
        let current: u32 = front.iter().map(|&(a, b)| dist.get(self.layout.physical(a), self.layout.physical(b))).sum();
        let ahead = self.lookahead();
        let edges = self.topology.edges();

        let mut candidates: Vec<usize> = Vec::new();
        for &(a, b) in &front {
            for p in [self.layout.physical(a), self.layout.physical(b)] {
                for &nb in self.topology.neighbors(p) {
                    let key = (p.min(nb), p.max(nb));
                    candidates.push(edges.binary_search(&key).expect("neighbor pairs are edges"));
                }
            }
        }
        candidates.sort_unstable();
        candidates.dedup();

        let mut best: Option<(f64, usize)> = None;
        for idx in candidates {
            let (x, y) = edges[idx];
            let f = self.swapped_distance(&front, x, y);
            if f >= current {
                continue;
            }
            let score = f64::from(f) + self.weight * f64::from(self.swapped_distance(&ahead, x, y));
            if best.is_none_or(|(s, _)| score < s) {
                best = Some((score, idx));
            }
        }
        if let Some((_, idx)) = best {
            return edges[idx];
        }

        // Release valve: step the oldest blocked gate one hop closer.
        let oldest = *self.front.iter().min().expect("front is non-empty");
        let (a, b) = self.pair(oldest);
        let (pa, pb) = (self.layout.physical(a), self.layout.physical(b));
        let target = dist.get(pa, pb) - 1;
        let nb = *self
            .topology
            .neighbors(pa)
            .iter()
            .find(|&&nb| dist.get(nb, pb) == target)
            .expect("a connected graph has a shortest-path neighbor");
        (pa, nb)
    }

    fn apply_swap(&mut self, a: usize, b: usize) {
        self.out.extend([Gate::cx(a, b), Gate::cx(b, a), Gate::cx(a, b)]);
        self.layout.swap_physical(a, b, &mut self.p2v);
        self.swaps += 1;
    }

    fn run(mut self) -> Result<Routed, TranspileError> {
        let budget = 10 * self.gates.len().max(1) * self.topology.num_physical();
        let initial: Vec<usize> = self.wires.iter().rev().filter_map(|w| w.first().copied()).collect();
        self.drain(initial);
        while !self.front.is_empty() {
            if self.swaps >= budget {
                return Err(TranspileError::RoutingDiverged(budget));
            }
            let (a, b) = self.choose_swap();
            self.apply_swap(a, b);
            let mut retry = self.front.clone();
            retry.reverse();
            self.drain(retry);
        }
        debug_assert!(self.executed.iter().all(|&e| e), "router left gates behind");
        Ok(Routed {
            circuit: Circuit::from_parts_unchecked(self.topology.num_physical(), self.out, Vec::new()),
            final_layout: self.layout,
            swaps: self.swaps,
        })
    }
}

fn check_layout(circuit: &Circuit, layout: &Layout, topology: &Topology) -> Result<(), TranspileError> {
    if layout.len() != circuit.num_qubits() || layout.num_physical() != topology.num_physical() || !layout.is_valid() {
        return Err(TranspileError::InvalidLayout(format!(
            "layout {:?} does not fit a {}-qubit circuit on {} physical qubits",
            layout.as_slice(),
            circuit.num_qubits(),
            topology.num_physical()
        )));
    }
    Ok(())
}

/// Route the gates of `circuit` (measurements are ignored) starting from
/// `layout`. SWAPs are emitted as three `cx`.
pub fn route_gates(
    circuit: &Circuit,
    layout: &Layout,
    topology: &Topology,
    opts: &TranspileOptions,
) -> Result<Routed, TranspileError> {
    check_layout(circuit, layout, topology)?;
    Router::new(circuit, layout, topology, opts).run()
}

/// Routing as a standalone stage: the result's physical circuit still uses
/// the virtual gate vocabulary, with measurements moved to the final layout.
pub fn route(
    circuit: &Circuit,
    layout: &Layout,
    topology: &Topology,
    opts: &TranspileOptions,
) -> Result<TranspiledCircuit, TranspileError> {
    let start = Instant::now();
    let routed = route_gates(circuit, layout, topology, opts)?;
    let mut physical = routed.circuit;
    remap_measurements(circuit.measurements(), &routed.final_layout, &mut physical)?;
    let elapsed = start.elapsed().as_secs_f64();
    Ok(TranspiledCircuit {
        physical,
        initial_layout: layout.clone(),
        final_layout: routed.final_layout,
        source_hash: super::circuit_hash(circuit),
        elapsed_seconds: elapsed,
        stage_seconds: StageTimes { routing: elapsed, ..StageTimes::default() },
        swaps_inserted: routed.swaps,
    })
}
