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

use std::collections::BTreeMap;

use super::{Layout, TranspileError, TranspileOptions};
use crate::backend::Topology;
use crate::circuit::Circuit;

/// Weight of the path error term relative to hop count in placement scores.
pub const LAYOUT_NOISE_WEIGHT: f64 = 10.0;

/// Pick an initial placement.
///
/// Level 0 keeps the trivial layout. Higher levels place virtual qubits
/// greedily in order of descending two-qubit interaction count; each goes to
/// the free physical qubit minimizing
/// `sum over placed partners u of count(v, u) * (hops - 1 + LAYOUT_NOISE_WEIGHT * path_error)`,
/// with ties going to the lowest physical index.
pub fn choose_layout(
    circuit: &Circuit,
    topology: &Topology,
    opts: &TranspileOptions,
) -> Result<Layout, TranspileError> {
    let n = circuit.num_qubits();
    let num_physical = topology.num_physical();
    if n > num_physical {
        return Err(TranspileError::WiderThanDevice { circuit: n, device: num_physical });
    }
    if opts.optimization_level == 0 {
        return Ok(Layout::trivial(n, num_physical));
    }

    let mut weights: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut degree = vec![0usize; n];
    for g in circuit.gates() {
        if let [a, b] = *g.qubits() {
            *weights.entry((a.min(b), a.max(b))).or_default() += 1;
            degree[a] += 1;
            degree[b] += 1;
        }
    }
    let mut partners: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (&(a, b), &w) in &weights {
        partners[a].push((b, w));
        partners[b].push((a, w));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| degree[b].cmp(&degree[a]).then(a.cmp(&b)));

    let dist = topology.distances();
    let mut placed: Vec<Option<usize>> = vec![None; n];
    let mut occupied = vec![false; num_physical];
    for &v in &order {
        let mut best: Option<(f64, usize)> = None;
        for p in (0..num_physical).filter(|&p| !occupied[p]) {
            let score: f64 = partners[v]
                .iter()
                .filter_map(|&(u, w)| placed[u].map(|pu| (pu, w)))
                .map(|(pu, w)| {
                    let hops = f64::from(dist.get(p, pu)) - 1.0;
                    w as f64 * (hops + LAYOUT_NOISE_WEIGHT * topology.path_error(p, pu))
                })
                .sum();
            if best.is_none_or(|(s, _)| score < s) {
                best = Some((score, p));
            }
        }
        let (_, p) = best.expect("device has a free qubit");
        placed[v] = Some(p);
        occupied[p] = true;
    }
    Layout::new(placed.into_iter().map(|p| p.expect("all placed")).collect(), num_physical)
}
