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

//! Incremental transpilation: reuse a compiled prefix and compile only the
//! appended suffix from the prefix's final layout.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, RwLock};
use std::time::Instant;

use sha2::{Digest, Sha256};

use crate::backend::Topology;
use crate::circuit::Circuit;
use crate::transpiler::{
    circuit_hash, optimize_in, remap_measurements, run_backend_stages, transpile, unroll, StageTimes, TranspileError,
    TranspileOptions, TranspiledCircuit,
};

/// Knobs specific to stitching.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StitchOptions {
    /// Re-run the optimizer over the joined circuit so gates at the seam can
    /// merge. The prefix gates in the result may then differ from `left`.
    pub cross_seam: bool,
}

/// Digest identifying `left`'s source followed by `right`.
pub fn stitched_hash(left: &TranspiledCircuit, right: &Circuit) -> String {
    let mut h = Sha256::new();
    h.update(left.source_hash.as_bytes());
    h.update(b"|");
    h.update(circuit_hash(right).as_bytes());
    hex::encode(h.finalize())
}

/// Append `right` to an already transpiled, measurement-free `left`.
pub fn transpile_right(
    left: &TranspiledCircuit,
    right: &Circuit,
    topology: &Topology,
    opts: &TranspileOptions,
) -> Result<TranspiledCircuit, TranspileError> {
    transpile_right_with(left, right, topology, opts, &StitchOptions::default())
}

pub fn transpile_right_with(
    left: &TranspiledCircuit,
    right: &Circuit,
    topology: &Topology,
    opts: &TranspileOptions,
    stitch: &StitchOptions,
) -> Result<TranspiledCircuit, TranspileError> {
    opts.validate()?;
    if left.physical.has_measurements() {
        return Err(TranspileError::LeftHasMeasurements);
    }
    if right.num_qubits() != left.final_layout.len() {
        return Err(TranspileError::WidthMismatch { suffix: right.num_qubits(), prefix: left.final_layout.len() });
    }
    if left.physical.num_qubits() != topology.num_physical() {
        return Err(TranspileError::InvalidLayout(format!(
            "prefix was compiled for {} physical qubits, device has {}",
            left.physical.num_qubits(),
            topology.num_physical()
        )));
    }

    let start = Instant::now();
    let mut times = StageTimes::default();
    let body = unroll(&right.remove_final_measurements());
    let suffix = run_backend_stages(&body, left.final_layout.clone(), topology, opts, &mut times)?;

    let mut gates = Vec::with_capacity(left.physical.len() + suffix.physical.len());
    gates.extend_from_slice(left.physical.gates());
    gates.extend_from_slice(suffix.physical.gates());
    let mut physical = Circuit::from_parts_unchecked(topology.num_physical(), gates, Vec::new());
    if stitch.cross_seam {
        let t = Instant::now();
        physical = optimize_in(&physical, opts.optimization_level, topology.basis());
        times.optimization += t.elapsed().as_secs_f64();
    }
    remap_measurements(right.measurements(), &suffix.final_layout, &mut physical)?;

    Ok(TranspiledCircuit {
        physical,
        initial_layout: left.initial_layout.clone(),
        final_layout: suffix.final_layout,
        source_hash: stitched_hash(left, right),
        elapsed_seconds: start.elapsed().as_secs_f64(),
        stage_seconds: times,
        swaps_inserted: left.swaps_inserted + suffix.swaps_inserted,
    })
}

/// Fold [`transpile_right`] over `suffixes`, returning every intermediate
/// result. Suffix measurements are only allowed on the last element.
pub fn transpile_chain(
    prefix: &TranspiledCircuit,
    suffixes: &[Circuit],
    topology: &Topology,
    opts: &TranspileOptions,
) -> Result<Vec<TranspiledCircuit>, TranspileError> {
    let mut out: Vec<TranspiledCircuit> = Vec::with_capacity(suffixes.len());
    for suffix in suffixes {
        let left = out.last().unwrap_or(prefix);
        let next = transpile_right(left, suffix, topology, opts)?;
        out.push(next);
    }
    Ok(out)
}

type CacheKey = (String, String, String);

/// Concurrent memo of transpiled circuits keyed by source hash, device
/// fingerprint and option fingerprint. Entries compiled under different
/// options never satisfy a lookup.
#[derive(Debug, Default)]
pub struct StitchCache {
    entries: RwLock<HashMap<CacheKey, Arc<TranspiledCircuit>>>,
    hits: AtomicU64,
    misses: AtomicU64,
}

impl StitchCache {
    pub fn new() -> Self {
        Self::default()
    }

    fn key(source_hash: &str, topology: &Topology, opts: &TranspileOptions) -> CacheKey {
        (source_hash.to_owned(), topology.fingerprint().to_owned(), opts.fingerprint())
    }

    pub fn get(
        &self,
        source_hash: &str,
        topology: &Topology,
        opts: &TranspileOptions,
    ) -> Option<Arc<TranspiledCircuit>> {
        let key = Self::key(source_hash, topology, opts);
        let found = self.entries.read().expect("cache lock poisoned").get(&key).cloned();
        let counter = if found.is_some() { &self.hits } else { &self.misses };
        counter.fetch_add(1, Ordering::Relaxed);
        found
    }

    pub fn insert(
        &self,
        value: TranspiledCircuit,
        topology: &Topology,
        opts: &TranspileOptions,
    ) -> Arc<TranspiledCircuit> {
        let key = Self::key(&value.source_hash, topology, opts);
        let value = Arc::new(value);
        self.entries.write().expect("cache lock poisoned").insert(key, Arc::clone(&value));
        value
    }

    /// Cached [`transpile`].
    pub fn transpile(
        &self,
        circuit: &Circuit,
        topology: &Topology,
        opts: &TranspileOptions,
    ) -> Result<Arc<TranspiledCircuit>, TranspileError> {
        if let Some(hit) = self.get(&circuit_hash(circuit), topology, opts) {
            return Ok(hit);
        }
        Ok(self.insert(transpile(circuit, topology, opts)?, topology, opts))
    }

    /// Cached [`transpile_right`].
    pub fn transpile_right(
        &self,
        left: &TranspiledCircuit,
        right: &Circuit,
        topology: &Topology,
        opts: &TranspileOptions,
    ) -> Result<Arc<TranspiledCircuit>, TranspileError> {
        if let Some(hit) = self.get(&stitched_hash(left, right), topology, opts) {
            return Ok(hit);
        }
        Ok(self.insert(transpile_right(left, right, topology, opts)?, topology, opts))
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("cache lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `(hits, misses)` since construction.
    pub fn stats(&self) -> (u64, u64) {
        (self.hits.load(Ordering::Relaxed), self.misses.load(Ordering::Relaxed))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::builtin_topology;
    use crate::circuit::random_circuit;
    use crate::verify::semantic_distance;

    fn prefix(t: &Topology, seed: u64) -> (Circuit, TranspiledCircuit) {
        let c = random_circuit(4, 6, seed);
        let out = transpile(&c, t, &TranspileOptions::default()).unwrap();
        (c, out)
    }

    #[test]
    fn empty_suffix_is_identity() {
        let t = builtin_topology("ring-5").unwrap();
        let (_, left) = prefix(&t, 1);
        let out = transpile_right(&left, &Circuit::new(4), &t, &TranspileOptions::default()).unwrap();
        assert_eq!(out.physical, left.physical);
        assert_eq!(out.final_layout, left.final_layout);
        assert_eq!(out.initial_layout, left.initial_layout);
    }

    #[test]
    fn stitched_state_matches_virtual() {
        let t = builtin_topology("grid-2x3").unwrap();
        for seed in 0..10 {
            let (virt, left) = prefix(&t, seed);
            let suffix = random_circuit(4, 5, seed + 100);
            let out = transpile_right(&left, &suffix, &t, &TranspileOptions::default()).unwrap();
            out.check_invariants(&t).unwrap();
            let joined = virt.compose(&suffix).unwrap();
            assert!(semantic_distance(&joined, &out).unwrap() < 1e-9, "seed {seed}");
        }
    }

    #[test]
    fn prefix_is_untouched() {
        let t = builtin_topology("linear-5").unwrap();
        let (_, left) = prefix(&t, 3);
        let before = left.clone();
        let out = transpile_right(&left, &random_circuit(4, 4, 9), &t, &TranspileOptions::default()).unwrap();
        assert_eq!(left, before);
        assert_eq!(&out.physical.gates()[..left.physical.len()], left.physical.gates());
    }

    #[test]
    fn errors() {
        let t = builtin_topology("linear-5").unwrap();
        let (_, left) = prefix(&t, 3);
        let opts = TranspileOptions::default();
        assert!(matches!(
            transpile_right(&left, &Circuit::new(3), &t, &opts),
            Err(TranspileError::WidthMismatch { suffix: 3, prefix: 4 })
        ));
        let measured = transpile(&random_circuit(4, 3, 0).measure_all().unwrap(), &t, &opts).unwrap();
        assert!(matches!(
            transpile_right(&measured, &Circuit::new(4), &t, &opts),
            Err(TranspileError::LeftHasMeasurements)
        ));
    }

    #[test]
    fn chain_returns_every_step() {
        let t = builtin_topology("ring-5").unwrap();
        let (_, left) = prefix(&t, 5);
        let empties = vec![Circuit::new(4); 3];
        let chain = transpile_chain(&left, &empties, &t, &TranspileOptions::default()).unwrap();
        assert_eq!(chain.len(), 3);
        assert!(chain.iter().all(|c| c.physical == left.physical));

        let one = [random_circuit(4, 3, 7)];
        let chain = transpile_chain(&left, &one, &t, &TranspileOptions::default()).unwrap();
        let direct = transpile_right(&left, &one[0], &t, &TranspileOptions::default()).unwrap();
        assert_eq!(chain[0].physical, direct.physical);
    }

    #[test]
    fn cross_seam_merges_but_preserves_state() {
        let t = builtin_topology("linear-3").unwrap();
        let mut virt = Circuit::new(2);
        virt.rz(0.3, 0);
        let left = transpile(&virt, &t, &TranspileOptions::default()).unwrap();
        let mut suffix = Circuit::new(2);
        suffix.rz(0.4, 0);
        let opts = TranspileOptions::default();
        let plain = transpile_right(&left, &suffix, &t, &opts).unwrap();
        let merged = transpile_right_with(&left, &suffix, &t, &opts, &StitchOptions { cross_seam: true }).unwrap();
        assert_eq!(plain.physical.len(), 2);
        assert_eq!(merged.physical.len(), 1);
        let joined = virt.compose(&suffix).unwrap();
        assert!(semantic_distance(&joined, &merged).unwrap() < 1e-9);
    }

    #[test]
    fn cache_rejects_other_options() {
        let t = builtin_topology("ring-5").unwrap();
        let c = random_circuit(4, 5, 11);
        let cache = StitchCache::new();
        let level3 = TranspileOptions::default();
        let a = cache.transpile(&c, &t, &level3).unwrap();
        let b = cache.transpile(&c, &t, &level3).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        assert!(cache.get(&circuit_hash(&c), &t, &TranspileOptions::with_level(1)).is_none());
        assert_eq!(cache.stats(), (1, 2));

        let other = builtin_topology("linear-5").unwrap();
        assert!(cache.get(&circuit_hash(&c), &other, &level3).is_none());
        cache.transpile_right(&a, &random_circuit(4, 2, 1), &t, &level3).unwrap();
        assert_eq!(cache.len(), 2);
    }
}
