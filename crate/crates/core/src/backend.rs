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

//! Device models: coupling graph, native basis and error rates.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::circuit::GateKind;

const HEAVYHEX_27: &str = include_str!("../data/heavyhex27.json");

/// Seed used to synthesize error rates for builtin devices.
pub const DEFAULT_ERROR_SEED: u64 = 27;

#[derive(Debug, Error)]
pub enum BackendError {
    #[error("unknown builtin topology {0:?} (expected linear-N, ring-N, grid-RxC or heavyhex-27)")]
    UnknownTopology(String),
    #[error("topology must have at least one physical qubit")]
    Empty,
    #[error("edge ({0}, {1}) references a qubit outside the device")]
    EdgeOutOfRange(usize, usize),
    #[error("self-loop on qubit {0}")]
    SelfLoop(usize),
    #[error("coupling graph is disconnected (qubit {0} unreachable from qubit 0)")]
    Disconnected(usize),
    #[error("basis {0:?} is not supported: need rz and sx plus cx or cz")]
    UnsupportedBasis(Vec<String>),
    #[error("error rate {0} outside [0, 1]")]
    ErrorRate(f64),
    #[error("{what} has {got} entries for {n} qubits")]
    ErrorVectorLength { what: &'static str, got: usize, n: usize },
    #[error("bad edge key {0:?}; expected \"a-b\"")]
    EdgeKey(String),
    #[error("error rate given for ({0}, {1}) which is not an edge")]
    NotAnEdge(usize, usize),
    #[error("unknown gate in basis: {0}")]
    Basis(String),
    #[error("reading backend file: {0}")]
    Io(#[from] std::io::Error),
    #[error("parsing backend JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// All-pairs hop counts of a coupling graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    hops: Vec<u32>,
}

impl DistanceMatrix {
    /// BFS from every qubit.
    pub fn from_adjacency(adjacency: &[Vec<usize>]) -> Result<Self, BackendError> {
        let n = adjacency.len();
        let mut hops = vec![u32::MAX; n * n];
        let mut queue = VecDeque::new();
        for src in 0..n {
            let row = &mut hops[src * n..(src + 1) * n];
            row[src] = 0;
            queue.push_back(src);
            while let Some(u) = queue.pop_front() {
                for &v in &adjacency[u] {
                    if row[v] == u32::MAX {
                        row[v] = row[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
            if let Some(unreached) = row.iter().position(|&d| d == u32::MAX) {
                return Err(BackendError::Disconnected(if src == 0 { unreached } else { src }));
            }
        }
        Ok(Self { n, hops })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> u32 {
        self.hops[a * self.n + b]
    }

    pub fn max(&self) -> u32 {
        self.hops.iter().copied().max().unwrap_or(0)
    }
}

/// A physical device.
#[derive(Clone, Debug)]
pub struct Topology {
    name: String,
    num_physical: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    coupled: Vec<bool>,
    basis: BTreeSet<GateKind>,
    edge_error: BTreeMap<(usize, usize), f64>,
    qubit_error: Vec<f64>,
    readout_error: Vec<f64>,
    distances: DistanceMatrix,
    path_error: Vec<f64>,
    fingerprint: String,
}

/// Optional error data; missing pieces are synthesized from the seed.
#[derive(Clone, Debug, Default)]
pub struct ErrorRates {
    pub edge_error: Option<BTreeMap<(usize, usize), f64>>,
    pub qubit_error: Option<Vec<f64>>,
    pub readout_error: Option<Vec<f64>>,
}

fn normalize(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

impl Topology {
    pub fn default_basis() -> BTreeSet<GateKind> {
        [GateKind::RZ, GateKind::SX, GateKind::X, GateKind::CX].into_iter().collect()
    }

    /// Validate and build a device. Error rates not supplied in `rates` are
    /// drawn uniformly (edges in [0.005, 0.03], single-qubit in
    /// [0.0002, 0.001], readout in [0.01, 0.05]) from `seed`.
    pub fn new(
        name: impl Into<String>,
        num_physical: usize,
        edges: &[(usize, usize)],
        basis: BTreeSet<GateKind>,
        rates: ErrorRates,
        seed: u64,
    ) -> Result<Self, BackendError> {
        if num_physical == 0 {
            return Err(BackendError::Empty);
        }
        let mut edge_set = BTreeSet::new();
        for &(a, b) in edges {
            if a >= num_physical || b >= num_physical {
                return Err(BackendError::EdgeOutOfRange(a, b));
            }
            if a == b {
                return Err(BackendError::SelfLoop(a));
            }
            edge_set.insert(normalize(a, b));
        }
        let edges: Vec<(usize, usize)> = edge_set.into_iter().collect();
        let has_2q = basis.contains(&GateKind::CX) || basis.contains(&GateKind::CZ);
        let has_1q = basis.contains(&GateKind::RZ) && basis.contains(&GateKind::SX);
        if !(has_2q && has_1q) || basis.contains(&GateKind::Swap) {
            return Err(BackendError::UnsupportedBasis(basis.iter().map(|k| k.name().to_owned()).collect()));
        }

        let mut adjacency = vec![Vec::new(); num_physical];
        let mut coupled = vec![false; num_physical * num_physical];
        for &(a, b) in &edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
            coupled[a * num_physical + b] = true;
            coupled[b * num_physical + a] = true;
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        let distances = DistanceMatrix::from_adjacency(&adjacency)?;

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let synth_edges: BTreeMap<_, _> = edges.iter().map(|&e| (e, rng.gen_range(0.005..0.03))).collect();
        let synth_qubit: Vec<f64> = (0..num_physical).map(|_| rng.gen_range(0.0002..0.001)).collect();
        let synth_readout: Vec<f64> = (0..num_physical).map(|_| rng.gen_range(0.01..0.05)).collect();

        let mut edge_error = synth_edges;
        if let Some(given) = rates.edge_error {
            for (&(a, b), &p) in &given {
                let key = normalize(a, b);
                if !edge_error.contains_key(&key) {
                    return Err(BackendError::NotAnEdge(a, b));
                }
                edge_error.insert(key, p);
            }
        }
        let qubit_error = rates.qubit_error.unwrap_or(synth_qubit);
        let readout_error = rates.readout_error.unwrap_or(synth_readout);
        for (what, v) in [("qubit_error", &qubit_error), ("readout_error", &readout_error)] {
            if v.len() != num_physical {
                return Err(BackendError::ErrorVectorLength { what, got: v.len(), n: num_physical });
            }
        }
        if let Some(&bad) =
            edge_error.values().chain(&qubit_error).chain(&readout_error).find(|p| !(0.0..=1.0).contains(*p))
        {
            return Err(BackendError::ErrorRate(bad));
        }

        let path_error = min_path_error(&adjacency, &distances, &edge_error);
        let mut topo = Topology {
            name: name.into(),
            num_physical,
            edges,
            adjacency,
            coupled,
            basis,
            edge_error,
            qubit_error,
            readout_error,
            distances,
            path_error,
            fingerprint: String::new(),
        };
        topo.fingerprint = hex::encode(Sha256::digest(topo.to_json().as_bytes()));
        Ok(topo)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_physical(&self) -> usize {
        self.num_physical
    }

    /// Undirected edges, each as `(low, high)`, in ascending order. The
    /// position in this list is the edge index used for tie-breaks.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, q: usize) -> &[usize] {
        &self.adjacency[q]
    }

    #[inline]
    pub fn is_coupled(&self, a: usize, b: usize) -> bool {
        self.coupled[a * self.num_physical + b]
    }

    pub fn basis(&self) -> &BTreeSet<GateKind> {
        &self.basis
    }

    pub fn supports(&self, kind: GateKind) -> bool {
        self.basis.contains(&kind)
    }

    pub fn edge_error(&self, a: usize, b: usize) -> Option<f64> {
        self.edge_error.get(&normalize(a, b)).copied()
    }

    pub fn qubit_error(&self) -> &[f64] {
        &self.qubit_error
    }

    pub fn readout_error(&self) -> &[f64] {
        &self.readout_error
    }

    pub fn distances(&self) -> &DistanceMatrix {
        &self.distances
    }

    /// Smallest summed edge error over the shortest paths from `a` to `b`.
    #[inline]
    pub fn path_error(&self, a: usize, b: usize) -> f64 {
        self.path_error[a * self.num_physical + b]
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Hex SHA-256 of the canonical backend JSON.
    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&TopologyRepr::from(self)).expect("topology JSON is always serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, BackendError> {
        let repr: TopologyRepr = serde_json::from_str(text)?;
        repr.into_topology(DEFAULT_ERROR_SEED)
    }

    pub fn from_file(path: &Path) -> Result<Self, BackendError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

fn min_path_error(
    adjacency: &[Vec<usize>],
    distances: &DistanceMatrix,
    edge_error: &BTreeMap<(usize, usize), f64>,
) -> Vec<f64> {
    let n = adjacency.len();
    let mut out = vec![0.0; n * n];
    for src in 0..n {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| distances.get(src, v));
        let row = &mut out[src * n..(src + 1) * n];
        for &v in order.iter().skip(1) {
            let dv = distances.get(src, v);
            row[v] = adjacency[v]
                .iter()
                .filter(|&&u| distances.get(src, u) + 1 == dv)
                .map(|&u| row[u] + edge_error[&normalize(u, v)])
                .fold(f64::INFINITY, f64::min);
        }
    }
    out
}

#[derive(Serialize, Deserialize)]
struct TopologyRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    n: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default)]
    basis: Option<Vec<String>>,
    #[serde(default)]
    edge_error: Option<BTreeMap<String, f64>>,
    #[serde(default)]
    qubit_error: Option<Vec<f64>>,
    #[serde(default)]
    readout_error: Option<Vec<f64>>,
}

impl From<&Topology> for TopologyRepr {
    fn from(t: &Topology) -> Self {
        TopologyRepr {
            name: Some(t.name.clone()),
            n: t.num_physical,
            edges: t.edges.iter().map(|&(a, b)| [a, b]).collect(),
            basis: Some(t.basis.iter().map(|k| k.name().to_owned()).collect()),
            edge_error: Some(t.edge_error.iter().map(|(&(a, b), &p)| (format!("{a}-{b}"), p)).collect()),
            qubit_error: Some(t.qubit_error.clone()),
            readout_error: Some(t.readout_error.clone()),
        }
    }
}

impl TopologyRepr {
    fn into_topology(self, seed: u64) -> Result<Topology, BackendError> {
        let basis = match self.basis {
            Some(names) => names
                .iter()
                .map(|s| s.parse::<GateKind>().map_err(|_| BackendError::Basis(s.clone())))
                .collect::<Result<BTreeSet<_>, _>>()?,
            None => Topology::default_basis(),
        };
        let edge_error = self
            .edge_error
            .map(|m| {
                m.into_iter()
                    .map(|(k, p)| {
                        let (a, b) = k.split_once('-').ok_or_else(|| BackendError::EdgeKey(k.clone()))?;
                        let a = a.trim().parse().map_err(|_| BackendError::EdgeKey(k.clone()))?;
                        let b = b.trim().parse().map_err(|_| BackendError::EdgeKey(k.clone()))?;
                        Ok(((a, b), p))
                    })
                    .collect::<Result<BTreeMap<_, _>, BackendError>>()
            })
            .transpose()?;
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|&[a, b]| (a, b)).collect();
        Topology::new(
            self.name.unwrap_or_else(|| "custom".to_owned()),
            self.n,
            &edges,
            basis,
            ErrorRates { edge_error, qubit_error: self.qubit_error, readout_error: self.readout_error },
            seed,
        )
    }
}

fn parse_size(s: &str) -> Option<usize> {
    s.parse().ok().filter(|&n| n > 0)
}

/// Builtin devices: `linear-N`, `ring-N`, `grid-RxC`, `heavyhex-27`.
pub fn builtin_topology(name: &str) -> Result<Topology, BackendError> {
    builtin_topology_with_seed(name, DEFAULT_ERROR_SEED)
}

/// A builtin name, or a path to a topology JSON file when `spec` names an
/// existing file or ends in `.json`.
pub fn resolve_topology(spec: &str) -> Result<Topology, BackendError> {
    let path = Path::new(spec);
    if spec.ends_with(".json") || path.is_file() {
        Topology::from_file(path)
    } else {
        builtin_topology(spec)
    }
}

pub fn builtin_topology_with_seed(name: &str, seed: u64) -> Result<Topology, BackendError> {
    let unknown = || BackendError::UnknownTopology(name.to_owned());
    if name == "heavyhex-27" {
        let repr: TopologyRepr = serde_json::from_str(HEAVYHEX_27)?;
        return repr.into_topology(seed);
    }
    let (family, size) = name.split_once('-').ok_or_else(unknown)?;
    let (n, edges): (usize, Vec<(usize, usize)>) = match family {
        "linear" => {
            let n = parse_size(size).ok_or_else(unknown)?;
            (n, (1..n).map(|i| (i - 1, i)).collect())
        }
        "ring" => {
            let n = parse_size(size).filter(|&n| n >= 3).ok_or_else(unknown)?;
            (n, (0..n).map(|i| (i, (i + 1) % n)).collect())
        }
        "grid" => {
            let (r, c) = size.split_once('x').ok_or_else(unknown)?;
            let rows = parse_size(r).ok_or_else(unknown)?;
            let cols = parse_size(c).ok_or_else(unknown)?;
            let idx = |i: usize, j: usize| i * cols + j;
            let mut edges = Vec::new();
            for i in 0..rows {
                for j in 0..cols {
                    if j + 1 < cols {
                        edges.push((idx(i, j), idx(i, j + 1)));
                    }
                    if i + 1 < rows {
                        edges.push((idx(i, j), idx(i + 1, j)));
                    }
                }
            }
            (rows * cols, edges)
        }
        _ => return Err(unknown()),
    };
    Topology::new(name, n, &edges, Topology::default_basis(), ErrorRates::default(), seed)
}

/// Standalone all-pairs distances; fails on a disconnected graph.
pub fn distances(num_physical: usize, edges: &[(usize, usize)]) -> Result<DistanceMatrix, BackendError> {
    let mut adjacency = vec![Vec::new(); num_physical];
    for &(a, b) in edges {
        if a >= num_physical || b >= num_physical {
            return Err(BackendError::EdgeOutOfRange(a, b));
        }
        adjacency[a].push(b);
        adjacency[b].push(a);
    }
    DistanceMatrix::from_adjacency(&adjacency)
}
