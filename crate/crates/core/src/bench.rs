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

//! Benchmark drivers: the Pauli-basis warm-up and the layer-growth timing
//! comparison, with versioned CSV output and markdown summaries.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::backend::{resolve_topology, BackendError, Topology};
use crate::circuit::{random_circuit, Circuit, CircuitError, ParameterBinding};
use crate::encode::{amplitude_encode, angle_encode_symbolic, zz_feature_map, EncodeError, Encoding};
use crate::layerwise::{growth_transpiles, LayerwiseError};
use crate::pauli::{create_rotation_circuit, random_pauli_with, PauliError};
use crate::sim::{hellinger_fidelity, SimError, Simulator};
use crate::stitch::transpile_right;
use crate::transpiler::{transpile, TranspileError, TranspileOptions, TranspiledCircuit};
use crate::verify::{semantic_distance, VERIFY_MAX_QUBITS};

pub const WARMUP_SCHEMA: &str = "warmup.v1";
pub const LAYERWISE_SCHEMA: &str = "layerwise.v1";
pub const WARMUP_COLUMNS: [&str; 8] =
    ["trial", "method", "pauli_index", "pauli", "seconds", "depth", "cx_count", "fidelity"];
pub const LAYERWISE_COLUMNS: [&str; 6] = ["step", "method", "seconds", "cumulative_seconds", "depth", "cx_count"];
/// Columns holding wall-clock measurements, excluded from reproducibility
/// comparisons.
pub const TIMING_COLUMNS: [&str; 2] = ["seconds", "cumulative_seconds"];

const SCHEMA_PREFIX: &str = "# rivetlite-schema: ";
/// Largest register `--verify` simulates.
pub const VERIFY_MAX_VIRTUAL: usize = 10;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{0}")]
    Guard(String),
    #[error("CSV schema check failed: {0}")]
    Schema(String),
    #[error("stitched and monolithic results disagree: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Backend(#[from] BackendError),
    #[error(transparent)]
    Transpile(#[from] TranspileError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Layerwise(#[from] LayerwiseError),
}

/// How a row's circuit was compiled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Method {
    /// The whole circuit compiled at once.
    Monolithic,
    /// The reusable prefix compiled once per trial.
    StitchedPrefix,
    /// A suffix appended to the compiled prefix.
    Stitched,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Monolithic => "monolithic",
            Method::StitchedPrefix => "stitched-prefix",
            Method::Stitched => "stitched",
        }
    }

    pub fn is_stitched(self) -> bool {
        !matches!(self, Method::Monolithic)
    }
}

fn write_csv(schema: &str, columns: &[&str], rows: impl Iterator<Item = Vec<String>>) -> String {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(columns).expect("writing to memory");
    for row in rows {
        wtr.write_record(&row).expect("writing to memory");
    }
    let body = String::from_utf8(wtr.into_inner().expect("flushing to memory")).expect("CSV is UTF-8");
    format!("{SCHEMA_PREFIX}{schema}\n{body}")
}

/// Check that `text` starts with the schema line for `schema` and the exact
/// header for it, and that every row has the right width.
pub fn check_schema(text: &str, schema: &str) -> Result<(), BenchError> {
    let columns: &[&str] = match schema {
        WARMUP_SCHEMA => &WARMUP_COLUMNS,
        LAYERWISE_SCHEMA => &LAYERWISE_COLUMNS,
        other => return Err(BenchError::Schema(format!("unknown schema {other:?}"))),
    };
    let (first, rest) = text.split_once('\n').ok_or_else(|| BenchError::Schema("missing schema line".into()))?;
    if first != format!("{SCHEMA_PREFIX}{schema}") {
        return Err(BenchError::Schema(format!("expected schema {schema}, found {first:?}")));
    }
    let mut rdr = csv::Reader::from_reader(rest.as_bytes());
    let header = rdr.headers().map_err(|e| BenchError::Schema(e.to_string()))?;
    if header.iter().ne(columns.iter().copied()) {
        return Err(BenchError::Schema(format!(
            "header {:?} does not match {columns:?}",
            header.iter().collect::<Vec<_>>()
        )));
    }
    for (i, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| BenchError::Schema(format!("row {}: {e}", i + 1)))?;
        if record.len() != columns.len() {
            return Err(BenchError::Schema(format!("row {} has {} fields", i + 1, record.len())));
        }
    }
    Ok(())
}

/// `text` with every timing column blanked, for run-to-run comparison.
pub fn mask_timing(text: &str) -> String {
    let Some((first, rest)) = text.split_once('\n') else {
        return text.to_owned();
    };
    let mut rdr = csv::Reader::from_reader(rest.as_bytes());
    let Ok(header) = rdr.headers().cloned() else {
        return text.to_owned();
    };
    let masked: Vec<usize> =
        header.iter().enumerate().filter(|(_, h)| TIMING_COLUMNS.contains(h)).map(|(i, _)| i).collect();
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(&header).expect("writing to memory");
    for record in rdr.records().map_while(Result::ok) {
        let row: Vec<&str> =
            record.iter().enumerate().map(|(i, v)| if masked.contains(&i) { "*" } else { v }).collect();
        wtr.write_record(&row).expect("writing to memory");
    }
    format!("{first}\n{}", String::from_utf8_lossy(&wtr.into_inner().expect("flushing to memory")))
}

/// JSON `text` with every field whose name ends in `seconds` replaced by
/// `"*"`, at any depth. Text that is not JSON comes back unchanged.
pub fn mask_timing_json(text: &str) -> String {
    fn walk(v: &mut serde_json::Value) {
        match v {
            serde_json::Value::Object(map) => {
                for (k, child) in map.iter_mut() {
                    if k.ends_with("seconds") {
                        *child = serde_json::Value::String("*".into());
                    } else {
                        walk(child);
                    }
                }
            }
            serde_json::Value::Array(items) => items.iter_mut().for_each(walk),
            _ => {}
        }
    }
    match serde_json::from_str::<serde_json::Value>(text) {
        Ok(mut v) => {
            walk(&mut v);
            v.to_string()
        }
        Err(_) => text.to_owned(),
    }
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

fn cx_count(c: &Circuit) -> usize {
    c.stats().two_qubit_count
}

/// Random-circuit plus Pauli-basis measurement workload.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WarmupConfig {
    pub qubits: usize,
    pub depth: usize,
    pub paulis: usize,
    pub seed: u64,
    pub shots: u64,
    pub trials: usize,
    pub topology: String,
}

impl Default for WarmupConfig {
    fn default() -> Self {
        Self { qubits: 6, depth: 10, paulis: 10, seed: 42, shots: 100_000, trials: 5, topology: "heavyhex-27".into() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WarmupRow {
    pub trial: usize,
    pub method: Method,
    pub pauli_index: Option<usize>,
    pub pauli: String,
    pub seconds: f64,
    pub depth: usize,
    pub cx_count: usize,
    /// Hellinger fidelity between the two methods' counts for this Pauli.
    pub fidelity: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WarmupReport {
    pub config: WarmupConfig,
    pub rows: Vec<WarmupRow>,
}

impl WarmupReport {
    pub fn monolithic_seconds(&self) -> f64 {
        self.rows.iter().filter(|r| !r.method.is_stitched()).map(|r| r.seconds).sum()
    }

    /// Prefix compiles plus every suffix append.
    pub fn stitched_seconds(&self) -> f64 {
        self.rows.iter().filter(|r| r.method.is_stitched()).map(|r| r.seconds).sum()
    }

    pub fn speedup(&self) -> f64 {
        self.monolithic_seconds() / self.stitched_seconds()
    }

    pub fn min_fidelity(&self) -> f64 {
        self.rows.iter().filter_map(|r| r.fidelity).fold(1.0, f64::min)
    }

    pub fn to_csv(&self) -> String {
        let rows = self.rows.iter().map(|r| {
            vec![
                r.trial.to_string(),
                r.method.name().to_owned(),
                r.pauli_index.map_or_else(String::new, |i| i.to_string()),
                r.pauli.clone(),
                r.seconds.to_string(),
                r.depth.to_string(),
                r.cx_count.to_string(),
                r.fidelity.map_or_else(String::new, |f| f.to_string()),
            ]
        });
        write_csv(WARMUP_SCHEMA, &WARMUP_COLUMNS, rows)
    }

    pub fn to_markdown(&self) -> String {
        let c = &self.config;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "### Warm-up: {} qubits, depth {}, {} Paulis, {} trials on {}\n",
            c.qubits, c.depth, c.paulis, c.trials, c.topology
        );
        let _ = writeln!(out, "| trial | monolithic s | stitched s | speedup | min fidelity |");
        let _ = writeln!(out, "|---:|---:|---:|---:|---:|");
        for t in 0..c.trials {
            let rows: Vec<&WarmupRow> = self.rows.iter().filter(|r| r.trial == t).collect();
            let mono: f64 = rows.iter().filter(|r| !r.method.is_stitched()).map(|r| r.seconds).sum();
            let st: f64 = rows.iter().filter(|r| r.method.is_stitched()).map(|r| r.seconds).sum();
            let fid = rows.iter().filter_map(|r| r.fidelity).fold(1.0, f64::min);
            let _ = writeln!(out, "| {t} | {mono:.6} | {st:.6} | {:.2} | {fid:.5} |", mono / st);
        }
        let _ = writeln!(
            out,
            "| total | {:.6} | {:.6} | {:.2} | {:.5} |",
            self.monolithic_seconds(),
            self.stitched_seconds(),
            self.speedup(),
            self.min_fidelity()
        );
        out
    }
}

fn sampling_simulator() -> Simulator {
    Simulator::with_max_qubits(VERIFY_MAX_QUBITS)
}

/// Per trial: compile one random circuit as a prefix, then for each random
/// Pauli both compile prefix+rotation from scratch and append the rotation
/// to the compiled prefix; sample both and compare.
pub fn run_warmup(cfg: &WarmupConfig) -> Result<WarmupReport, BenchError> {
    let topology = resolve_topology(&cfg.topology)?;
    if cfg.qubits == 0 || cfg.qubits > topology.num_physical() {
        return Err(BenchError::Guard(format!("qubits = {} must be in 1..={}", cfg.qubits, topology.num_physical())));
    }
    if cfg.depth == 0 || cfg.paulis == 0 || cfg.trials == 0 || cfg.shots == 0 {
        return Err(BenchError::Guard("depth, paulis, trials and shots must be positive".into()));
    }
    let opts = TranspileOptions { seed: cfg.seed, ..TranspileOptions::default() };
    let sim = sampling_simulator();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut rows = Vec::new();
    for trial in 0..cfg.trials {
        let circuit = random_circuit(cfg.qubits, cfg.depth, rng.gen());
        let prefix = transpile(&circuit, &topology, &opts)?;
        rows.push(WarmupRow {
            trial,
            method: Method::StitchedPrefix,
            pauli_index: None,
            pauli: String::new(),
            seconds: prefix.elapsed_seconds,
            depth: prefix.physical.depth(),
            cx_count: cx_count(&prefix.physical),
            fidelity: None,
        });
        for index in 0..cfg.paulis {
            let pauli = random_pauli_with(cfg.qubits, &mut rng);
            let rotation = create_rotation_circuit(cfg.qubits, &pauli)?.measure_all()?;
            let combined = circuit.compose(&rotation)?;
            let mono = transpile(&combined, &topology, &opts)?;
            let stitched = transpile_right(&prefix, &rotation, &topology, &opts)?;
            let mono_counts = sim.sample(&mono.physical, cfg.shots, rng.gen())?;
            let stitched_counts = sim.sample(&stitched.physical, cfg.shots, rng.gen())?;
            let fidelity = hellinger_fidelity(&mono_counts, &stitched_counts)?;
            for (method, out) in [(Method::Monolithic, &mono), (Method::Stitched, &stitched)] {
                rows.push(WarmupRow {
                    trial,
                    method,
                    pauli_index: Some(index),
                    pauli: pauli.as_str().to_owned(),
                    seconds: out.elapsed_seconds,
                    depth: out.physical.depth(),
                    cx_count: cx_count(&out.physical),
                    fidelity: Some(fidelity),
                });
            }
        }
    }
    Ok(WarmupReport { config: cfg.clone(), rows })
}

/// Layer-growth timing workload.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LayerwiseBenchConfig {
    pub encoding: Encoding,
    pub qubits: usize,
    pub steps: usize,
    pub layers_per_step: usize,
    pub seed: u64,
    pub trials: usize,
    pub topology: String,
    /// Check every step's stitched and monolithic circuits against the
    /// virtual circuit with random parameter values.
    pub verify: bool,
}

impl Default for LayerwiseBenchConfig {
    fn default() -> Self {
        Self {
            encoding: Encoding::Angle,
            qubits: 6,
            steps: 10,
            layers_per_step: 2,
            seed: 42,
            trials: 3,
            topology: "heavyhex-27".into(),
            verify: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LayerwiseRow {
    pub step: usize,
    pub method: Method,
    /// Median over trials of this step's compile time.
    pub seconds: f64,
    pub cumulative_seconds: f64,
    pub depth: usize,
    pub cx_count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LayerwiseReport {
    pub config: LayerwiseBenchConfig,
    pub rows: Vec<LayerwiseRow>,
    /// Largest semantic distance seen when verifying.
    pub max_distance: Option<f64>,
}

impl LayerwiseReport {
    fn cumulative(&self, method: Method) -> f64 {
        self.rows.iter().rev().find(|r| r.method == method).map_or(0.0, |r| r.cumulative_seconds)
    }

    pub fn stitched_seconds(&self) -> f64 {
        self.cumulative(Method::Stitched)
    }

    pub fn monolithic_seconds(&self) -> f64 {
        self.cumulative(Method::Monolithic)
    }

    pub fn speedup(&self) -> f64 {
        self.monolithic_seconds() / self.stitched_seconds()
    }

    pub fn to_csv(&self) -> String {
        let rows = self.rows.iter().map(|r| {
            vec![
                r.step.to_string(),
                r.method.name().to_owned(),
                r.seconds.to_string(),
                r.cumulative_seconds.to_string(),
                r.depth.to_string(),
                r.cx_count.to_string(),
            ]
        });
        write_csv(LAYERWISE_SCHEMA, &LAYERWISE_COLUMNS, rows)
    }

    pub fn to_markdown(&self) -> String {
        let c = &self.config;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "### Layerwise growth: {} encoding, {} qubits, {} steps x {} layers on {}\n",
            c.encoding, c.qubits, c.steps, c.layers_per_step, c.topology
        );
        let _ = writeln!(out, "| step | stitched cum. s | monolithic cum. s | speedup | cx (stitched / monolithic) |");
        let _ = writeln!(out, "|---:|---:|---:|---:|---:|");
        for pair in self.rows.chunks(2) {
            if let [st, mono] = pair {
                let _ = writeln!(
                    out,
                    "| {} | {:.6} | {:.6} | {:.2} | {} / {} |",
                    st.step,
                    st.cumulative_seconds,
                    mono.cumulative_seconds,
                    mono.cumulative_seconds / st.cumulative_seconds,
                    st.cx_count,
                    mono.cx_count
                );
            }
        }
        if let Some(d) = self.max_distance {
            let _ = writeln!(out, "\nmax semantic distance: {d:.3e}");
        }
        out
    }
}

fn layerwise_prefix(cfg: &LayerwiseBenchConfig) -> Result<Circuit, BenchError> {
    Ok(match cfg.encoding {
        Encoding::Angle => angle_encode_symbolic(cfg.qubits)?,
        Encoding::Zz => zz_feature_map(cfg.qubits, 1)?,
        Encoding::Amplitude => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let v: Vec<f64> = (0..1usize << cfg.qubits).map(|_| rng.gen_range(0.0..1.0)).collect();
            amplitude_encode(&v)?
        }
    })
}

fn random_binding(circuit: &Circuit, seed: u64) -> ParameterBinding {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    circuit.free_symbols().into_iter().map(|s| (s, rng.gen_range(0.0..std::f64::consts::TAU))).collect()
}

fn bound_distance(
    virtual_circuit: &Circuit,
    compiled: &TranspiledCircuit,
    binding: &ParameterBinding,
) -> Result<f64, BenchError> {
    Ok(semantic_distance(&virtual_circuit.bind(binding)?, &compiled.bind(binding)?)?)
}

/// Grow `steps` blocks of layers on top of an encoding prefix and time the
/// stitched and from-scratch compiles of every step. Times are medians over
/// `trials`; step 0 of the stitched method includes the prefix compile.
pub fn run_layerwise_bench(cfg: &LayerwiseBenchConfig) -> Result<LayerwiseReport, BenchError> {
    let topology: Topology = resolve_topology(&cfg.topology)?;
    if cfg.qubits == 0 || cfg.qubits > topology.num_physical() {
        return Err(BenchError::Guard(format!("qubits = {} must be in 1..={}", cfg.qubits, topology.num_physical())));
    }
    if cfg.encoding == Encoding::Amplitude && cfg.qubits > crate::sim::MAX_QUBITS {
        return Err(BenchError::Guard(format!("amplitude encoding is limited to {} qubits", crate::sim::MAX_QUBITS)));
    }
    if cfg.verify && cfg.qubits > VERIFY_MAX_VIRTUAL {
        return Err(BenchError::Guard(format!("--verify is limited to {VERIFY_MAX_VIRTUAL} qubits")));
    }
    if cfg.steps == 0 || cfg.layers_per_step == 0 || cfg.trials == 0 {
        return Err(BenchError::Guard("steps, layers-per-step and trials must be positive".into()));
    }
    let opts = TranspileOptions { seed: cfg.seed, ..TranspileOptions::default() };
    let prefix = layerwise_prefix(cfg)?;

    let mut stitched_times = vec![Vec::with_capacity(cfg.trials); cfg.steps];
    let mut mono_times = vec![Vec::with_capacity(cfg.trials); cfg.steps];
    let mut first = None;
    for _ in 0..cfg.trials {
        let steps = growth_transpiles(&prefix, cfg.steps, cfg.layers_per_step, &topology, &opts)?;
        for (i, s) in steps.iter().enumerate() {
            stitched_times[i].push(s.stitched_seconds);
            mono_times[i].push(s.monolithic_seconds);
        }
        first.get_or_insert(steps);
    }
    let steps = first.expect("at least one trial");

    let mut max_distance = None;
    if cfg.verify {
        let mut worst: f64 = 0.0;
        for (i, s) in steps.iter().enumerate() {
            let binding = random_binding(&s.virtual_circuit, cfg.seed.wrapping_add(i as u64));
            for compiled in [&s.stitched, &s.monolithic] {
                worst = worst.max(bound_distance(&s.virtual_circuit, compiled, &binding)?);
            }
        }
        if worst > 1e-9 {
            return Err(BenchError::Mismatch(format!("semantic distance {worst:.3e} exceeds 1e-9")));
        }
        max_distance = Some(worst);
    }

    let mut rows = Vec::with_capacity(2 * cfg.steps);
    let (mut cum_st, mut cum_mono) = (0.0, 0.0);
    for (i, s) in steps.iter().enumerate() {
        let st = median(&mut stitched_times[i]);
        let mono = median(&mut mono_times[i]);
        cum_st += st;
        cum_mono += mono;
        rows.push(LayerwiseRow {
            step: i,
            method: Method::Stitched,
            seconds: st,
            cumulative_seconds: cum_st,
            depth: s.stitched.physical.depth(),
            cx_count: cx_count(&s.stitched.physical),
        });
        rows.push(LayerwiseRow {
            step: i,
            method: Method::Monolithic,
            seconds: mono,
            cumulative_seconds: cum_mono,
            depth: s.monolithic.physical.depth(),
            cx_count: cx_count(&s.monolithic.physical),
        });
    }
    Ok(LayerwiseReport { config: cfg.clone(), rows, max_distance })
}
