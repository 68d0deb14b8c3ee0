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
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use rivetlite::backend::resolve_topology;
use rivetlite::bench::{run_layerwise_bench, run_warmup, LayerwiseBenchConfig, WarmupConfig};
use rivetlite::circuit::Circuit;
use rivetlite::encode::Encoding;
use rivetlite::layerwise::{evaluate, train_layerwise, train_regular, Dataset, LLConfig, TrainTrace};
use rivetlite::transpiler::{transpile, TranspileOptions};
use rivetlite::Error;

#[derive(Parser)]
#[command(name = "rivetlite", version, about = "Incremental quantum circuit transpilation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a circuit JSON file for a device.
    Transpile(TranspileArgs),
    /// Timing benchmarks comparing stitched and from-scratch compilation.
    #[command(subcommand)]
    Bench(BenchCommand),
    /// Train a layerwise classifier on a bundled dataset.
    Train(TrainArgs),
}

#[derive(Args)]
struct TranspileArgs {
    /// Circuit JSON to compile.
    #[arg(long, short)]
    input: PathBuf,
    /// Builtin device name or topology JSON path.
    #[arg(long, default_value = "heavyhex-27")]
    backend: String,
    /// Where to write the compiled circuit JSON (stdout if omitted).
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long = "optimization-level", short = 'O', default_value_t = 3)]
    optimization_level: u8,
    #[arg(long, env = "RIVETLITE_SEED", default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    lookahead_window: usize,
    #[arg(long, default_value_t = 0.5)]
    lookahead_weight: f64,
}

#[derive(Subcommand)]
enum BenchCommand {
    /// Random circuit measured in random Pauli bases.
    Warmup(WarmupArgs),
    /// Growing a layered ansatz step by step.
    Layerwise(LayerwiseArgs),
}

#[derive(Args)]
struct OutputArgs {
    /// CSV destination (stdout if omitted).
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Markdown summary destination (printed if omitted).
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args)]
struct WarmupArgs {
    #[arg(long, default_value_t = 6)]
    qubits: usize,
    #[arg(long, default_value_t = 10)]
    depth: usize,
    #[arg(long, default_value_t = 10)]
    paulis: usize,
    #[arg(long, env = "RIVETLITE_SEED", default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 100_000)]
    shots: u64,
    #[arg(long, default_value_t = 5)]
    trials: usize,
    #[arg(long, default_value = "heavyhex-27")]
    backend: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum EncodingArg {
    Angle,
    Amplitude,
    Zz,
}

impl From<EncodingArg> for Encoding {
    fn from(e: EncodingArg) -> Self {
        match e {
            EncodingArg::Angle => Encoding::Angle,
            EncodingArg::Amplitude => Encoding::Amplitude,
            EncodingArg::Zz => Encoding::Zz,
        }
    }
}

#[derive(Args)]
struct LayerwiseArgs {
    #[arg(long, value_enum, default_value = "angle")]
    encoding: EncodingArg,
    #[arg(long, default_value_t = 6)]
    qubits: usize,
    #[arg(long, default_value_t = 10)]
    steps: usize,
    #[arg(long = "layers-per-step", default_value_t = 2)]
    layers_per_step: usize,
    #[arg(long, env = "RIVETLITE_SEED", default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    trials: usize,
    #[arg(long, default_value = "heavyhex-27")]
    backend: String,
    /// Simulate every step to confirm both compiles match the virtual circuit.
    #[arg(long)]
    verify: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Task {
    Iris,
    Digits,
}

#[derive(Args)]
struct TrainArgs {
    #[arg(value_enum)]
    task: Task,
    /// TOML or JSON training config; task defaults otherwise.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Replacement dataset CSV (`label,f0,...`).
    #[arg(long)]
    data: Option<PathBuf>,
    /// Trace JSON destination (stdout if omitted).
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, env = "RIVETLITE_SEED")]
    seed: Option<u64>,
}

#[derive(Serialize)]
struct BaselineReport {
    trace: TrainTrace,
    test_accuracy: f64,
    test_loss: f64,
}

#[derive(Serialize)]
struct TrainReport {
    task: Task,
    config: LLConfig,
    trace: TrainTrace,
    test_accuracy: f64,
    test_loss: f64,
    params: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    regular: Option<BaselineReport>,
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|source| Error::Io { path: path.display().to_string(), source })
}

fn write(path: &Path, text: &str) -> Result<(), Error> {
    fs::write(path, text).map_err(|source| Error::Io { path: path.display().to_string(), source })
}

fn emit(output: &OutputArgs, csv: &str, summary: &str) -> Result<(), Error> {
    match &output.csv {
        Some(path) => write(path, csv)?,
        None => print!("{csv}"),
    }
    match &output.summary {
        Some(path) => write(path, summary)?,
        None if output.csv.is_some() => print!("{summary}"),
        None => eprint!("{summary}"),
    }
    Ok(())
}

fn cmd_transpile(args: &TranspileArgs) -> Result<(), Error> {
    let circuit = Circuit::from_json(&read(&args.input)?)?;
    let topology = resolve_topology(&args.backend)?;
    let opts = TranspileOptions {
        optimization_level: args.optimization_level,
        seed: args.seed,
        lookahead_window: args.lookahead_window,
        lookahead_weight: args.lookahead_weight,
    };
    opts.validate()?;
    let out = transpile(&circuit, &topology, &opts)?;
    let json = out.to_json();
    let stats = out.physical.stats();
    let summary = format!(
        "depth {}  two-qubit gates {}  swaps {}  elapsed {:.6}s",
        stats.depth, stats.two_qubit_count, out.swaps_inserted, out.elapsed_seconds
    );
    match &args.output {
        Some(path) => {
            write(path, &json)?;
            println!("{summary}");
        }
        None => {
            println!("{json}");
            eprintln!("{summary}");
        }
    }
    Ok(())
}

fn cmd_warmup(args: &WarmupArgs) -> Result<(), Error> {
    let cfg = WarmupConfig {
        qubits: args.qubits,
        depth: args.depth,
        paulis: args.paulis,
        seed: args.seed,
        shots: args.shots,
        trials: args.trials,
        topology: args.backend.clone(),
    };
    let report = run_warmup(&cfg)?;
    emit(&args.output, &report.to_csv(), &report.to_markdown())
}

fn cmd_layerwise(args: &LayerwiseArgs) -> Result<(), Error> {
    let cfg = LayerwiseBenchConfig {
        encoding: args.encoding.into(),
        qubits: args.qubits,
        steps: args.steps,
        layers_per_step: args.layers_per_step,
        seed: args.seed,
        trials: args.trials,
        topology: args.backend.clone(),
        verify: args.verify,
    };
    let report = run_layerwise_bench(&cfg)?;
    emit(&args.output, &report.to_csv(), &report.to_markdown())
}

fn cmd_train(args: &TrainArgs) -> Result<(), Error> {
    let mut cfg = match &args.config {
        Some(path) => LLConfig::parse(&read(path)?)?,
        None => match args.task {
            Task::Iris => LLConfig::iris(),
            Task::Digits => LLConfig::digits(),
        },
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    let data = match (&args.data, args.task) {
        (Some(path), _) => Dataset::from_csv(read(path)?.as_bytes())?,
        (None, Task::Iris) => Dataset::iris(),
        (None, Task::Digits) => Dataset::digits(),
    };
    let data = match args.task {
        Task::Iris => data.scaled_to_pi(),
        Task::Digits => data,
    };
    let split = data.split(cfg.train_fraction, cfg.seed)?;

    let (params, trace) = train_layerwise(&cfg, &split)?;
    let (test_loss, test_accuracy) = evaluate(&cfg, &params, &split.test)?;
    let regular = match args.task {
        Task::Digits => {
            let (params, trace) = train_regular(&cfg, &split)?;
            let (test_loss, test_accuracy) = evaluate(&cfg, &params, &split.test)?;
            Some(BaselineReport { trace, test_accuracy, test_loss })
        }
        Task::Iris => None,
    };

    let mut summary = String::from("| schedule | test accuracy | test loss |\n|---|---:|---:|\n");
    summary += &format!("| layerwise | {test_accuracy:.4} | {test_loss:.4} |\n");
    if let Some(r) = &regular {
        summary += &format!("| regular | {:.4} | {:.4} |\n", r.test_accuracy, r.test_loss);
    }
    summary += "\n| checkpoint | stage | train loss | test accuracy |\n|---:|---|---:|---:|\n";
    for (i, c) in trace.checkpoints.iter().enumerate() {
        summary += &format!("| {i} | {:?} | {:.4} | {:.4} |\n", c.stage, c.train_loss_after, c.test_accuracy);
    }

    let report = TrainReport {
        task: args.task,
        config: cfg,
        trace,
        test_accuracy,
        test_loss,
        params: params.iter().map(|(k, v)| (k.to_owned(), v)).collect(),
        regular,
    };
    let json = serde_json::to_string_pretty(&report).expect("reports serialize");
    match &args.output {
        Some(path) => {
            write(path, &json)?;
            print!("{summary}");
        }
        None => {
            println!("{json}");
            eprint!("{summary}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Transpile(args) => cmd_transpile(args),
        Command::Bench(BenchCommand::Warmup(args)) => cmd_warmup(args),
        Command::Bench(BenchCommand::Layerwise(args)) => cmd_layerwise(args),
        Command::Train(args) => cmd_train(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 2 } else { 3 })
        }
    }
}
