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

//! `lcem` command-line front end.
//!
//! Every JSON document written by a subcommand has the shape
//! `{"tool", "version", "command", "config", "result"}`. CSV files start
//! with `#` comment lines carrying the same tool, version and config.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use lcem::pec::DEFAULT_EPSILON;
use lcem::zne::DEFAULT_GAINS;
use lcem::{
    analyze_pec, classify_terms, compute_lightcone, generate_instance, run_pec, zne_run, Instance,
    InstanceParams, PauliString, PecConfig, ZneConfig,
};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "lcem", version, about = "Light-cone error mitigation experiments on noisy Clifford circuits")]
struct Cli {
    /// Worker threads (default: all available cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random heavy-hex instance.
    Generate(GenerateArgs),
    /// Per-layer light-cone sets of an observable.
    Lightcone(LightconeArgs),
    /// Standard and light-cone PEC from one shot stream.
    RunPec(PecArgs),
    /// Zero-noise extrapolation with bias bounds.
    RunZne(ZneArgs),
    /// Exact overheads and ZNE bounds over a sweep of sizes and seeds.
    Bounds(BoundsArgs),
}

#[derive(Args, Serialize)]
struct GenerateArgs {
    #[arg(long)]
    qubits: usize,
    #[arg(long)]
    depth: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Instance file to write (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct LightconeArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Pauli observable, e.g. `Z1Z10` (1-based) or `ZIIX`.
    #[arg(long)]
    observable: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct PecArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    observable: String,
    #[arg(long, default_value_t = 100_000)]
    shots: usize,
    #[arg(long, default_value_t = 10)]
    batches: usize,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// JSON summary path; batch means go next to it with a `.csv` extension.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct ZneArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    observable: String,
    /// Comma-separated gains starting at 1.
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_GAINS.to_vec())]
    gains: Vec<f64>,
    /// Extrapolation order K; uses the first K + 1 gains.
    #[arg(long)]
    order: Option<usize>,
    /// Shots per gain: one value for all gains or one per gain. Omit for
    /// the exact oracle.
    #[arg(long, value_delimiter = ',')]
    shots: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// JSON report path; per-gain values go next to it with a `.csv` extension.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct BoundsArgs {
    /// Comma-separated register sizes.
    #[arg(long, value_delimiter = ',', default_values_t = vec![10, 20, 30, 40, 50, 60, 65])]
    qubits: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    depth: usize,
    /// Number of instances per size; instance seeds are `seed..seed + seeds`.
    #[arg(long, default_value_t = 10)]
    seeds: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "Z1")]
    observable: String,
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_GAINS.to_vec())]
    gains: Vec<f64>,
    #[arg(long)]
    order: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    /// CSV path (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            let domain = err
                .chain()
                .filter_map(|e| e.downcast_ref::<lcem::Error>())
                .any(lcem::Error::is_domain);
            ExitCode::from(if domain { 3 } else { 2 })
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            bail!("--threads must be positive");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("configuring the thread pool")?;
    }
    match cli.command {
        Command::Generate(args) => generate(&args),
        Command::Lightcone(args) => lightcone(&args),
        Command::RunPec(args) => pec(&args),
        Command::RunZne(args) => zne(&args),
        Command::Bounds(args) => bounds(&args),
    }
}

fn envelope(command: &str, config: &impl Serialize, result: Value) -> anyhow::Result<Value> {
    Ok(json!({
        "tool": "lcem",
        "version": lcem::VERSION,
        "command": command,
        "config": serde_json::to_value(config)?,
        "result": result,
    }))
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn emit_json(out: Option<&Path>, doc: &Value) -> anyhow::Result<()> {
    emit(out, &(serde_json::to_string_pretty(doc)? + "\n"))
}

/// CSV text with `#` header lines for tool, version and config.
fn csv_text<R: Serialize>(command: &str, config: &impl Serialize, rows: &[R]) -> anyhow::Result<String> {
    let mut text = format!(
        "# tool: lcem {}\n# command: {command}\n# config: {}\n",
        lcem::VERSION,
        serde_json::to_string(config)?
    );
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row)?;
    }
    text.push_str(std::str::from_utf8(&writer.into_inner()?)?);
    Ok(text)
}

fn sibling_csv(path: &Path) -> PathBuf {
    path.with_extension("csv")
}

fn load_instance(path: &Path) -> anyhow::Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Instance::from_json(&text).with_context(|| format!("parsing instance {}", path.display()))
}

fn parse_observable(n: usize, text: &str) -> anyhow::Result<PauliString> {
    PauliString::parse_observable(n, text).with_context(|| format!("parsing observable {text:?}"))
}

fn resolve_gains(gains: &[f64], order: Option<usize>) -> anyhow::Result<Vec<f64>> {
    match order {
        None => Ok(gains.to_vec()),
        Some(k) if k < gains.len() => Ok(gains[..=k].to_vec()),
        Some(k) => bail!("order {k} needs {} gains, got {}", k + 1, gains.len()),
    }
}

fn generate(args: &GenerateArgs) -> anyhow::Result<()> {
    let inst = generate_instance(args.qubits, args.depth, args.seed, &InstanceParams::default())?;
    emit(args.out.as_deref(), &(inst.to_json() + "\n"))
}

fn lightcone(args: &LightconeArgs) -> anyhow::Result<()> {
    let inst = load_instance(&args.instance)?;
    let o = parse_observable(inst.num_qubits(), &args.observable)?;
    let cone = compute_lightcone(&inst.circuit, &o)?;
    let terms = classify_terms(&cone, &inst.noise)?;
    let result = json!({
        "instance_seed": inst.seed,
        "observable": o.to_string(),
        "lightcone": cone.summary(),
        "terms_total": terms.len(),
        "terms_in_cone": terms.count(),
    });
    emit_json(args.out.as_deref(), &envelope("lightcone", args, result)?)
}

#[derive(Serialize)]
struct BatchRow {
    batch: usize,
    mean_standard: f64,
    mean_local: f64,
}

fn pec(args: &PecArgs) -> anyhow::Result<()> {
    let inst = load_instance(&args.instance)?;
    let o = parse_observable(inst.num_qubits(), &args.observable)?;
    let config = PecConfig {
        shots: args.shots,
        batches: args.batches,
        seed: args.seed,
        epsilon: args.epsilon,
    };
    let report = run_pec(&inst.circuit, &inst.noise, &o, &config)?;
    let mut result = serde_json::to_value(&report)?;
    result["instance_seed"] = json!(inst.seed);
    result["standard_error_standard"] = json!(report.standard_error_standard());
    result["standard_error_local"] = json!(report.standard_error_local());
    emit_json(args.out.as_deref(), &envelope("run-pec", args, result)?)?;
    if let Some(out) = &args.out {
        let rows: Vec<BatchRow> = report
            .batch_means
            .iter()
            .enumerate()
            .map(|(batch, b)| BatchRow {
                batch,
                mean_standard: b.standard,
                mean_local: b.local,
            })
            .collect();
        emit(Some(&sibling_csv(out)), &csv_text("run-pec", args, &rows)?)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct GainRow {
    gain: f64,
    beta: f64,
    f_value: f64,
    shots: usize,
}

fn zne(args: &ZneArgs) -> anyhow::Result<()> {
    let inst = load_instance(&args.instance)?;
    let o = parse_observable(inst.num_qubits(), &args.observable)?;
    let gains = resolve_gains(&args.gains, args.order)?;
    let shots = match args.shots.len() {
        0 => Vec::new(),
        1 => vec![args.shots[0]; gains.len()],
        _ => args.shots.clone(),
    };
    let config = ZneConfig {
        gains,
        shots,
        seed: args.seed,
    };
    let report = zne_run(&inst.circuit, &inst.noise, &o, &config)?;
    let mut result = serde_json::to_value(&report)?;
    result["instance_seed"] = json!(inst.seed);
    result["mode"] = json!(if config.is_oracle() { "oracle" } else { "sampled" });
    emit_json(args.out.as_deref(), &envelope("run-zne", args, result)?)?;
    if let Some(out) = &args.out {
        let rows: Vec<GainRow> = (0..report.gains.len())
            .map(|l| GainRow {
                gain: report.gains[l],
                beta: report.beta[l],
                f_value: report.f_values[l],
                shots: report.shots.get(l).copied().unwrap_or(0),
            })
            .collect();
        emit(Some(&sibling_csv(out)), &csv_text("run-zne", args, &rows)?)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct SweepRow {
    n: usize,
    seed: u64,
    ideal: f64,
    exact_bias: f64,
    bound_local: f64,
    bound_standard: f64,
    bound_compact: f64,
    overhead_standard: f64,
    overhead_local: f64,
    terms_in_cone: usize,
}

fn bounds(args: &BoundsArgs) -> anyhow::Result<()> {
    let gains = resolve_gains(&args.gains, args.order)?;
    let jobs: Vec<(usize, u64)> = args
        .qubits
        .iter()
        .flat_map(|&n| (args.seed..args.seed + args.seeds).map(move |s| (n, s)))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|&(n, seed)| -> anyhow::Result<SweepRow> {
            let inst = generate_instance(n, args.depth, seed, &InstanceParams::default())?;
            let o = parse_observable(n, &args.observable)?;
            let z = zne_run(&inst.circuit, &inst.noise, &o, &ZneConfig::oracle(gains.clone()))?;
            let p = analyze_pec(&inst.circuit, &inst.noise, &o, args.epsilon)?;
            Ok(SweepRow {
                n,
                seed,
                ideal: z.ideal,
                exact_bias: z.exact_bias,
                bound_local: z.bound_local,
                bound_standard: z.bound_standard,
                bound_compact: z.bound_compact,
                overhead_standard: p.overhead_standard,
                overhead_local: p.overhead_local,
                terms_in_cone: z.terms_in_cone,
            })
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    emit(args.out.as_deref(), &csv_text("bounds", args, &rows)?)
}
