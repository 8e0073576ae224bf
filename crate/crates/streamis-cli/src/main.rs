//! `streamis` — drive streaming independent-set algorithms, the adaptive
//! adversary, and the exact certification toolkit from the command line.
//!
//! Exit code 0 means every validation the subcommand performed passed;
//! 1 means a validation failed; other nonzero codes are usage or I/O errors.
//!
//! Environment:
//! - `STREAMIS_E_MAX`: default exhaustive-enumeration edge cap when the
//!   adversary config file does not set `e_max`.
//! - `STREAMIS_RETRY_CAP`: default verified-removal retry cap when the
//!   config file does not set `retry_cap`.

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;
use std::process::ExitCode;
use streamis::adversary::{
    self, derive_ell_k, run_adversary, validate_strict, verify_result, AdversaryConfig,
    AdversaryResult, Opponent, RoundDigest, Verdict, VerificationReport,
};
use streamis::experiment::{run_experiment, EdgeOrder, ExperimentSpec, Task};
use streamis::generators::Family;
use streamis::graph::Edge;
use streamis::streaming::{by_name, ALGORITHM_NAMES};

#[derive(Parser)]
#[command(
    name = "streamis",
    about = "Streaming independent-set algorithms, adaptive adversary, and exact certification",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OrderArg {
    Lexicographic,
    Shuffled,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph and emit its edge-list text.
    Gen {
        /// Family: clique, turan:R, gnp:P, regular:D, or file:PATH.
        #[arg(long)]
        family: String,
        /// Vertex count (ignored for file: families).
        #[arg(long)]
        n: usize,
        /// Seed for the seeded families.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stream a graph file through an algorithm and certify the claim.
    RunAlgo {
        /// Algorithm name.
        #[arg(long)]
        algo: String,
        /// Edge-list file ("n m" header, one "u v" line per edge).
        #[arg(long)]
        graph: PathBuf,
        /// Message/state budget in bits.
        #[arg(long)]
        budget_bits: u64,
        /// Seed (for seeded algorithms and shuffled order).
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Stream order.
        #[arg(long, value_enum, default_value_t = OrderArg::Lexicographic)]
        order: OrderArg,
        /// Repetitions (seeded algorithms draw fresh derived seeds).
        #[arg(long, default_value_t = 1)]
        reps: u64,
        /// Include the wall-time column (canonical output omits it).
        #[arg(long)]
        timing: bool,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the adaptive adversary against an algorithm and write a report.
    RunAdversary {
        /// Flat key-value config file (n, delta, s, mode, overrides, seed, e_max).
        #[arg(long)]
        config: PathBuf,
        /// Opponent algorithm name.
        #[arg(long)]
        algo: String,
        /// Seed for seeded opponent algorithms.
        #[arg(long, default_value_t = 0)]
        algo_seed: u64,
        /// Report JSON output path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-verify a written adversary report from scratch.
    Verify {
        /// Report JSON produced by run-adversary.
        #[arg(long)]
        report: PathBuf,
    },
    /// Print the derived parameters and output ceiling for (n, Δ, s).
    Bounds {
        /// Vertex count.
        #[arg(long)]
        n: usize,
        /// Maximum-degree parameter Δ.
        #[arg(long)]
        delta: usize,
        /// State/message budget in bits.
        #[arg(long)]
        s: u64,
        /// Override the round count in the ceiling.
        #[arg(long)]
        k: Option<u64>,
        /// Override the repetition parameter in the ceiling.
        #[arg(long)]
        ell: Option<u64>,
    },
}

/// Everything a written adversary run needs to be re-verified from scratch.
#[derive(Serialize, Deserialize)]
struct CliReport {
    algorithm: String,
    algo_seed: u64,
    config: AdversaryConfig,
    config_flat: String,
    verdict: String,
    witness_edge: Option<Edge>,
    replay_digests: Vec<String>,
    round_digests: Vec<RoundDigest>,
    verification: VerificationReport,
    result: AdversaryResult,
}

fn env_usize(name: &str) -> anyhow::Result<Option<usize>> {
    match std::env::var(name) {
        Ok(v) => Ok(Some(v.parse().with_context(|| format!("parsing ${name}"))?)),
        Err(_) => Ok(None),
    }
}

fn env_u64(name: &str) -> anyhow::Result<Option<u64>> {
    match std::env::var(name) {
        Ok(v) => Ok(Some(v.parse().with_context(|| format!("parsing ${name}"))?)),
        Err(_) => Ok(None),
    }
}

/// Whether the flat config text sets a key explicitly (comments stripped).
fn flat_has_key(text: &str, key: &str) -> bool {
    text.lines().any(|raw| {
        let line = raw.split('#').next().unwrap_or("").trim();
        line.split_once('=')
            .is_some_and(|(k, _)| k.trim() == key)
    })
}

fn emit(text: &str, out: Option<&PathBuf>) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn verdict_name(v: &Verdict) -> &'static str {
    match v {
        Verdict::SmallOutput { .. } => "small-output",
        Verdict::AlreadyWrong { .. } => "already-wrong",
        Verdict::Broken { .. } => "broken",
    }
}

fn witness_edge(v: &Verdict) -> Option<Edge> {
    match v {
        Verdict::SmallOutput { .. } => None,
        Verdict::AlreadyWrong { edge } | Verdict::Broken { edge, .. } => Some(*edge),
    }
}

fn cmd_gen(family: &str, n: usize, seed: u64, out: Option<&PathBuf>) -> anyhow::Result<bool> {
    let family = Family::parse(family)?;
    let graph = family.generate(n, seed)?;
    emit(&graph.to_edge_list(), out)?;
    Ok(true)
}

#[allow(clippy::too_many_arguments)]
fn cmd_run_algo(
    algo: &str,
    graph: &PathBuf,
    budget_bits: u64,
    seed: u64,
    order: OrderArg,
    reps: u64,
    timing: bool,
    out: Option<&PathBuf>,
) -> anyhow::Result<bool> {
    if !ALGORITHM_NAMES.contains(&algo) {
        bail!("unknown algorithm {algo:?}; known: {}", ALGORITHM_NAMES.join(", "));
    }
    let spec = ExperimentSpec {
        id: format!("run-algo:{algo}"),
        repetitions: reps,
        seed,
        task: Task::Algorithm {
            family: Family::File {
                path: graph.display().to_string(),
            },
            n: 0,
            algorithm: algo.to_string(),
            budget_bits,
            order: match order {
                OrderArg::Lexicographic => EdgeOrder::Lexicographic,
                OrderArg::Shuffled => EdgeOrder::Shuffled,
            },
        },
    };
    let report = run_experiment(&spec)?;
    emit(&report.to_csv(timing), out)?;
    if !report.all_ok() {
        for row in report.rows.iter().filter(|r| !r.is_ok()) {
            eprintln!("repetition {}: {}", row.repetition, row.status);
        }
    }
    Ok(report.all_ok())
}

fn cmd_run_adversary(
    config_path: &PathBuf,
    algo: &str,
    algo_seed: u64,
    out: &PathBuf,
) -> anyhow::Result<bool> {
    let text = std::fs::read_to_string(config_path)
        .with_context(|| format!("reading {}", config_path.display()))?;
    let mut config = AdversaryConfig::parse_flat(&text)?;
    if !flat_has_key(&text, "e_max") {
        if let Some(e_max) = env_usize("STREAMIS_E_MAX")? {
            config.e_max = e_max;
        }
    }
    if !flat_has_key(&text, "retry_cap") {
        if let Some(cap) = env_u64("STREAMIS_RETRY_CAP")? {
            config.retry_cap = cap;
        }
    }
    let alg = by_name(algo, config.n, config.delta, algo_seed)?;
    let opponent = Opponent::Streaming(alg.as_ref());
    let result = run_adversary(&config, &opponent)?;
    let verification = verify_result(&result, &config, &opponent)?;
    let all_passed = verification.all_passed;

    let report = CliReport {
        algorithm: algo.to_string(),
        algo_seed,
        config: config.clone(),
        config_flat: config.to_flat(),
        verdict: verdict_name(&result.verdict).to_string(),
        witness_edge: witness_edge(&result.verdict),
        replay_digests: result.transcript.message_digests(),
        round_digests: result.round_digests(),
        verification,
        result,
    };
    let json = serde_json::to_string_pretty(&report)?;
    std::fs::write(out, json).with_context(|| format!("writing {}", out.display()))?;
    println!(
        "verdict: {}; verification: {}; report: {}",
        report.verdict,
        if all_passed { "all checks passed" } else { "CHECKS FAILED" },
        out.display()
    );
    if !all_passed {
        for check in report.verification.checks.iter().filter(|c| c.applicable && !c.passed) {
            eprintln!("failed check {}: {}", check.name, check.detail);
        }
    }
    Ok(all_passed)
}

fn cmd_verify(report_path: &PathBuf) -> anyhow::Result<bool> {
    let text = std::fs::read_to_string(report_path)
        .with_context(|| format!("reading {}", report_path.display()))?;
    let report: CliReport = serde_json::from_str(&text)?;
    let alg = by_name(
        &report.algorithm,
        report.config.n,
        report.config.delta,
        report.algo_seed,
    )?;
    let opponent = Opponent::Streaming(alg.as_ref());
    let verification = verify_result(&report.result, &report.config, &opponent)?;
    for check in &verification.checks {
        let mark = if check.passed {
            "pass"
        } else if check.applicable {
            "FAIL"
        } else {
            "info"
        };
        println!("[{mark}] {}: {}", check.name, check.detail);
    }
    // The stored verdict and digests must match what the result re-derives.
    let consistent = report.verdict == verdict_name(&report.result.verdict)
        && report.replay_digests == report.result.transcript.message_digests();
    if !consistent {
        println!("[FAIL] report-consistency: stored verdict or digests do not match the result");
    }
    println!(
        "verification: {}",
        if verification.all_passed && consistent {
            "all checks passed"
        } else {
            "CHECKS FAILED"
        }
    );
    Ok(verification.all_passed && consistent)
}

fn cmd_bounds(n: usize, delta: usize, s: u64, k: Option<u64>, ell: Option<u64>) -> anyhow::Result<bool> {
    let (ell_derived, k_derived) = derive_ell_k(n, s);
    let ell_used = ell.unwrap_or(ell_derived);
    let k_used = k.unwrap_or(k_derived);
    println!("n = {n}, delta = {delta}, s = {s} bits");
    println!("ell = {ell_used} (derived {ell_derived}), k = {k_used} (derived {k_derived})");
    println!(
        "threshold = {}",
        adversary::threshold(n, delta, k_used, ell_used)
    );
    println!(
        "simplified bound = {}",
        adversary::simplified_output_bound(n, delta, s)
    );
    match validate_strict(n, delta, s) {
        Ok(()) => {
            println!("strict preconditions: satisfied");
            Ok(true)
        }
        Err(e) => {
            println!("strict preconditions: violated — {e}");
            Ok(false)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Gen {
            family,
            n,
            seed,
            out,
        } => cmd_gen(family, *n, *seed, out.as_ref()),
        Command::RunAlgo {
            algo,
            graph,
            budget_bits,
            seed,
            order,
            reps,
            timing,
            out,
        } => cmd_run_algo(
            algo,
            graph,
            *budget_bits,
            *seed,
            *order,
            *reps,
            *timing,
            out.as_ref(),
        ),
        Command::RunAdversary {
            config,
            algo,
            algo_seed,
            out,
        } => cmd_run_adversary(config, algo, *algo_seed, out),
        Command::Verify { report } => cmd_verify(report),
        Command::Bounds { n, delta, s, k, ell } => cmd_bounds(*n, *delta, *s, *k, *ell),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
