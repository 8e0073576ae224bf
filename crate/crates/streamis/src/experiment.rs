//! Batch experiment orchestration: generate instances, drive algorithms or
//! the adversary, certify every claimed independent set, and emit flat
//! reports.
//!
//! One base seed fully determines a run. It splits hierarchically —
//! experiment → repetition → module — so raising the repetition count never
//! perturbs the instances or draws of earlier repetitions.

use crate::adversary::{run_adversary, verify_result, AdversaryConfig, Opponent, Verdict};
use crate::error::{Error, Result};
use crate::generators::Family;
use crate::oracles;
use crate::seeding::{self, labels};
use crate::streaming::{self, by_name};
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};
use std::time::Instant;

/// In what order the generated graph's edges hit the algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeOrder {
    /// Ascending `(u, v)` — the default.
    Lexicographic,
    /// Seeded uniform shuffle, independent per repetition.
    Shuffled,
}

/// What a repetition executes.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Task {
    /// Stream a generated graph through a named algorithm.
    Algorithm {
        family: Family,
        n: usize,
        algorithm: String,
        budget_bits: u64,
        order: EdgeOrder,
    },
    /// Run the adaptive adversary against a named algorithm.
    Adversary {
        config: AdversaryConfig,
        algorithm: String,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub id: String,
    pub repetitions: u64,
    pub seed: u64,
    pub task: Task,
}

/// One certified repetition outcome. `wall_ms` is the only field excluded
/// from the canonical report rendering, so identical (spec, seed) pairs
/// produce byte-identical reports.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRow {
    pub experiment: String,
    pub repetition: u64,
    pub family: String,
    pub algorithm: String,
    pub n: usize,
    pub m: usize,
    pub max_degree: usize,
    pub budget_bits: u64,
    pub peak_state_bits: Option<u64>,
    pub output_size: usize,
    /// Greedy guarantee `n/(Δ+1)`.
    pub greedy_floor: f64,
    /// Recursion floor `n/Δ²`.
    pub active_floor: f64,
    /// Output ceiling of adversary runs; absent for plain algorithm runs.
    pub threshold: Option<f64>,
    /// `small-output` / `broken` / `already-wrong` for adversary runs,
    /// `-` otherwise.
    pub verdict: String,
    /// `ok`, or the validation failure.
    pub status: String,
    pub wall_ms: f64,
}

impl RunRow {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub rows: Vec<RunRow>,
}

const CSV_HEADER: &str = "experiment,repetition,family,algorithm,n,m,max_degree,budget_bits,peak_state_bits,output_size,greedy_floor,active_floor,threshold,verdict,status";

impl Report {
    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(RunRow::is_ok)
    }

    pub fn mean_output_size(&self) -> f64 {
        if self.rows.is_empty() {
            return 0.0;
        }
        self.rows.iter().map(|r| r.output_size as f64).sum::<f64>() / self.rows.len() as f64
    }

    /// Flat CSV. The canonical form (`with_timing = false`) depends only on
    /// (spec, seed); adding timing appends a `wall_ms` column.
    pub fn to_csv(&self, with_timing: bool) -> String {
        let mut out = String::new();
        out.push_str(CSV_HEADER);
        if with_timing {
            out.push_str(",wall_ms");
        }
        out.push('\n');
        for r in &self.rows {
            let peak = r
                .peak_state_bits
                .map_or_else(|| "-".to_string(), |p| p.to_string());
            let threshold = r
                .threshold
                .map_or_else(|| "-".to_string(), |t| format!("{t}"));
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                r.experiment,
                r.repetition,
                r.family,
                r.algorithm,
                r.n,
                r.m,
                r.max_degree,
                r.budget_bits,
                peak,
                r.output_size,
                r.greedy_floor,
                r.active_floor,
                threshold,
                r.verdict,
                r.status
            ));
            if with_timing {
                out.push_str(&format!(",{}", r.wall_ms));
            }
            out.push('\n');
        }
        out
    }
}

fn verdict_name(v: &Verdict) -> &'static str {
    match v {
        Verdict::SmallOutput { .. } => "small-output",
        Verdict::AlreadyWrong { .. } => "already-wrong",
        Verdict::Broken { .. } => "broken",
    }
}

/// Run one repetition of an algorithm task.
fn run_algorithm_rep(
    spec: &ExperimentSpec,
    family: &Family,
    n: usize,
    algorithm: &str,
    budget_bits: u64,
    order: EdgeOrder,
    rep: u64,
) -> Result<RunRow> {
    let started = Instant::now();
    let rep_seed = seeding::derive_seed(spec.seed, &[labels::REPETITION, rep]);
    let graph = family.generate(n, seeding::derive_seed(rep_seed, &[labels::GENERATOR]))?;
    let n = graph.n();
    let delta = graph.max_degree();
    let alg = by_name(
        algorithm,
        n,
        delta.max(1),
        seeding::derive_seed(rep_seed, &[labels::ALGORITHM]),
    )?;
    let mut stream = graph.edges();
    if order == EdgeOrder::Shuffled {
        stream.shuffle(&mut seeding::derive_rng(rep_seed, &[labels::ORDER]));
    }
    let output = streaming::run(alg.as_ref(), &stream)?;
    let peak = streaming::measure_peak_state(alg.as_ref(), &stream)?;

    let mut status = String::from("ok");
    if !oracles::is_independent(&graph, output) {
        status = "claimed set is not independent".into();
    } else if peak > budget_bits {
        status = format!("peak state {peak} bits over budget {budget_bits}");
    }

    Ok(RunRow {
        experiment: spec.id.clone(),
        repetition: rep,
        family: family.to_string(),
        algorithm: algorithm.to_string(),
        n,
        m: graph.edge_count(),
        max_degree: delta,
        budget_bits,
        peak_state_bits: Some(peak),
        output_size: output.len(),
        greedy_floor: n as f64 / (delta as f64 + 1.0),
        active_floor: if delta == 0 {
            n as f64
        } else {
            n as f64 / ((delta * delta) as f64)
        },
        threshold: None,
        verdict: "-".into(),
        status,
        wall_ms: started.elapsed().as_secs_f64() * 1e3,
    })
}

/// Run one repetition of an adversary task.
fn run_adversary_rep(
    spec: &ExperimentSpec,
    config: &AdversaryConfig,
    algorithm: &str,
    rep: u64,
) -> Result<RunRow> {
    let started = Instant::now();
    let rep_seed = seeding::derive_seed(spec.seed, &[labels::REPETITION, rep]);
    let mut config = config.clone();
    config.seed = seeding::derive_seed(rep_seed, &[labels::REMOVAL]);
    let alg = by_name(
        algorithm,
        config.n,
        config.delta,
        seeding::derive_seed(rep_seed, &[labels::ALGORITHM]),
    )?;
    let opponent = Opponent::Streaming(alg.as_ref());
    let result = run_adversary(&config, &opponent)?;
    let report = verify_result(&result, &config, &opponent)?;

    let status = if report.all_passed {
        "ok".to_string()
    } else {
        let failed: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| c.applicable && !c.passed)
            .map(|c| c.name.as_str())
            .collect();
        format!("verification failed: {}", failed.join(";"))
    };

    Ok(RunRow {
        experiment: spec.id.clone(),
        repetition: rep,
        family: "adversary".into(),
        algorithm: algorithm.to_string(),
        n: result.n,
        m: result.g_input.edge_count(),
        max_degree: result.g_input.max_degree(),
        budget_bits: config.s_bits,
        peak_state_bits: None,
        output_size: result.output.len(),
        greedy_floor: result.n as f64 / (config.delta as f64 + 1.0),
        active_floor: result.n as f64 / ((config.delta * config.delta) as f64),
        threshold: Some(result.params.threshold),
        verdict: verdict_name(&result.verdict).into(),
        status,
        wall_ms: started.elapsed().as_secs_f64() * 1e3,
    })
}

/// Execute every repetition of a specification, certifying each outcome.
/// Failed validations become row statuses, not errors; hard failures
/// (unknown algorithm, infeasible generator) abort.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Report> {
    if spec.repetitions == 0 {
        return Err(Error::InvalidParameter("repetitions must be ≥ 1".into()));
    }
    let mut rows = Vec::with_capacity(spec.repetitions as usize);
    for rep in 0..spec.repetitions {
        let row = match &spec.task {
            Task::Algorithm {
                family,
                n,
                algorithm,
                budget_bits,
                order,
            } => run_algorithm_rep(spec, family, *n, algorithm, *budget_bits, *order, rep)?,
            Task::Adversary { config, algorithm } => {
                run_adversary_rep(spec, config, algorithm, rep)?
            }
        };
        rows.push(row);
    }
    Ok(Report { rows })
}
