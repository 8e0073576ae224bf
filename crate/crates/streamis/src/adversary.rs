//! The adaptive k-round input construction against bounded-memory opponents.
//!
//! Starting from the complete graph, each round groups the surviving
//! vertices, summarizes the opponent's response function over a
//! degree-conditioned distribution on the grouped subgraph, commits to the
//! lightest summary class as that round's message, removes certified
//! low-degree subgraphs from the class's missing graph, and recurses on the
//! high-degree remainder. The final input is the union of one class member
//! per round plus the removed subgraphs; by construction the opponent's
//! transcript on that input is exactly the committed messages. If the claimed
//! independent set is large, some pair of claimed vertices lies on an edge
//! the opponent provably cannot rule out, and swapping in a stored witness
//! graph containing that edge reproduces the identical transcript — breaking
//! the claim.

use crate::compression::GraphDistribution;
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, VertexSet, MAX_VERTICES};
use crate::oracles;
use crate::protocol::{
    run_protocol, Message, Player, PlayerInput, StreamingPlayer, Transcript,
};
use crate::removal::{partition_and_compress, remove_cliques_partitioned};
use crate::seeding;
use crate::streaming::StreamingAlgorithm;
use serde::{Deserialize, Serialize};

// =============================================================================
// Parameter arithmetic
// =============================================================================

/// Scale constant of the repetition parameter: `128·e·ln 2`.
pub fn rate_constant() -> f64 {
    128.0 * std::f64::consts::E * std::f64::consts::LN_2
}

/// First candidate for the per-round repetition parameter:
/// `⌈2e·ln2·(s+1)/n⌉`.
pub fn ell_first_term(n: usize, s_bits: u64) -> u64 {
    let raw = 2.0 * std::f64::consts::E * std::f64::consts::LN_2 * (s_bits as f64 + 1.0)
        / n as f64;
    raw.ceil() as u64
}

/// The repetition parameter `ℓ = max{⌈2e·ln2·(s+1)/n⌉, ⌈8·ln n⌉}` and round
/// count `k = ⌈ln n⌉ + 1`, from the formulas alone (no domain validation).
pub fn derive_ell_k(n: usize, s_bits: u64) -> (u64, u64) {
    let ell = ell_first_term(n, s_bits).max((8.0 * (n as f64).ln()).ceil() as u64);
    let k = (n as f64).ln().ceil() as u64 + 1;
    (ell, k)
}

/// Check the full-guarantee parameter regime: `e² < n ≤ s` and
/// `max{128·s·ln(n)/n, 128·ln²n} < Δ < √n`, plus `ℓ < Δ/(4·ln 2n)` for the
/// derived `ℓ`. Reports the first violated inequality.
pub fn validate_strict(n: usize, delta: usize, s_bits: u64) -> Result<()> {
    let nf = n as f64;
    let df = delta as f64;
    let sf = s_bits as f64;
    let e2 = std::f64::consts::E * std::f64::consts::E;
    if nf <= e2 {
        return Err(Error::ParameterDomain(format!(
            "needs n > e² ≈ {e2:.4}, got n = {n}"
        )));
    }
    if sf < nf {
        return Err(Error::ParameterDomain(format!(
            "needs n ≤ s, got n = {n}, s = {s_bits}"
        )));
    }
    let low = (128.0 * sf * nf.ln() / nf).max(128.0 * nf.ln() * nf.ln());
    if df <= low {
        return Err(Error::ParameterDomain(format!(
            "needs Δ > max(128·s·ln(n)/n, 128·ln²n) = {low:.4}, got Δ = {delta}"
        )));
    }
    if df >= nf.sqrt() {
        return Err(Error::ParameterDomain(format!(
            "needs Δ < √n = {:.4}, got Δ = {delta}",
            nf.sqrt()
        )));
    }
    let (ell, _) = derive_ell_k(n, s_bits);
    let cap = df / (4.0 * (2.0 * nf).ln());
    if (ell as f64) >= cap {
        return Err(Error::ParameterDomain(format!(
            "needs ℓ < Δ/(4·ln 2n) = {cap:.4}, got ℓ = {ell}"
        )));
    }
    Ok(())
}

/// Derive `(ℓ, k)` under the full-guarantee regime.
pub fn derive_params(n: usize, delta: usize, s_bits: u64) -> Result<(u64, u64)> {
    validate_strict(n, delta, s_bits)?;
    Ok(derive_ell_k(n, s_bits))
}

/// The output-size ceiling `n/Δ²·(1 + k·(96·ℓ²·ln n + 30))` below which a
/// claimed independent set is conceded.
pub fn threshold(n: usize, delta: usize, k: u64, ell: u64) -> f64 {
    let nf = n as f64;
    let d2 = (delta as f64) * (delta as f64);
    nf / d2 * (1.0 + k as f64 * (96.0 * (ell as f64) * (ell as f64) * nf.ln() + 30.0))
}

/// The simplified headline ceiling `1152·r²·ln⁴(n)·s²/(n·Δ²)` with
/// `r = 128·e·ln2`.
pub fn simplified_output_bound(n: usize, delta: usize, s_bits: u64) -> f64 {
    let r = rate_constant();
    let ln_n = (n as f64).ln();
    1152.0 * r * r * ln_n.powi(4) * (s_bits as f64) * (s_bits as f64)
        / (n as f64 * (delta as f64) * (delta as f64))
}

// =============================================================================
// Configuration
// =============================================================================

/// Whether the run enforces (and certifies) the full-guarantee regime or
/// takes every parameter explicitly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Strict,
    Structural,
}

/// How each round's group size is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupSizeRule {
    /// `⌊n_i·Δ²/n⌋`, clamped to ≥ 1 in structural mode.
    Derived,
    /// A fixed size for every round.
    Fixed(usize),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AdversaryConfig {
    pub n: usize,
    pub delta: usize,
    pub s_bits: u64,
    pub mode: Mode,
    pub seed: u64,
    /// Cap on grouped-base edge count for exhaustive summary enumeration.
    pub e_max: usize,
    /// Cap on verified-removal retries.
    pub retry_cap: u64,
    /// Structural-mode overrides; ignored (and rederived) in strict mode.
    pub ell: Option<u64>,
    pub k: Option<u64>,
    pub group_rule: GroupSizeRule,
    pub d_comp: Option<f64>,
    pub d_filter: Option<usize>,
    pub d_remove: Option<usize>,
}

impl AdversaryConfig {
    /// A structural-mode configuration with every knob explicit.
    #[allow(clippy::too_many_arguments)]
    pub fn structural(
        n: usize,
        delta: usize,
        s_bits: u64,
        k: u64,
        ell: u64,
        group_rule: GroupSizeRule,
        d_comp: f64,
        d_filter: usize,
        d_remove: usize,
        seed: u64,
    ) -> Self {
        Self {
            n,
            delta,
            s_bits,
            mode: Mode::Structural,
            seed,
            e_max: crate::compression::DEFAULT_E_MAX,
            retry_cap: crate::removal::DEFAULT_LV_RETRY_CAP,
            ell: Some(ell),
            k: Some(k),
            group_rule,
            d_comp: Some(d_comp),
            d_filter: Some(d_filter),
            d_remove: Some(d_remove),
        }
    }
}

impl AdversaryConfig {
    /// Parse the flat `key = value` configuration format. Lines are
    /// `name = value`; `#` starts a comment; unknown keys are rejected.
    /// Required: `n`, `delta`, `s`, `mode`. Structural runs also need `k`,
    /// `ell`, `d_comp`, `d_filter`, `d_remove`, and take `group` as either
    /// an integer or `derived`.
    pub fn parse_flat(text: &str) -> Result<Self> {
        let mut config = AdversaryConfig {
            n: 0,
            delta: 0,
            s_bits: 0,
            mode: Mode::Structural,
            seed: 0,
            e_max: crate::compression::DEFAULT_E_MAX,
            retry_cap: crate::removal::DEFAULT_LV_RETRY_CAP,
            ell: None,
            k: None,
            group_rule: GroupSizeRule::Derived,
            d_comp: None,
            d_filter: None,
            d_remove: None,
        };
        let mut seen = std::collections::BTreeSet::new();
        let bad = |key: &str, value: &str, e: &dyn std::fmt::Display| {
            Error::Parse(format!("config key {key}: bad value {value:?}: {e}"))
        };
        for raw in text.lines() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Parse(format!("config line {raw:?} is not `key = value`"))
            })?;
            let (key, value) = (key.trim(), value.trim());
            if !seen.insert(key.to_string()) {
                return Err(Error::Parse(format!("duplicate config key {key}")));
            }
            match key {
                "n" => config.n = value.parse().map_err(|e| bad(key, value, &e))?,
                "delta" => config.delta = value.parse().map_err(|e| bad(key, value, &e))?,
                "s" => config.s_bits = value.parse().map_err(|e| bad(key, value, &e))?,
                "mode" => {
                    config.mode = match value {
                        "strict" => Mode::Strict,
                        "structural" => Mode::Structural,
                        other => {
                            return Err(Error::Parse(format!(
                                "config key mode: expected strict or structural, got {other:?}"
                            )))
                        }
                    }
                }
                "seed" => config.seed = value.parse().map_err(|e| bad(key, value, &e))?,
                "e_max" => config.e_max = value.parse().map_err(|e| bad(key, value, &e))?,
                "retry_cap" => {
                    config.retry_cap = value.parse().map_err(|e| bad(key, value, &e))?
                }
                "ell" => config.ell = Some(value.parse().map_err(|e| bad(key, value, &e))?),
                "k" => config.k = Some(value.parse().map_err(|e| bad(key, value, &e))?),
                "group" => {
                    config.group_rule = if value == "derived" {
                        GroupSizeRule::Derived
                    } else {
                        GroupSizeRule::Fixed(value.parse().map_err(|e| bad(key, value, &e))?)
                    }
                }
                "d_comp" => {
                    config.d_comp = Some(value.parse().map_err(|e| bad(key, value, &e))?)
                }
                "d_filter" => {
                    config.d_filter = Some(value.parse().map_err(|e| bad(key, value, &e))?)
                }
                "d_remove" => {
                    config.d_remove = Some(value.parse().map_err(|e| bad(key, value, &e))?)
                }
                other => {
                    return Err(Error::Parse(format!("unknown config key {other:?}")));
                }
            }
        }
        for (key, present) in [
            ("n", config.n != 0),
            ("delta", config.delta != 0),
            ("s", config.s_bits != 0),
            ("mode", seen.contains("mode")),
        ] {
            if !present {
                return Err(Error::Parse(format!("config is missing required key {key}")));
            }
        }
        Ok(config)
    }

    /// Render back to the flat `key = value` format (parse round-trips).
    pub fn to_flat(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("n = {}\n", self.n));
        out.push_str(&format!("delta = {}\n", self.delta));
        out.push_str(&format!("s = {}\n", self.s_bits));
        out.push_str(&format!(
            "mode = {}\n",
            match self.mode {
                Mode::Strict => "strict",
                Mode::Structural => "structural",
            }
        ));
        out.push_str(&format!("seed = {}\n", self.seed));
        out.push_str(&format!("e_max = {}\n", self.e_max));
        out.push_str(&format!("retry_cap = {}\n", self.retry_cap));
        if let Some(k) = self.k {
            out.push_str(&format!("k = {k}\n"));
        }
        if let Some(ell) = self.ell {
            out.push_str(&format!("ell = {ell}\n"));
        }
        match self.group_rule {
            GroupSizeRule::Derived => out.push_str("group = derived\n"),
            GroupSizeRule::Fixed(g) => out.push_str(&format!("group = {g}\n")),
        }
        if let Some(d) = self.d_comp {
            out.push_str(&format!("d_comp = {d}\n"));
        }
        if let Some(d) = self.d_filter {
            out.push_str(&format!("d_filter = {d}\n"));
        }
        if let Some(d) = self.d_remove {
            out.push_str(&format!("d_remove = {d}\n"));
        }
        out
    }
}

/// The concrete per-round parameters a configuration resolves to.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResolvedParams {
    pub ell: u64,
    pub k: u64,
    pub d_comp: f64,
    pub d_filter: usize,
    pub d_remove: usize,
    pub threshold: f64,
}

/// Resolve and validate a configuration.
pub fn resolve_params(config: &AdversaryConfig) -> Result<ResolvedParams> {
    if config.n == 0 || config.n > MAX_VERTICES {
        return Err(Error::InvalidParameter(format!(
            "vertex count {} outside 1..={MAX_VERTICES}",
            config.n
        )));
    }
    if config.delta == 0 {
        return Err(Error::InvalidParameter("degree budget must be ≥ 1".into()));
    }
    if (config.n as u64) > config.s_bits {
        return Err(Error::InvalidParameter(format!(
            "message budget {} bits cannot carry an {}-bit output bitmap",
            config.s_bits, config.n
        )));
    }
    match config.mode {
        Mode::Strict => {
            let (ell, k) = derive_params(config.n, config.delta, config.s_bits)?;
            if ell == 0 {
                return Err(Error::ParameterDomain(
                    "derived repetition parameter is zero".into(),
                ));
            }
            Ok(ResolvedParams {
                ell,
                k,
                d_comp: config.delta as f64 / ell as f64,
                d_filter: (ell * ell) as usize * config.delta,
                d_remove: (config.delta / 2).max(1),
                threshold: threshold(config.n, config.delta, k, ell),
            })
        }
        Mode::Structural => {
            let missing = |what: &str| {
                Error::InvalidParameter(format!(
                    "structural mode requires an explicit {what}"
                ))
            };
            let ell = config.ell.ok_or_else(|| missing("ell"))?;
            let k = config.k.ok_or_else(|| missing("k"))?;
            let d_comp = config.d_comp.ok_or_else(|| missing("d_comp"))?;
            let d_filter = config.d_filter.ok_or_else(|| missing("d_filter"))?;
            let d_remove = config.d_remove.ok_or_else(|| missing("d_remove"))?;
            if k == 0 {
                return Err(Error::InvalidParameter("round count must be ≥ 1".into()));
            }
            if !(d_comp.is_finite() && d_comp > 0.0) || d_filter == 0 || d_remove == 0 {
                return Err(Error::InvalidParameter(
                    "compression, filter, and removal degrees must be positive".into(),
                ));
            }
            if let GroupSizeRule::Fixed(0) = config.group_rule {
                return Err(Error::InvalidParameter("group size must be ≥ 1".into()));
            }
            Ok(ResolvedParams {
                ell,
                k,
                d_comp,
                d_filter,
                d_remove,
                threshold: threshold(config.n, config.delta, k, ell),
            })
        }
    }
}

// =============================================================================
// Opponents
// =============================================================================

/// What the adversary plays against: a streaming algorithm (via the
/// state-passing reduction) or an explicit list of protocol players.
pub enum Opponent<'a> {
    Streaming(&'a dyn StreamingAlgorithm),
    Players(Vec<&'a dyn Player>),
}

impl Opponent<'_> {
    fn check(&self, n: usize, k: u64) -> Result<()> {
        match self {
            Opponent::Streaming(alg) => {
                if alg.vertex_count() != n {
                    return Err(Error::InvalidParameter(format!(
                        "algorithm is built for {} vertices, configuration says {n}",
                        alg.vertex_count()
                    )));
                }
            }
            Opponent::Players(players) => {
                if players.len() != k as usize {
                    return Err(Error::InvalidParameter(format!(
                        "{} players supplied for a {k}-round game",
                        players.len()
                    )));
                }
            }
        }
        Ok(())
    }

    /// The message player `round_idx` (zero-based) emits on `input` given the
    /// prior messages.
    fn respond(
        &self,
        round_idx: usize,
        k: u64,
        budget_bits: u64,
        input: &PlayerInput,
        prior: &[Message],
    ) -> Result<Message> {
        match self {
            Opponent::Streaming(alg) => {
                StreamingPlayer::new(*alg, round_idx, k as usize, budget_bits)?
                    .respond(input, prior)
            }
            Opponent::Players(players) => players[round_idx].respond(input, prior),
        }
    }

    /// Run the full protocol on per-round inputs.
    fn run(
        &self,
        inputs: &[PlayerInput],
        n: usize,
        budget_bits: u64,
    ) -> Result<Transcript> {
        match self {
            Opponent::Streaming(alg) => {
                crate::protocol::run_streaming_protocol(*alg, inputs, budget_bits, None)
            }
            Opponent::Players(players) => {
                run_protocol(players, inputs, n, budget_bits, None)
            }
        }
    }
}

// =============================================================================
// Round records and results
// =============================================================================

/// Everything one round produced. Rounds after the active set collapses are
/// materialized as terminated no-ops so the transcript keeps exactly `k`
/// messages and round indices stay aligned.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RoundRecord {
    /// One-based round index.
    pub round: usize,
    /// Active vertices at the start of the round.
    pub active: VertexSet,
    /// The base graph at the start of the round.
    pub g_base: Graph,
    /// Whether the round was terminated (active set below the floor).
    pub terminated: bool,
    /// Group size used (absent when terminated).
    pub group_size: Option<usize>,
    /// Union of the base induced on each group (absent when terminated).
    pub h_base: Option<Graph>,
    /// Edge-keep probability and degree parameter of the round's distribution.
    pub dist_p: Option<f64>,
    pub dist_d: Option<f64>,
    /// The committed message of this round.
    pub message: Message,
    /// Usable parts (groups clipped to the missing graph's low-degree side).
    pub parts: Option<Vec<VertexSet>>,
    /// High-degree remainder that the next round recurses on.
    pub q: Option<VertexSet>,
    /// The committed class's missing graph.
    pub h_miss: Option<Graph>,
    /// The class member fed to the opponent this round (empty if terminated).
    pub h_chosen: Graph,
    /// Removed edges carried *into* this round (computed by the previous one).
    pub r_in: Graph,
    /// Removed edges computed by this round for the next.
    pub r_next: Graph,
    /// Class statistics of the round's summary analysis.
    pub class_count: Option<u64>,
    pub support_size: Option<u64>,
    pub missing_edge_count: Option<u64>,
    /// Per-part verified-removal trial counts.
    pub removal_trials: Option<Vec<u64>>,
}

/// Non-serialized per-round state the breaking construction consumes.
struct RoundState {
    /// Distribution of the round (for mask decoding), if not terminated.
    dist: Option<GraphDistribution>,
    /// For each grouped-base edge index: a member mask of the committed class
    /// containing that edge.
    witnesses: Vec<Option<u64>>,
    /// Canonical edge order of the grouped base (mask indexing).
    base_edges: Vec<Edge>,
}

/// How the run ended.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Verdict {
    /// The claimed set is within the conceded ceiling.
    SmallOutput { threshold: f64 },
    /// The claimed set already contains both endpoints of an input edge.
    AlreadyWrong { edge: Edge },
    /// Swapping one round's class member for a stored witness yields a
    /// different input with the identical transcript and an edge inside the
    /// claimed set.
    Broken {
        edge: Edge,
        witness_round: usize,
        alt_input: Graph,
        alt_transcript: Transcript,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AdversaryResult {
    pub n: usize,
    pub delta: usize,
    pub s_bits: u64,
    pub mode: Mode,
    pub params: ResolvedParams,
    pub rounds: Vec<RoundRecord>,
    /// Union of every round's class member and carried removal edges.
    pub g_input: Graph,
    /// The opponent's transcript on `g_input` (replayed, bit-exact).
    pub transcript: Transcript,
    /// The claimed independent set decoded from the final message.
    pub output: VertexSet,
    pub verdict: Verdict,
}

/// Compact per-round summary for reports: content hashes and cardinalities
/// instead of full graphs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RoundDigest {
    pub round: usize,
    pub terminated: bool,
    pub g_base_hash: String,
    pub h_base_hash: Option<String>,
    pub h_chosen_hash: String,
    pub r_in_hash: String,
    pub missing_edge_count: Option<u64>,
    pub q_size: Option<usize>,
    pub part_count: Option<usize>,
    pub message_digest: String,
}

impl AdversaryResult {
    /// The per-player inputs that reproduce the transcript.
    pub fn round_inputs(&self) -> Result<Vec<PlayerInput>> {
        self.rounds
            .iter()
            .map(|r| PlayerInput::from_blocks(&r.r_in, &r.h_chosen))
            .collect()
    }

    /// Compact per-round digests for flat reporting.
    pub fn round_digests(&self) -> Vec<RoundDigest> {
        self.rounds
            .iter()
            .map(|r| RoundDigest {
                round: r.round,
                terminated: r.terminated,
                g_base_hash: r.g_base.digest_hex(),
                h_base_hash: r.h_base.as_ref().map(Graph::digest_hex),
                h_chosen_hash: r.h_chosen.digest_hex(),
                r_in_hash: r.r_in.digest_hex(),
                missing_edge_count: r.missing_edge_count,
                q_size: r.q.map(|q| q.len()),
                part_count: r.parts.as_ref().map(Vec::len),
                message_digest: r.message.digest_hex(),
            })
            .collect()
    }
}

// =============================================================================
// The main loop
// =============================================================================

/// Execute the k-round construction against an opponent and classify the
/// outcome.
pub fn run_adversary(config: &AdversaryConfig, opponent: &Opponent) -> Result<AdversaryResult> {
    let params = resolve_params(config)?;
    opponent.check(config.n, params.k)?;
    let n = config.n;
    let floor = n as f64 / ((config.delta as f64) * (config.delta as f64));

    let mut g_base = Graph::complete(n)?;
    let mut active = VertexSet::full(n);
    let mut r_in = Graph::empty(n)?;
    let mut messages: Vec<Message> = Vec::with_capacity(params.k as usize);
    let mut records: Vec<RoundRecord> = Vec::with_capacity(params.k as usize);
    let mut states: Vec<RoundState> = Vec::with_capacity(params.k as usize);

    for round in 1..=params.k as usize {
        let n_i = active.len();
        if (n_i as f64) < floor {
            // Terminated round: the opponent still answers on the carried
            // removal edges alone, and nothing else changes.
            let input = PlayerInput::from_blocks(&r_in, &Graph::empty(n)?)?;
            let message =
                opponent.respond(round - 1, params.k, config.s_bits, &input, &messages)?;
            records.push(RoundRecord {
                round,
                active,
                g_base: g_base.clone(),
                terminated: true,
                group_size: None,
                h_base: None,
                dist_p: None,
                dist_d: None,
                message: message.clone(),
                parts: None,
                q: None,
                h_miss: None,
                h_chosen: Graph::empty(n)?,
                r_in: r_in.clone(),
                r_next: Graph::empty(n)?,
                class_count: None,
                support_size: None,
                missing_edge_count: None,
                removal_trials: None,
            });
            states.push(RoundState {
                dist: None,
                witnesses: Vec::new(),
                base_edges: Vec::new(),
            });
            messages.push(message);
            r_in = Graph::empty(n)?;
            continue;
        }

        let group_size = match config.group_rule {
            GroupSizeRule::Fixed(g) => g,
            GroupSizeRule::Derived => {
                let g = (n_i as u128 * (config.delta as u128).pow(2) / n as u128) as usize;
                match config.mode {
                    Mode::Strict if g == 0 => {
                        return Err(Error::InternalConsistency(
                            "derived group size collapsed to zero in strict mode".into(),
                        ))
                    }
                    _ => g.max(1),
                }
            }
        };

        let strict = config.mode == Mode::Strict;
        let round_idx = round - 1;
        let setup = partition_and_compress(
            &g_base,
            active,
            group_size,
            config.s_bits,
            params.d_comp,
            params.d_filter,
            strict,
            config.e_max,
            |_dist: &GraphDistribution| {
                let r_ref = &r_in;
                let prior = &messages;
                move |h: &Graph| -> Result<Message> {
                    let input = PlayerInput::from_blocks(r_ref, h)?;
                    opponent.respond(round_idx, params.k, config.s_bits, &input, prior)
                }
            },
        )?;
        let message = setup.light.message.clone();
        if message.bit_len() > config.s_bits {
            return Err(Error::BudgetViolation {
                bits: message.bit_len(),
                budget: config.s_bits,
                context: format!("message committed in round {round}"),
            });
        }

        let removal_seed = seeding::derive_seed(config.seed, &[round as u64]);
        let (r_next, trials) = remove_cliques_partitioned(
            setup.h_miss(),
            &setup.parts,
            setup.q,
            params.d_filter,
            params.d_remove,
            removal_seed,
            config.retry_cap,
        )?;

        let next_base = g_base
            .difference(&setup.h_base.difference(setup.h_miss())?)?
            .induced(setup.q)?;

        records.push(RoundRecord {
            round,
            active,
            g_base: g_base.clone(),
            terminated: false,
            group_size: Some(group_size),
            h_base: Some(setup.h_base.clone()),
            dist_p: Some(setup.dist.p()),
            dist_d: Some(setup.dist.d()),
            message: message.clone(),
            parts: Some(setup.parts.parts().to_vec()),
            q: Some(setup.q),
            h_miss: Some(setup.light.missing.clone()),
            h_chosen: setup.light.representative.clone(),
            r_in: r_in.clone(),
            r_next: r_next.clone(),
            class_count: Some(setup.light.class_count),
            support_size: Some(setup.light.support_size),
            missing_edge_count: Some(setup.light.missing.edge_count() as u64),
            removal_trials: Some(trials),
        });
        states.push(RoundState {
            base_edges: setup.h_base.edges(),
            dist: Some(setup.dist),
            witnesses: setup.light.witnesses,
        });
        messages.push(message);
        g_base = next_base;
        active = setup.q;
        r_in = r_next;
    }

    // Assemble the input: every round's class member plus its carried
    // removal edges. These are edge-disjoint by construction; certify it.
    let mut pieces: Vec<&Graph> = Vec::new();
    for r in &records {
        pieces.push(&r.h_chosen);
        pieces.push(&r.r_in);
    }
    if !crate::graph::are_edge_disjoint(&pieces) {
        return Err(Error::InternalConsistency(
            "round inputs are not edge-disjoint".into(),
        ));
    }
    let mut g_input = Graph::empty(n)?;
    for piece in pieces {
        g_input = g_input.union(piece)?;
    }

    // Replay the protocol on the assembled input; the transcript must equal
    // the committed messages bit-exactly.
    let inputs: Vec<PlayerInput> = records
        .iter()
        .map(|r| PlayerInput::from_blocks(&r.r_in, &r.h_chosen))
        .collect::<Result<_>>()?;
    let transcript = opponent.run(&inputs, n, config.s_bits)?;
    if transcript.messages != messages {
        return Err(Error::InternalConsistency(
            "replayed transcript differs from the committed messages".into(),
        ));
    }
    let output = transcript.final_output;

    let verdict = if (output.len() as f64) <= params.threshold {
        Verdict::SmallOutput {
            threshold: params.threshold,
        }
    } else {
        breaking_graph(
            &records, &states, &g_input, output, opponent, config, &params, &transcript,
        )?
    };

    Ok(AdversaryResult {
        n,
        delta: config.delta,
        s_bits: config.s_bits,
        mode: config.mode,
        params,
        rounds: records,
        g_input,
        transcript,
        output,
        verdict,
    })
}

// =============================================================================
// Breaking an oversized claim
// =============================================================================

/// Find a claimed pair the opponent cannot distinguish from an edge.
///
/// Scan parts by how much of the claim they hold. A claimed pair inside a
/// part either already lies on an input edge (the claim is wrong as-is), sits
/// inside the round's missing graph (provably absent — skip), or was covered
/// by some round's committed class: walking rounds backwards finds the round
/// whose grouped base held the pair outside its missing graph, and that
/// round's stored witness is a class member containing the pair. Swapping it
/// in reproduces the transcript on an input that refutes the claim.
#[allow(clippy::too_many_arguments)]
fn breaking_graph(
    records: &[RoundRecord],
    states: &[RoundState],
    g_input: &Graph,
    claimed: VertexSet,
    opponent: &Opponent,
    config: &AdversaryConfig,
    params: &ResolvedParams,
    transcript: &Transcript,
) -> Result<Verdict> {
    // All (round, part) pairs, heaviest claim overlap first; ties by round
    // then part position for determinism.
    let mut scan: Vec<(usize, usize, VertexSet)> = Vec::new();
    for (ri, rec) in records.iter().enumerate() {
        if let Some(parts) = &rec.parts {
            for (pi, &part) in parts.iter().enumerate() {
                let overlap = part.intersection(claimed);
                if overlap.len() >= 2 {
                    scan.push((ri, pi, overlap));
                }
            }
        }
    }
    scan.sort_by(|a, b| {
        b.2.len()
            .cmp(&a.2.len())
            .then(a.0.cmp(&b.0))
            .then(a.1.cmp(&b.1))
    });

    for (ri, _pi, overlap) in scan {
        let rec = &records[ri];
        let h_miss = rec.h_miss.as_ref().expect("non-terminated round has a missing graph");
        let members = overlap.to_vec();
        for (a_idx, &u) in members.iter().enumerate() {
            for &v in &members[a_idx + 1..] {
                if g_input.has_edge(u, v) {
                    return Ok(Verdict::AlreadyWrong { edge: (u, v) });
                }
                if h_miss.has_edge(u, v) {
                    // Provably absent from every member of this round's
                    // class; later rounds cannot resurrect it either.
                    continue;
                }
                if let Some(verdict) = try_substitution(
                    records, states, (u, v), ri, claimed, opponent, config, params,
                    transcript,
                )? {
                    return Ok(verdict);
                }
                return Err(Error::InternalConsistency(format!(
                    "no committed class ever covered the claimed pair ({u}, {v})"
                )));
            }
        }
    }
    Err(Error::InternalConsistency(format!(
        "claimed set of size {} exceeds the ceiling {} but no part holds a usable pair",
        claimed.len(),
        params.threshold
    )))
}

/// Walk rounds `start..=1` looking for the round whose grouped base covered
/// `edge` outside its missing graph; substitute that round's witness member
/// and replay.
#[allow(clippy::too_many_arguments)]
fn try_substitution(
    records: &[RoundRecord],
    states: &[RoundState],
    edge: Edge,
    start: usize,
    claimed: VertexSet,
    opponent: &Opponent,
    config: &AdversaryConfig,
    params: &ResolvedParams,
    transcript: &Transcript,
) -> Result<Option<Verdict>> {
    let (u, v) = edge;
    for j in (0..=start).rev() {
        let rec = &records[j];
        let (Some(h_base), Some(h_miss)) = (&rec.h_base, &rec.h_miss) else {
            continue;
        };
        if !h_base.has_edge(u, v) || h_miss.has_edge(u, v) {
            continue;
        }
        let state = &states[j];
        let edge_idx = state
            .base_edges
            .iter()
            .position(|&e| e == edge)
            .ok_or_else(|| {
                Error::InternalConsistency("grouped-base edge missing from its index".into())
            })?;
        let mask = state.witnesses[edge_idx].ok_or_else(|| {
            Error::InternalConsistency(
                "covered edge has no stored witness member".into(),
            )
        })?;
        let dist = state.dist.as_ref().expect("non-terminated round has a distribution");
        let witness = dist.graph_from_mask(mask)?;
        if !witness.has_edge(u, v) {
            return Err(Error::InternalConsistency(
                "stored witness does not contain its edge".into(),
            ));
        }

        // Rebuild the inputs with round j's member swapped for the witness.
        let mut alt_pieces: Vec<&Graph> = Vec::new();
        let mut alt_inputs: Vec<PlayerInput> = Vec::with_capacity(records.len());
        for (idx, r) in records.iter().enumerate() {
            let h = if idx == j { &witness } else { &r.h_chosen };
            alt_pieces.push(h);
            alt_pieces.push(&r.r_in);
            alt_inputs.push(PlayerInput::from_blocks(&r.r_in, h)?);
        }
        if !crate::graph::are_edge_disjoint(&alt_pieces) {
            return Err(Error::InternalConsistency(
                "witness substitution broke edge-disjointness".into(),
            ));
        }
        let mut alt_input = Graph::empty(config.n)?;
        for piece in alt_pieces {
            alt_input = alt_input.union(piece)?;
        }
        let alt_transcript = opponent.run(&alt_inputs, config.n, config.s_bits)?;
        if alt_transcript != *transcript {
            return Err(Error::InternalConsistency(
                "witness substitution changed the transcript".into(),
            ));
        }
        debug_assert!(claimed.contains(u) && claimed.contains(v));
        let _ = params;
        return Ok(Some(Verdict::Broken {
            edge,
            witness_round: j + 1,
            alt_input,
            alt_transcript,
        }));
    }
    Ok(None)
}

// =============================================================================
// Verification
// =============================================================================

/// One named verification check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckItem {
    pub name: String,
    pub passed: bool,
    /// Whether the check counts toward the overall pass (full-guarantee
    /// checks are informational in structural mode).
    pub applicable: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckItem>,
    pub all_passed: bool,
}

impl VerificationReport {
    pub fn check(&self, name: &str) -> Option<&CheckItem> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Re-derive every certifiable fact of a finished run: input provenance,
/// degree decomposition, active-set shrinkage, part counts, replay fidelity,
/// and verdict soundness.
pub fn verify_result(
    result: &AdversaryResult,
    config: &AdversaryConfig,
    opponent: &Opponent,
) -> Result<VerificationReport> {
    let mut checks = Vec::new();
    let strict = config.mode == Mode::Strict;
    let params = &result.params;

    // Provenance: the pieces are edge-disjoint and union to the input.
    {
        let mut pieces: Vec<&Graph> = Vec::new();
        for r in &result.rounds {
            pieces.push(&r.h_chosen);
            pieces.push(&r.r_in);
        }
        let disjoint = crate::graph::are_edge_disjoint(&pieces);
        let mut union = Graph::empty(result.n)?;
        if disjoint {
            for p in &pieces {
                union = union.union(p)?;
            }
        }
        let covered = disjoint && union == result.g_input;
        checks.push(CheckItem {
            name: "edge-disjoint-provenance".into(),
            passed: covered,
            applicable: true,
            detail: if covered {
                "every input edge comes from exactly one round piece".into()
            } else if !disjoint {
                "round pieces share an edge".into()
            } else {
                "union of round pieces differs from the recorded input".into()
            },
        });
    }

    // Degree decomposition: each piece respects its cap, and the input's
    // degree respects the summed caps (and Δ itself in strict mode).
    {
        let h_cap = 2.0 * params.d_comp;
        let mut piece_ok = true;
        for r in &result.rounds {
            if (r.h_chosen.max_degree() as f64) > h_cap {
                piece_ok = false;
            }
            if r.r_in.max_degree() > params.d_remove {
                piece_ok = false;
            }
        }
        let summed = params.k as f64 * (h_cap + params.d_remove as f64);
        let max_deg = result.g_input.max_degree() as f64;
        let mut passed = piece_ok && max_deg <= summed;
        let mut detail = format!(
            "max input degree {max_deg} against per-round caps {h_cap} + {} over {} rounds",
            params.d_remove, params.k
        );
        if strict {
            passed = passed && max_deg <= config.delta as f64;
            detail.push_str(&format!("; degree budget {}", config.delta));
        }
        checks.push(CheckItem {
            name: "degree-decomposition".into(),
            passed,
            applicable: true,
            detail,
        });
    }

    // Active-set shrinkage: final active count within the floor.
    {
        let floor = result.n as f64 / ((result.delta as f64) * (result.delta as f64));
        let n_k = result.rounds.last().map_or(result.n, |r| r.active.len());
        let holds = (n_k as f64) <= floor;
        checks.push(CheckItem {
            name: "active-shrinkage".into(),
            passed: holds || !strict,
            applicable: strict,
            detail: format!("final active count {n_k} against floor {floor:.6}; holds: {holds}"),
        });
    }

    // Part counts within 3n/Δ² per round.
    {
        let cap = 3.0 * result.n as f64 / ((result.delta as f64) * (result.delta as f64));
        let worst = result
            .rounds
            .iter()
            .filter_map(|r| r.parts.as_ref().map(|p| p.len()))
            .max()
            .unwrap_or(0);
        let holds = (worst as f64) <= cap;
        checks.push(CheckItem {
            name: "part-count".into(),
            passed: holds || !strict,
            applicable: strict,
            detail: format!("largest part count {worst} against ceiling {cap:.6}; holds: {holds}"),
        });
    }

    // Replay fidelity.
    {
        let inputs = result.round_inputs()?;
        let replay = opponent.run(&inputs, result.n, result.s_bits);
        let passed = matches!(&replay, Ok(t) if *t == result.transcript);
        checks.push(CheckItem {
            name: "replay-fidelity".into(),
            passed,
            applicable: true,
            detail: match replay {
                Ok(t) if t == result.transcript => "transcript reproduced bit-exactly".into(),
                Ok(_) => "replay produced a different transcript".into(),
                Err(e) => format!("replay failed: {e}"),
            },
        });
    }

    // Verdict soundness.
    {
        let (passed, detail) = match &result.verdict {
            Verdict::SmallOutput { threshold } => (
                (result.output.len() as f64) <= *threshold,
                format!("claimed {} ≤ ceiling {threshold:.4}", result.output.len()),
            ),
            Verdict::AlreadyWrong { edge } => {
                let (u, v) = *edge;
                let ok = result.g_input.has_edge(u, v)
                    && result.output.contains(u)
                    && result.output.contains(v)
                    && !oracles::is_independent(&result.g_input, result.output);
                (ok, format!("claimed pair ({u}, {v}) lies on an input edge"))
            }
            Verdict::Broken {
                edge,
                witness_round,
                alt_input,
                alt_transcript,
            } => {
                let (u, v) = *edge;
                let inputs = result.round_inputs()?;
                let mut alt_ok = alt_input.has_edge(u, v)
                    && result.output.contains(u)
                    && result.output.contains(v)
                    && !oracles::is_independent(alt_input, result.output)
                    && alt_transcript == &result.transcript
                    && *witness_round >= 1
                    && *witness_round <= result.rounds.len();
                // Re-drive the opponent on the substituted input; the
                // transcript must again match bit-exactly.
                if alt_ok {
                    let mut alt_inputs = inputs;
                    let j = *witness_round - 1;
                    let extra = alt_input.difference(&result.g_input)?;
                    let alt_h = result.rounds[j].h_chosen.union(&extra)?;
                    alt_inputs[j] = PlayerInput::from_blocks(&result.rounds[j].r_in, &alt_h)?;
                    match opponent.run(&alt_inputs, result.n, result.s_bits) {
                        Ok(t) => alt_ok = t == result.transcript,
                        Err(_) => alt_ok = false,
                    }
                }
                (
                    alt_ok,
                    format!(
                        "substituted round {witness_round} witness keeps the transcript and pins ({u}, {v})"
                    ),
                )
            }
        };
        checks.push(CheckItem {
            name: "verdict-soundness".into(),
            passed,
            applicable: true,
            detail,
        });
    }

    let all_passed = checks.iter().all(|c| c.passed || !c.applicable);
    Ok(VerificationReport { checks, all_passed })
}

// =============================================================================
// Tests
// =============================================================================
