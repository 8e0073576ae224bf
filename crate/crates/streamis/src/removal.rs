//! Certified clique removal and the partition-and-compress pipeline.
//!
//! The core primitive removes a low-degree subgraph `H` from `G` so that the
//! remainder `G − H` has provably small cliques. Removal happens per part of
//! a vertex partition, so a later stage can argue about clique sizes part by
//! part; the partition itself comes from grouping the active vertices, taking
//! the light summary class of a degree-conditioned distribution over the
//! grouped subgraph, and splitting its missing graph into a low-degree body
//! and a small high-degree remainder.

use crate::compression::{
    find_light_summary, GraphDistribution, LightSummary, SummaryFn,
};
use crate::error::{Error, Result};
use crate::graph::{partition_fixed, Graph, Partition, VertexSet};
use crate::oracles;
use crate::seeding::{self, labels};
use rand::Rng;

/// Default cap on verified-removal retries.
pub const DEFAULT_LV_RETRY_CAP: u64 = 1000;

// =============================================================================
// Degree split
// =============================================================================

/// A graph's vertices split into the low-degree body and the high-degree
/// remainder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitResult {
    /// Vertices of degree ≤ the split bound ("P").
    pub low: VertexSet,
    /// The remaining high-degree vertices ("Q").
    pub high: VertexSet,
}

/// Split by the degree threshold `b`: the low side induces a subgraph of
/// maximum degree ≤ `b`, and the high side has at most `2m/b` vertices.
pub fn split(g: &Graph, b: usize) -> Result<SplitResult> {
    if b == 0 {
        return Err(Error::InvalidParameter("split bound must be ≥ 1".into()));
    }
    let mut low = VertexSet::EMPTY;
    let mut high = VertexSet::EMPTY;
    for v in 0..g.n() {
        if g.degree(v) <= b {
            low = low.with(v);
        } else {
            high = high.with(v);
        }
    }
    debug_assert!(g.induced(low).expect("subset of universe").max_degree() <= b);
    debug_assert!((high.len() as f64) <= 2.0 * g.edge_count() as f64 / b as f64);
    Ok(SplitResult { low, high })
}

// =============================================================================
// Clique removal on one low-degree graph
// =============================================================================

/// Which rule produced the removed subgraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum RemovalBranch {
    /// The whole graph already had degree ≤ the target: remove everything.
    WholeGraph,
    /// The target degree is within `16·ln n`, where removing nothing already
    /// meets the clique ceiling.
    SmallTarget,
    /// Ten or fewer vertices: cliques cannot exceed the additive constant.
    FewVertices,
    /// The verified random-sampling loop.
    Sampled,
}

/// Result of one removal call: the removed subgraph, how many sampling trials
/// were spent (zero for the closed-form branches), and the rule used.
#[derive(Debug, Clone)]
pub struct RemovalOutcome {
    pub removed: Graph,
    pub trials: u64,
    pub branch: RemovalBranch,
}

/// The clique ceiling guaranteed for the remainder: `16·ln(n)·Δ/d + 10`.
pub fn clique_bound(n: usize, delta: usize, d: usize) -> f64 {
    16.0 * (n as f64).ln() * (delta as f64) / (d as f64) + 10.0
}

/// The verified sampling core: keep each edge with probability `d/(2Δ(G))`
/// and accept only draws that the exact oracles certify — degree of the
/// removed graph ≤ `d` and maximum clique of the remainder ≤ the ceiling.
pub fn las_vegas_removal<R: Rng>(
    g: &Graph,
    d: usize,
    rng: &mut R,
    retry_cap: u64,
) -> Result<RemovalOutcome> {
    if d == 0 {
        return Err(Error::InvalidParameter("removal degree must be ≥ 1".into()));
    }
    let delta = g.max_degree();
    if delta == 0 {
        return Ok(RemovalOutcome {
            removed: Graph::empty(g.n())?,
            trials: 0,
            branch: RemovalBranch::Sampled,
        });
    }
    let p = (d as f64 / (2.0 * delta as f64)).min(1.0);
    let ceiling = clique_bound(g.n(), delta, d);
    for attempt in 1..=retry_cap {
        let kept: Vec<_> = g
            .edges()
            .into_iter()
            .filter(|_| rng.random_bool(p))
            .collect();
        let h = Graph::from_edges(g.n(), &kept)?;
        if h.max_degree() > d {
            continue;
        }
        let remainder = g.difference(&h)?;
        if (oracles::clique_number(&remainder)? as f64) <= ceiling {
            return Ok(RemovalOutcome {
                removed: h,
                trials: attempt,
                branch: RemovalBranch::Sampled,
            });
        }
    }
    Err(Error::LasVegasFailure {
        attempts: retry_cap,
    })
}

/// Remove a degree-≤-`d` subgraph `H` from `G` so that `ω(G − H)` is at most
/// `16·ln(n)·Δ(G)/d + 10`.
///
/// Closed-form cases, in order: if `Δ(G) ≤ d` the whole graph is removed
/// (remainder clique size 1); if `d ≤ 16·ln n` nothing needs removing, since
/// the ceiling already exceeds `Δ(G) ≥ ω(G) − 1`; if `n ≤ 10` nothing needs
/// removing either. Otherwise the sampling core runs. Every branch's output
/// is certified against both postconditions with the exact clique oracle.
pub fn remove_cliques_low_degree<R: Rng>(
    g: &Graph,
    d: usize,
    rng: &mut R,
    retry_cap: u64,
) -> Result<RemovalOutcome> {
    if d == 0 {
        return Err(Error::InvalidParameter("removal degree must be ≥ 1".into()));
    }
    let n = g.n();
    let delta = g.max_degree();
    let outcome = if delta <= d {
        RemovalOutcome {
            removed: g.clone(),
            trials: 0,
            branch: RemovalBranch::WholeGraph,
        }
    } else if (d as f64) <= 16.0 * (n as f64).ln() {
        RemovalOutcome {
            removed: Graph::empty(n)?,
            trials: 0,
            branch: RemovalBranch::SmallTarget,
        }
    } else if n <= 10 {
        RemovalOutcome {
            removed: Graph::empty(n)?,
            trials: 0,
            branch: RemovalBranch::FewVertices,
        }
    } else {
        las_vegas_removal(g, d, rng, retry_cap)?
    };

    // Certify the postconditions no matter which branch answered.
    if outcome.removed.max_degree() > d {
        return Err(Error::InternalConsistency(format!(
            "removed subgraph has degree {} over the target {d}",
            outcome.removed.max_degree()
        )));
    }
    let remainder = g.difference(&outcome.removed)?;
    let omega = oracles::clique_number(&remainder).unwrap();
    let ceiling = clique_bound(n, delta.max(d), d);
    if (omega as f64) > ceiling {
        return Err(Error::InternalConsistency(format!(
            "remainder clique size {omega} over the ceiling {ceiling}"
        )));
    }
    Ok(outcome)
}

// =============================================================================
// Per-part removal
// =============================================================================

/// Run the removal on each part's induced subgraph and return the union `R`
/// of the removed edges, plus per-part trial counts.
///
/// No removed edge touches `excluded` (the parts are disjoint from it), the
/// union has degree ≤ `d_remove` (parts are vertex-disjoint), and within each
/// part the remainder's clique size is certified against
/// `16·ln(n)·d_filter/d_remove + 10`.
pub fn remove_cliques_partitioned(
    h_miss: &Graph,
    parts: &Partition,
    excluded: VertexSet,
    d_filter: usize,
    d_remove: usize,
    seed: u64,
    retry_cap: u64,
) -> Result<(Graph, Vec<u64>)> {
    if d_remove == 0 {
        return Err(Error::InvalidParameter("removal degree must be ≥ 1".into()));
    }
    let n = h_miss.n();
    let per_part_ceiling = clique_bound(n, d_filter, d_remove);
    let mut removed = Graph::empty(n)?;
    let mut trials = Vec::with_capacity(parts.len());
    for (idx, &part) in parts.parts().iter().enumerate() {
        if !part.is_disjoint(excluded) {
            return Err(Error::InvalidParameter(format!(
                "part {idx} overlaps the excluded vertex set"
            )));
        }
        let local = h_miss.induced(part)?;
        if local.max_degree() > d_filter {
            return Err(Error::InvalidParameter(format!(
                "part {idx} induces degree {} over the filter bound {d_filter}",
                local.max_degree()
            )));
        }
        let mut rng = seeding::derive_rng(seed, &[labels::REMOVAL, idx as u64]);
        let outcome = remove_cliques_low_degree(&local, d_remove, &mut rng, retry_cap)?;
        let leftover = local.difference(&outcome.removed)?;
        let omega = oracles::clique_number(&leftover)?;
        if (omega as f64) > per_part_ceiling {
            return Err(Error::InternalConsistency(format!(
                "part {idx} remainder clique {omega} over the per-part ceiling {per_part_ceiling}"
            )));
        }
        removed = removed.union(&outcome.removed)?;
        trials.push(outcome.trials);
    }
    for v in excluded.iter() {
        if removed.degree(v) != 0 {
            return Err(Error::InternalConsistency(format!(
                "removed edge touches excluded vertex {v}"
            )));
        }
    }
    if removed.max_degree() > d_remove {
        return Err(Error::InternalConsistency(format!(
            "combined removal degree {} over {d_remove}",
            removed.max_degree()
        )));
    }
    Ok((removed, trials))
}

// =============================================================================
// Partition and compress
// =============================================================================

/// Everything one compression round produces: the grouped base, the
/// distribution, the light summary class (with witnesses), the usable parts,
/// and the high-degree remainder vertices.
#[derive(Debug, Clone)]
pub struct CompressSetup {
    /// Union of the base graph induced on each group.
    pub h_base: Graph,
    /// The distribution over subgraphs of `h_base` that was summarized.
    pub dist: GraphDistribution,
    /// The fixed grouping of the active vertices.
    pub groups: Partition,
    /// The light summary class: message, missing graph, witnesses.
    pub light: LightSummary,
    /// Groups intersected with the low-degree side of the missing graph.
    pub parts: Partition,
    /// High-degree vertices of the missing graph.
    pub q: VertexSet,
    /// Whether the degenerate single-graph branch was taken.
    pub point_branch: bool,
}

impl CompressSetup {
    pub fn h_miss(&self) -> &Graph {
        &self.light.missing
    }
}

/// Group the active vertices, build the grouped subgraph, summarize a
/// degree-conditioned distribution over it, and split the missing graph.
///
/// With `d_comp < g` the distribution keeps each grouped edge with
/// probability `d_comp/g` conditioned on degree < `2·d_comp`; the parts are
/// the groups clipped to the low-degree side of the light class's missing
/// graph, and `q` collects the high-degree leftovers. With `d_comp ≥ g` the
/// distribution is the single graph `h_base`, every group is a part, and `q`
/// is empty. Five facts are certified on return: support degrees ≤
/// `2·d_comp`; each part induces identical subgraphs of the base and the
/// grouped base; each part induces missing-graph degree ≤ `d_filter`; at most
/// `⌈|active|/g⌉` parts; and (strict mode) `|q| ≤ 2·ln2·(s+1)·g/(d_comp·d_filter)`.
pub fn partition_and_compress<F, S>(
    g_base: &Graph,
    active: VertexSet,
    g: usize,
    s_bits: u64,
    d_comp: f64,
    d_filter: usize,
    strict: bool,
    e_max: usize,
    summary_provider: F,
) -> Result<CompressSetup>
where
    F: FnOnce(&GraphDistribution) -> S,
    S: SummaryFn,
{
    if !(d_comp.is_finite() && d_comp > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "compression degree {d_comp} must be positive"
        )));
    }
    if d_filter == 0 {
        return Err(Error::InvalidParameter("filter degree must be ≥ 1".into()));
    }
    if strict {
        let floor = 4.0 * (2.0 * g_base.n() as f64).ln();
        if d_comp < floor {
            return Err(Error::ParameterDomain(format!(
                "strict mode needs compression degree ≥ 4·ln(2n) = {floor}, got {d_comp}"
            )));
        }
    }
    let groups = partition_fixed(active, g)?;
    let mut h_base = Graph::empty(g_base.n())?;
    for &s in groups.parts() {
        h_base = h_base.union(&g_base.induced(s)?)?;
    }

    let point_branch = d_comp >= g as f64;
    let (dist, light, parts, q) = if point_branch {
        let dist = GraphDistribution::new(h_base.clone(), 1.0, g_base.n().max(1) as f64)?;
        let summary = summary_provider(&dist);
        // A single support graph means a single class; the ceiling holds
        // vacuously, so the strict-mode check adds nothing here.
        let light = find_light_summary(&dist, &summary, s_bits, false, e_max)?;
        (dist, light, groups.clone(), VertexSet::EMPTY)
    } else {
        let dist = GraphDistribution::new(h_base.clone(), d_comp / g as f64, g as f64)?;
        let summary = summary_provider(&dist);
        let light = find_light_summary(&dist, &summary, s_bits, strict, e_max)?;
        let sr = split(&light.missing, d_filter)?;
        let kept: Vec<VertexSet> = groups
            .parts()
            .iter()
            .map(|&s| s.intersection(sr.low))
            .filter(|p| !p.is_empty())
            .collect();
        let ground = kept
            .iter()
            .fold(VertexSet::EMPTY, |acc, &p| acc.union(p));
        (dist, light, Partition::new(ground, kept)?, sr.high)
    };

    let setup = CompressSetup {
        h_base,
        dist,
        groups,
        light,
        parts,
        q,
        point_branch,
    };
    certify_setup(&setup, g_base, active, g, s_bits, d_comp, d_filter, strict)?;
    Ok(setup)
}

/// Check the five guarantees of a finished compression setup.
#[allow(clippy::too_many_arguments)]
fn certify_setup(
    setup: &CompressSetup,
    g_base: &Graph,
    active: VertexSet,
    g: usize,
    s_bits: u64,
    d_comp: f64,
    d_filter: usize,
    strict: bool,
) -> Result<()> {
    // 1. Every support graph has degree ≤ 2·d_comp. Support degrees are
    //    integers strictly below the distribution's cap, and the cap is
    //    2·(d_comp/g)·g in the sampled branch; in the single-graph branch the
    //    grouped base itself must comply.
    if setup.point_branch {
        if (setup.h_base.max_degree() as f64) > 2.0 * d_comp {
            return Err(Error::InternalConsistency(format!(
                "grouped base degree {} over 2·d_comp = {}",
                setup.h_base.max_degree(),
                2.0 * d_comp
            )));
        }
    } else if setup.dist.degree_cap() > 2.0 * d_comp + 1e-9 {
        return Err(Error::InternalConsistency(format!(
            "support degree cap {} over 2·d_comp = {}",
            setup.dist.degree_cap(),
            2.0 * d_comp
        )));
    }
    // 2. On every part, the base and the grouped base induce the same graph.
    for &p in setup.parts.parts() {
        if g_base.induced(p)? != setup.h_base.induced(p)? {
            return Err(Error::InternalConsistency(
                "a part induces different subgraphs of the base and grouped base".into(),
            ));
        }
    }
    // 3. On every part, the missing graph has degree ≤ d_filter.
    for &p in setup.parts.parts() {
        let local = setup.light.missing.induced(p)?;
        if local.max_degree() > d_filter {
            return Err(Error::InternalConsistency(format!(
                "missing graph induces degree {} over the filter bound {d_filter}",
                local.max_degree()
            )));
        }
    }
    // 4. Part count within the group count.
    let cap = active.len().div_ceil(g.max(1));
    if setup.parts.len() > cap {
        return Err(Error::InternalConsistency(format!(
            "{} parts exceed the group count {cap}",
            setup.parts.len()
        )));
    }
    // 5. Strict mode: the high-degree remainder is small.
    if strict {
        let bound =
            2.0 * std::f64::consts::LN_2 * (s_bits as f64 + 1.0) * g as f64 / (d_comp * d_filter as f64);
        if (setup.q.len() as f64) > bound {
            return Err(Error::InternalConsistency(format!(
                "remainder size {} over the strict ceiling {bound}",
                setup.q.len()
            )));
        }
    }
    Ok(())
}

// =============================================================================
// Tests
// =============================================================================
