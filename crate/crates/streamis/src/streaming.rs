//! Deterministic bounded-memory streaming algorithms over edge streams.
//!
//! An algorithm's working memory is always a serialized byte string: `init_state`
//! produces the starting bytes, `process_edge` maps bytes to bytes, and
//! `finalize` decodes the claimed independent set from the final bytes. Because
//! the state *is* its own serialization, the memory footprint of a run is simply
//! the byte length of the largest intermediate state, and any state can be
//! resumed from its bytes alone (which is what lets a multi-player protocol
//! hand states across player boundaries).

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, VertexSet, MAX_VERTICES};
use crate::oracles;
use crate::seeding::{self, labels};
use rand::Rng;

// =============================================================================
// Core interface
// =============================================================================

/// A deterministic streaming algorithm whose entire working memory is an
/// explicit byte string.
pub trait StreamingAlgorithm {
    /// Stable identifier used in CLI arguments and reports.
    fn name(&self) -> String;

    /// Number of vertices of the input universe.
    fn vertex_count(&self) -> usize;

    /// The state before any edge has been seen.
    fn init_state(&self) -> Vec<u8>;

    /// Consume one edge, producing the successor state.
    fn process_edge(&self, state: Vec<u8>, edge: Edge) -> Result<Vec<u8>>;

    /// Decode the claimed independent set from a final state.
    fn finalize(&self, state: &[u8]) -> Result<VertexSet>;
}

/// Memory charged to a state: eight bits per serialized byte.
pub fn state_bits(state: &[u8]) -> u64 {
    8 * state.len() as u64
}

fn check_edge(n: usize, (u, v): Edge) -> Result<()> {
    if u >= v {
        return Err(Error::InvalidParameter(format!(
            "stream edge ({u}, {v}) must satisfy u < v"
        )));
    }
    if v >= n {
        return Err(Error::InvalidParameter(format!(
            "stream edge ({u}, {v}) outside the {n}-vertex universe"
        )));
    }
    Ok(())
}

/// Run an algorithm over a full stream and decode its output.
pub fn run<A: StreamingAlgorithm + ?Sized>(alg: &A, stream: &[Edge]) -> Result<VertexSet> {
    let mut state = alg.init_state();
    for &e in stream {
        check_edge(alg.vertex_count(), e)?;
        state = alg.process_edge(state, e)?;
    }
    alg.finalize(&state)
}

/// Largest serialized state, in bits, over every prefix of the stream
/// (including the empty prefix).
pub fn measure_peak_state<A: StreamingAlgorithm + ?Sized>(
    alg: &A,
    stream: &[Edge],
) -> Result<u64> {
    let mut state = alg.init_state();
    let mut peak = state_bits(&state);
    for &e in stream {
        check_edge(alg.vertex_count(), e)?;
        state = alg.process_edge(state, e)?;
        peak = peak.max(state_bits(&state));
    }
    Ok(peak)
}

// =============================================================================
// Deterministic subsampling baseline
// =============================================================================

/// Restricts attention to the `⌈n/Δ⌉` lowest-id vertices, stores every edge
/// inside that sample verbatim, and finally outputs a greedy independent set
/// of the stored subgraph.
///
/// The output is independent in the *full* input graph: it is contained in the
/// sample, and every input edge between sample vertices was stored. When the
/// input respects the declared degree bound, the greedy step keeps at least
/// `⌈n/Δ⌉/(Δ+1)` vertices.
#[derive(Debug, Clone)]
pub struct DetSubsample {
    n: usize,
    delta: usize,
    sample: VertexSet,
}

impl DetSubsample {
    pub fn new(n: usize, delta: usize) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::InvalidParameter(format!(
                "vertex count {n} outside 1..={MAX_VERTICES}"
            )));
        }
        if delta == 0 {
            return Err(Error::InvalidParameter(
                "degree bound must be at least 1".into(),
            ));
        }
        if delta >= n {
            return Err(Error::InvalidParameter(format!(
                "degree bound {delta} must be smaller than the vertex count {n}"
            )));
        }
        let sample_size = n.div_ceil(delta);
        let sample: VertexSet = (0..sample_size).collect();
        Ok(Self { n, delta, sample })
    }

    pub fn sample(&self) -> VertexSet {
        self.sample
    }

    pub fn degree_bound(&self) -> usize {
        self.delta
    }

    /// State layout: little-endian `u16` edge count, then that many `(u8, u8)`
    /// pairs sorted ascending. Self-delimiting: trailing bytes are an error.
    fn decode(&self, state: &[u8]) -> Result<Vec<Edge>> {
        if state.len() < 2 {
            return Err(Error::Parse("subsample state shorter than its header".into()));
        }
        let count = u16::from_le_bytes([state[0], state[1]]) as usize;
        if state.len() != 2 + 2 * count {
            return Err(Error::Parse(format!(
                "subsample state length {} does not match edge count {count}",
                state.len()
            )));
        }
        let mut edges = Vec::with_capacity(count);
        let mut prev: Option<Edge> = None;
        for i in 0..count {
            let u = state[2 + 2 * i] as usize;
            let v = state[3 + 2 * i] as usize;
            check_edge(self.n, (u, v))?;
            if let Some(p) = prev {
                if p >= (u, v) {
                    return Err(Error::Parse("subsample state edges out of order".into()));
                }
            }
            prev = Some((u, v));
            edges.push((u, v));
        }
        Ok(edges)
    }

    fn encode(edges: &[Edge]) -> Vec<u8> {
        let mut out = Vec::with_capacity(2 + 2 * edges.len());
        out.extend_from_slice(&(edges.len() as u16).to_le_bytes());
        for &(u, v) in edges {
            out.push(u as u8);
            out.push(v as u8);
        }
        out
    }
}

impl StreamingAlgorithm for DetSubsample {
    fn name(&self) -> String {
        "det-subsample".into()
    }

    fn vertex_count(&self) -> usize {
        self.n
    }

    fn init_state(&self) -> Vec<u8> {
        Self::encode(&[])
    }

    fn process_edge(&self, state: Vec<u8>, edge: Edge) -> Result<Vec<u8>> {
        check_edge(self.n, edge)?;
        let (u, v) = edge;
        if !(self.sample.contains(u) && self.sample.contains(v)) {
            return Ok(state);
        }
        let mut edges = self.decode(&state)?;
        match edges.binary_search(&edge) {
            Ok(_) => Ok(state),
            Err(pos) => {
                edges.insert(pos, edge);
                Ok(Self::encode(&edges))
            }
        }
    }

    fn finalize(&self, state: &[u8]) -> Result<VertexSet> {
        let edges = self.decode(state)?;
        let stored = Graph::from_edges(self.n, &edges)?;
        Ok(oracles::greedy_mis_within(&stored, self.sample))
    }
}

// =============================================================================
// Random-permutation baseline
// =============================================================================

/// Fixes a seeded uniformly random vertex order up front; every edge marks its
/// later-ordered endpoint, and the unmarked vertices are output.
///
/// At most one endpoint of any edge survives, so the output is always
/// independent, and a vertex survives exactly when it precedes all of its
/// neighbors — probability `1/(1 + deg(v))` — so the expected output size is
/// the sum of those survival probabilities.
#[derive(Debug, Clone)]
pub struct RandPermutation {
    n: usize,
    seed: u64,
}

impl RandPermutation {
    pub fn new(n: usize, seed: u64) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::InvalidParameter(format!(
                "vertex count {n} outside 1..={MAX_VERTICES}"
            )));
        }
        Ok(Self { n, seed })
    }

    /// Position of each vertex in the seeded uniform order.
    fn ranks(&self) -> Vec<usize> {
        let mut rng = seeding::derive_rng(self.seed, &[labels::ORDER]);
        let mut perm: Vec<usize> = (0..self.n).collect();
        for i in (1..self.n).rev() {
            let j = rng.random_range(0..=i);
            perm.swap(i, j);
        }
        let mut rank = vec![0usize; self.n];
        for (pos, &v) in perm.iter().enumerate() {
            rank[v] = pos;
        }
        rank
    }

    fn bitmap_len(&self) -> usize {
        self.n.div_ceil(8)
    }

    /// State layout: little-endian `u64` seed, then a `⌈n/8⌉`-byte bitmap of
    /// marked (eliminated) vertices. Fixed length for a given `n`.
    fn decode(&self, state: &[u8]) -> Result<(u64, Vec<u8>)> {
        if state.len() != 8 + self.bitmap_len() {
            return Err(Error::Parse(format!(
                "permutation state length {} instead of {}",
                state.len(),
                8 + self.bitmap_len()
            )));
        }
        let seed = u64::from_le_bytes(state[..8].try_into().expect("eight bytes"));
        if seed != self.seed {
            return Err(Error::Parse(
                "permutation state seed does not match the configured seed".into(),
            ));
        }
        Ok((seed, state[8..].to_vec()))
    }
}

impl StreamingAlgorithm for RandPermutation {
    fn name(&self) -> String {
        "rand-perm".into()
    }

    fn vertex_count(&self) -> usize {
        self.n
    }

    fn init_state(&self) -> Vec<u8> {
        let mut state = Vec::with_capacity(8 + self.bitmap_len());
        state.extend_from_slice(&self.seed.to_le_bytes());
        state.extend(std::iter::repeat_n(0u8, self.bitmap_len()));
        state
    }

    fn process_edge(&self, state: Vec<u8>, edge: Edge) -> Result<Vec<u8>> {
        check_edge(self.n, edge)?;
        let (_, mut marked) = self.decode(&state)?;
        let rank = self.ranks();
        let (u, v) = edge;
        let loser = if rank[u] < rank[v] { v } else { u };
        marked[loser / 8] |= 1 << (loser % 8);
        let mut out = state;
        out.truncate(8);
        out.extend_from_slice(&marked);
        Ok(out)
    }

    fn finalize(&self, state: &[u8]) -> Result<VertexSet> {
        let (_, marked) = self.decode(state)?;
        let mut out = VertexSet::EMPTY;
        for v in 0..self.n {
            if marked[v / 8] & (1 << (v % 8)) == 0 {
                out = out.with(v);
            }
        }
        Ok(out)
    }
}

// =============================================================================
// Strawman opponents
// =============================================================================

/// Ignores the stream entirely and claims every vertex. Zero-byte state.
#[derive(Debug, Clone)]
pub struct ClaimAll {
    n: usize,
}

impl ClaimAll {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::InvalidParameter(format!(
                "vertex count {n} outside 1..={MAX_VERTICES}"
            )));
        }
        Ok(Self { n })
    }
}

impl StreamingAlgorithm for ClaimAll {
    fn name(&self) -> String {
        "claim-all".into()
    }

    fn vertex_count(&self) -> usize {
        self.n
    }

    fn init_state(&self) -> Vec<u8> {
        Vec::new()
    }

    fn process_edge(&self, state: Vec<u8>, edge: Edge) -> Result<Vec<u8>> {
        check_edge(self.n, edge)?;
        Ok(state)
    }

    fn finalize(&self, _state: &[u8]) -> Result<VertexSet> {
        Ok(VertexSet::full(self.n))
    }
}

/// Ignores the stream and claims one fixed, pre-chosen vertex set.
#[derive(Debug, Clone)]
pub struct ClaimFixed {
    n: usize,
    claim: VertexSet,
}

impl ClaimFixed {
    pub fn new(n: usize, claim: VertexSet) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::InvalidParameter(format!(
                "vertex count {n} outside 1..={MAX_VERTICES}"
            )));
        }
        if !claim.is_subset_of(VertexSet::full(n)) {
            return Err(Error::InvalidParameter(
                "claimed set reaches outside the vertex universe".into(),
            ));
        }
        Ok(Self { n, claim })
    }
}

impl StreamingAlgorithm for ClaimFixed {
    fn name(&self) -> String {
        "claim-fixed".into()
    }

    fn vertex_count(&self) -> usize {
        self.n
    }

    fn init_state(&self) -> Vec<u8> {
        Vec::new()
    }

    fn process_edge(&self, state: Vec<u8>, edge: Edge) -> Result<Vec<u8>> {
        check_edge(self.n, edge)?;
        Ok(state)
    }

    fn finalize(&self, _state: &[u8]) -> Result<VertexSet> {
        Ok(self.claim)
    }
}

/// Outputs only vertex 0, which is trivially independent.
#[derive(Debug, Clone)]
pub struct LowestId {
    n: usize,
}

impl LowestId {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::InvalidParameter(format!(
                "vertex count {n} outside 1..={MAX_VERTICES}"
            )));
        }
        Ok(Self { n })
    }
}

impl StreamingAlgorithm for LowestId {
    fn name(&self) -> String {
        "lowest-id".into()
    }

    fn vertex_count(&self) -> usize {
        self.n
    }

    fn init_state(&self) -> Vec<u8> {
        Vec::new()
    }

    fn process_edge(&self, state: Vec<u8>, edge: Edge) -> Result<Vec<u8>> {
        check_edge(self.n, edge)?;
        Ok(state)
    }

    fn finalize(&self, _state: &[u8]) -> Result<VertexSet> {
        Ok(VertexSet::singleton(0))
    }
}

/// Picks the same low-id sample as [`DetSubsample`] but never looks at the
/// stream, claiming the entire sample.
#[derive(Debug, Clone)]
pub struct SubsampleClaimAll {
    n: usize,
    sample: VertexSet,
}

impl SubsampleClaimAll {
    pub fn new(n: usize, delta: usize) -> Result<Self> {
        let inner = DetSubsample::new(n, delta)?;
        Ok(Self {
            n,
            sample: inner.sample(),
        })
    }
}

impl StreamingAlgorithm for SubsampleClaimAll {
    fn name(&self) -> String {
        "subsample-claim-all".into()
    }

    fn vertex_count(&self) -> usize {
        self.n
    }

    fn init_state(&self) -> Vec<u8> {
        Vec::new()
    }

    fn process_edge(&self, state: Vec<u8>, edge: Edge) -> Result<Vec<u8>> {
        check_edge(self.n, edge)?;
        Ok(state)
    }

    fn finalize(&self, _state: &[u8]) -> Result<VertexSet> {
        Ok(self.sample)
    }
}

// =============================================================================
// Registry
// =============================================================================

/// Instantiate an algorithm by its CLI identifier.
pub fn by_name(
    name: &str,
    n: usize,
    delta: usize,
    seed: u64,
) -> Result<Box<dyn StreamingAlgorithm>> {
    match name {
        "det-subsample" => Ok(Box::new(DetSubsample::new(n, delta)?)),
        "rand-perm" => Ok(Box::new(RandPermutation::new(n, seed)?)),
        "claim-all" => Ok(Box::new(ClaimAll::new(n)?)),
        "claim-fixed" => {
            let half: VertexSet = (0..n.div_ceil(2)).collect();
            Ok(Box::new(ClaimFixed::new(n, half)?))
        }
        "lowest-id" => Ok(Box::new(LowestId::new(n)?)),
        "subsample-claim-all" => Ok(Box::new(SubsampleClaimAll::new(n, delta)?)),
        other => Err(Error::InvalidParameter(format!(
            "unknown algorithm '{other}'"
        ))),
    }
}

/// Names accepted by [`by_name`].
pub const ALGORITHM_NAMES: [&str; 6] = [
    "det-subsample",
    "rand-perm",
    "claim-all",
    "claim-fixed",
    "lowest-id",
    "subsample-claim-all",
];

// =============================================================================
// Tests
// =============================================================================
