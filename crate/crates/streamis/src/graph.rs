//! Dense bitset graphs over a fixed vertex universe of at most 64 ids,
//! plus vertex sets and fixed-order partitions.
//!
//! A [`Graph`] is simple and undirected on the universe `0..n`. Adjacency is
//! one `u64` row per vertex, so unions, differences, induced subgraphs and
//! degree queries are single-pass bit operations. Graph values are immutable
//! after construction: every operation returns a new graph, which keeps
//! round records and replay data trivially consistent.
//!
//! The vertex universe never shrinks: induced subgraphs keep `n` and drop
//! edges, and the caller tracks which ids are still "active" with a
//! [`VertexSet`]. This makes per-round graph arithmetic alignment-free.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fmt;

/// Hard cap on the vertex universe, matching one `u64` adjacency row.
pub const MAX_VERTICES: usize = 64;

/// An undirected edge, canonically stored with the smaller endpoint first.
pub type Edge = (usize, usize);

#[inline(always)]
const fn bit(v: usize) -> u64 {
    1u64 << v
}

/// Mask with bits `0..n` set.
#[inline(always)]
const fn universe_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

// ======================================================================
// Vertex sets
// ======================================================================

/// A set of vertex ids in `0..64`, stored as a bitmask.
///
/// The set does not remember which universe it was built against; operations
/// that need a universe (e.g. [`VertexSet::full`]) take `n` explicitly, and
/// graph operations validate containment against their own universe.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct VertexSet(u64);

impl VertexSet {
    /// The empty set.
    pub const EMPTY: VertexSet = VertexSet(0);

    /// Set containing every id in `0..n`.
    pub fn full(n: usize) -> VertexSet {
        debug_assert!(n <= MAX_VERTICES);
        VertexSet(universe_mask(n))
    }

    /// Set containing exactly `v`.
    pub fn singleton(v: usize) -> VertexSet {
        debug_assert!(v < MAX_VERTICES);
        VertexSet(bit(v))
    }

    /// Build from a raw bitmask.
    pub const fn from_mask(mask: u64) -> VertexSet {
        VertexSet(mask)
    }

    /// The raw bitmask.
    pub const fn mask(self) -> u64 {
        self.0
    }

    /// Number of members.
    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// True if no member.
    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Membership test.
    pub const fn contains(self, v: usize) -> bool {
        v < MAX_VERTICES && self.0 & bit(v) != 0
    }

    /// Set with `v` added.
    pub fn with(self, v: usize) -> VertexSet {
        debug_assert!(v < MAX_VERTICES);
        VertexSet(self.0 | bit(v))
    }

    /// Set with `v` removed.
    pub fn without(self, v: usize) -> VertexSet {
        VertexSet(self.0 & !bit(v))
    }

    /// Union.
    pub const fn union(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    /// Intersection.
    pub const fn intersection(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & other.0)
    }

    /// Members of `self` not in `other`.
    pub const fn difference(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & !other.0)
    }

    /// True if every member of `self` is in `other`.
    pub const fn is_subset_of(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// True if the sets share no member.
    pub const fn is_disjoint(self, other: VertexSet) -> bool {
        self.0 & other.0 == 0
    }

    /// Smallest member, if any.
    pub fn min(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    /// Members in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(v)
            }
        })
    }

    /// Members as a sorted vector.
    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> VertexSet {
        let mut mask = 0u64;
        for v in iter {
            assert!(v < MAX_VERTICES, "vertex id {v} out of range");
            mask |= bit(v);
        }
        VertexSet(mask)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for VertexSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let ids = Vec::<usize>::deserialize(deserializer)?;
        for &v in &ids {
            if v >= MAX_VERTICES {
                return Err(serde::de::Error::custom(format!("vertex id {v} out of range")));
            }
        }
        Ok(ids.into_iter().collect())
    }
}

// ======================================================================
// Graphs
// ======================================================================

/// Simple undirected graph on the fixed universe `0..n`, `n <= 64`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphData", into = "GraphData")]
pub struct Graph {
    /// `adj[v]` holds the neighbor mask of `v`; rows are symmetric and the
    /// diagonal is always clear.
    adj: Vec<u64>,
}

/// Serde mirror of [`Graph`]: explicit vertex count plus canonical edge list.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphData {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl TryFrom<GraphData> for Graph {
    type Error = Error;
    fn try_from(data: GraphData) -> Result<Graph> {
        Graph::from_edges(data.n, &data.edges)
    }
}

impl From<Graph> for GraphData {
    fn from(g: Graph) -> GraphData {
        GraphData {
            n: g.n(),
            edges: g.edges(),
        }
    }
}

impl Graph {
    // ------------------------------------------------------------------
    // Construction
    // ------------------------------------------------------------------

    /// Edgeless graph on `0..n`.
    pub fn empty(n: usize) -> Result<Graph> {
        if n > MAX_VERTICES {
            return Err(Error::ResourceLimit(format!(
                "vertex count {n} exceeds the dense-graph cap {MAX_VERTICES}"
            )));
        }
        Ok(Graph { adj: vec![0; n] })
    }

    /// Complete graph on `0..n`.
    pub fn complete(n: usize) -> Result<Graph> {
        let mut g = Graph::empty(n)?;
        let all = universe_mask(n);
        for v in 0..n {
            g.adj[v] = all & !bit(v);
        }
        Ok(g)
    }

    /// Graph on `0..n` with the given edges. Endpoints may come in either
    /// order; duplicates collapse (set semantics). Self-loops and ids `>= n`
    /// are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            g.insert_edge(u, v)?;
        }
        Ok(g)
    }

    /// Copy of `self` with edge `(u, v)` added (no-op if already present).
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Graph> {
        let mut g = self.clone();
        g.insert_edge(u, v)?;
        Ok(g)
    }

    fn insert_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.n();
        if u == v {
            return Err(Error::InvalidParameter(format!("self-loop at vertex {u}")));
        }
        if u >= n || v >= n {
            return Err(Error::InvalidParameter(format!(
                "edge ({u}, {v}) outside vertex universe 0..{n}"
            )));
        }
        self.adj[u] |= bit(v);
        self.adj[v] |= bit(u);
        Ok(())
    }

    // ------------------------------------------------------------------
    // Queries
    // ------------------------------------------------------------------

    /// Size of the vertex universe.
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    /// Neighbor mask of `v`.
    pub fn neighbors(&self, v: usize) -> VertexSet {
        debug_assert!(v < self.n());
        VertexSet(self.adj[v])
    }

    /// Raw adjacency rows (one per vertex).
    pub fn rows(&self) -> &[u64] {
        &self.adj
    }

    /// True if the edge is present. Out-of-universe ids are simply absent.
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && v < self.n() && u != v && self.adj[u] & bit(v) != 0
    }

    /// Degree of `v`.
    pub fn degree(&self, v: usize) -> usize {
        debug_assert!(v < self.n());
        self.adj[v].count_ones() as usize
    }

    /// Maximum degree over the universe (0 for the edgeless graph).
    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).max().unwrap_or(0)
    }

    /// Number of edges.
    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// True if there is no edge at all.
    pub fn is_edgeless(&self) -> bool {
        self.adj.iter().all(|&r| r == 0)
    }

    /// Vertices with at least one incident edge.
    pub fn touched_vertices(&self) -> VertexSet {
        let mut mask = 0;
        for (v, &row) in self.adj.iter().enumerate() {
            if row != 0 {
                mask |= bit(v);
            }
        }
        VertexSet(mask)
    }

    /// Edges in canonical order: ascending by `(u, v)` with `u < v`.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n() {
            let mut rest = self.adj[u] & !universe_mask(u + 1);
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                out.push((u, v));
            }
        }
        out
    }

    // ------------------------------------------------------------------
    // Graph arithmetic
    // ------------------------------------------------------------------

    fn check_same_universe(&self, other: &Graph, op: &str) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::InvalidParameter(format!(
                "{op} requires matching vertex universes (got {} and {})",
                self.n(),
                other.n()
            )));
        }
        Ok(())
    }

    /// Edge-wise union; universes must match.
    pub fn union(&self, other: &Graph) -> Result<Graph> {
        self.check_same_universe(other, "union")?;
        let adj = self
            .adj
            .iter()
            .zip(&other.adj)
            .map(|(a, b)| a | b)
            .collect();
        Ok(Graph { adj })
    }

    /// Edges of `self` not in `other`; universes must match.
    pub fn difference(&self, other: &Graph) -> Result<Graph> {
        self.check_same_universe(other, "difference")?;
        let adj = self
            .adj
            .iter()
            .zip(&other.adj)
            .map(|(a, b)| a & !b)
            .collect();
        Ok(Graph { adj })
    }

    /// True if every edge of `self` also lies in `other`.
    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.n() == other.n()
            && self
                .adj
                .iter()
                .zip(&other.adj)
                .all(|(a, b)| a & !b == 0)
    }

    /// Subgraph induced by `keep`: same universe, edges restricted to pairs
    /// inside `keep`.
    pub fn induced(&self, keep: VertexSet) -> Result<Graph> {
        let universe = universe_mask(self.n());
        if keep.mask() & !universe != 0 {
            return Err(Error::InvalidParameter(format!(
                "induced set {keep} outside vertex universe 0..{}",
                self.n()
            )));
        }
        let adj = self
            .adj
            .iter()
            .enumerate()
            .map(|(v, &row)| if keep.contains(v) { row & keep.mask() } else { 0 })
            .collect();
        Ok(Graph { adj })
    }

    /// Complement within the universe (no self-loops).
    pub fn complement(&self) -> Graph {
        let n = self.n();
        let all = universe_mask(n);
        let adj = self
            .adj
            .iter()
            .enumerate()
            .map(|(v, &row)| (all & !row) & !bit(v))
            .collect();
        Graph { adj }
    }

    /// Union of an arbitrary family over one universe. An empty family is
    /// rejected since the universe would be unknown.
    pub fn union_all(graphs: &[Graph]) -> Result<Graph> {
        let first = graphs
            .first()
            .ok_or_else(|| Error::InvalidParameter("union of an empty graph family".into()))?;
        let mut acc = first.clone();
        for g in &graphs[1..] {
            acc = acc.union(g)?;
        }
        Ok(acc)
    }

    // ------------------------------------------------------------------
    // Edge-list text format
    // ------------------------------------------------------------------

    /// Render the canonical edge-list text: header `"n m"`, then one `"u v"`
    /// line per edge with `u < v`, ascending, LF line endings.
    pub fn to_edge_list(&self) -> String {
        let edges = self.edges();
        let mut out = String::with_capacity(8 + edges.len() * 6);
        out.push_str(&format!("{} {}\n", self.n(), edges.len()));
        for (u, v) in edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// Parse the edge-list text format. The header's `m` must match the
    /// number of edge lines, endpoints must satisfy `u < v`, and duplicate
    /// edges are rejected, so parse/render round-trips are exact.
    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty edge-list text".into()))?;
        let mut it = header.split_whitespace();
        let n: usize = it
            .next()
            .ok_or_else(|| Error::Parse("missing vertex count in header".into()))?
            .parse()
            .map_err(|_| Error::Parse(format!("bad vertex count in header {header:?}")))?;
        let m: usize = it
            .next()
            .ok_or_else(|| Error::Parse("missing edge count in header".into()))?
            .parse()
            .map_err(|_| Error::Parse(format!("bad edge count in header {header:?}")))?;
        if it.next().is_some() {
            return Err(Error::Parse(format!("trailing tokens in header {header:?}")));
        }
        let mut g = Graph::empty(n)?;
        let mut parsed = 0usize;
        for line in lines {
            if line.trim().is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let u: usize = it
                .next()
                .unwrap()
                .parse()
                .map_err(|_| Error::Parse(format!("bad edge line {line:?}")))?;
            let v: usize = match it.next() {
                Some(tok) => tok
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad edge line {line:?}")))?,
                None => return Err(Error::Parse(format!("bad edge line {line:?}"))),
            };
            if it.next().is_some() {
                return Err(Error::Parse(format!("trailing tokens in edge line {line:?}")));
            }
            if u >= v {
                return Err(Error::Parse(format!(
                    "edge line {line:?} violates the u < v convention"
                )));
            }
            if g.has_edge(u, v) {
                return Err(Error::Parse(format!("duplicate edge ({u}, {v})")));
            }
            g.insert_edge(u, v).map_err(|e| Error::Parse(e.to_string()))?;
            parsed += 1;
        }
        if parsed != m {
            return Err(Error::Parse(format!(
                "header announces {m} edges but {parsed} edge lines follow"
            )));
        }
        Ok(g)
    }

    /// SHA-256 of the canonical edge-list text, hex-encoded. Stable content
    /// address for reports and replay digests.
    pub fn digest_hex(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.to_edge_list().as_bytes());
        hex::encode(hasher.finalize())
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, m={}, edges={:?})", self.n(), self.edge_count(), self.edges())
    }
}

/// True if no edge occurs in two of the graphs. All graphs must share one
/// universe (caller contract; violations panic in debug builds).
pub fn are_edge_disjoint(graphs: &[&Graph]) -> bool {
    if graphs.len() < 2 {
        return true;
    }
    let n = graphs[0].n();
    debug_assert!(graphs.iter().all(|g| g.n() == n), "mismatched universes");
    let mut seen = vec![0u64; n];
    for g in graphs {
        for (v, &row) in g.rows().iter().enumerate() {
            if seen[v] & row != 0 {
                return false;
            }
            seen[v] |= row;
        }
    }
    true
}

// ======================================================================
// Partitions
// ======================================================================

/// An ordered partition of a ground vertex set into nonempty parts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    ground: VertexSet,
    parts: Vec<VertexSet>,
}

impl Partition {
    /// Validating constructor: parts must be nonempty, pairwise disjoint,
    /// and cover exactly the ground set.
    pub fn new(ground: VertexSet, parts: Vec<VertexSet>) -> Result<Partition> {
        let mut seen = VertexSet::EMPTY;
        for (i, part) in parts.iter().enumerate() {
            if part.is_empty() {
                return Err(Error::InvalidParameter(format!("partition part {i} is empty")));
            }
            if !seen.is_disjoint(*part) {
                return Err(Error::InvalidParameter(format!(
                    "partition part {i} overlaps an earlier part"
                )));
            }
            seen = seen.union(*part);
        }
        if seen != ground {
            return Err(Error::InvalidParameter(format!(
                "partition covers {seen} but the ground set is {ground}"
            )));
        }
        Ok(Partition { ground, parts })
    }

    /// The partitioned ground set.
    pub fn ground(&self) -> VertexSet {
        self.ground
    }

    /// The parts, in construction order.
    pub fn parts(&self) -> &[VertexSet] {
        &self.parts
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    /// True if there are no parts (empty ground set).
    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

/// Deterministic fixed-order partition: fill parts of size `g` with the
/// members of `set` in ascending id order; the last part keeps the remainder
/// (strictly smaller than `g`) if `|set|` is not divisible by `g`.
pub fn partition_fixed(set: VertexSet, g: usize) -> Result<Partition> {
    if g == 0 {
        return Err(Error::InvalidParameter("group size must be at least 1".into()));
    }
    let mut parts = Vec::with_capacity(set.len().div_ceil(g.max(1)));
    let mut current = VertexSet::EMPTY;
    for v in set.iter() {
        current = current.with(v);
        if current.len() == g {
            parts.push(current);
            current = VertexSet::EMPTY;
        }
    }
    if !current.is_empty() {
        parts.push(current);
    }
    Partition::new(set, parts)
}

// ======================================================================
// Tests
// ======================================================================

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
        let mut g = Graph::empty(n).unwrap();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.random_bool(p) {
                    g = g.with_edge(u, v).unwrap();
                }
            }
        }
        g
    }

    // ------------------------------------------------------------------
    // Vertex sets
    // ------------------------------------------------------------------

    #[test]
    fn vertex_set_basics() {
        let s: VertexSet = [5usize, 1, 3].into_iter().collect();
        assert_eq!(s.len(), 3);
        assert_eq!(s.to_vec(), vec![1, 3, 5]);
        assert!(s.contains(3));
        assert!(!s.contains(0));
        assert_eq!(s.min(), Some(1));
        assert_eq!(s.with(0).to_vec(), vec![0, 1, 3, 5]);
        assert_eq!(s.without(3).to_vec(), vec![1, 5]);
        assert_eq!(VertexSet::full(3).to_vec(), vec![0, 1, 2]);
        assert!(VertexSet::EMPTY.is_empty());
        assert_eq!(format!("{s}"), "{1, 3, 5}");
    }

    #[test]
    fn vertex_set_algebra() {
        let a: VertexSet = [0usize, 1, 2].into_iter().collect();
        let b: VertexSet = [2usize, 3].into_iter().collect();
        assert_eq!(a.union(b).to_vec(), vec![0, 1, 2, 3]);
        assert_eq!(a.intersection(b).to_vec(), vec![2]);
        assert_eq!(a.difference(b).to_vec(), vec![0, 1]);
        assert!(a.intersection(b).is_subset_of(a));
        assert!(!a.is_disjoint(b));
        assert!(a.difference(b).is_disjoint(b));
    }

    #[test]
    fn vertex_set_full_universe() {
        assert_eq!(VertexSet::full(64).len(), 64);
        assert_eq!(VertexSet::full(0).len(), 0);
    }

    // ------------------------------------------------------------------
    // Graph construction and queries
    // ------------------------------------------------------------------

    #[test]
    fn complete_graph_shape() {
        let g = Graph::complete(5).unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(g.edge_count(), 10);
        assert_eq!(g.max_degree(), 4);
        for v in 0..5 {
            assert_eq!(g.degree(v), 4);
            assert!(!g.has_edge(v, v));
        }
    }

    #[test]
    fn from_edges_validates() {
        assert!(matches!(
            Graph::from_edges(3, &[(0, 0)]),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            Graph::from_edges(3, &[(0, 3)]),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(Graph::empty(65), Err(Error::ResourceLimit(_))));
        // Duplicates and swapped endpoints collapse.
        let g = Graph::from_edges(3, &[(1, 0), (0, 1), (0, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert!(g.has_edge(0, 1));
    }

    #[test]
    fn edges_are_canonical() {
        let g = Graph::from_edges(4, &[(2, 3), (0, 2), (0, 1)]).unwrap();
        assert_eq!(g.edges(), vec![(0, 1), (0, 2), (2, 3)]);
    }

    // ------------------------------------------------------------------
    // Graph arithmetic
    // ------------------------------------------------------------------

    #[test]
    fn union_difference_inverse_on_disjoint_graphs() {
        let a = Graph::from_edges(5, &[(0, 1), (2, 3)]).unwrap();
        let b = Graph::from_edges(5, &[(1, 2), (3, 4)]).unwrap();
        assert!(are_edge_disjoint(&[&a, &b]));
        let u = a.union(&b).unwrap();
        assert_eq!(u.edge_count(), 4);
        assert_eq!(u.difference(&b).unwrap(), a);
        assert_eq!(u.difference(&a).unwrap(), b);
    }

    #[test]
    fn universe_mismatch_is_rejected() {
        let a = Graph::empty(4).unwrap();
        let b = Graph::empty(5).unwrap();
        assert!(matches!(a.union(&b), Err(Error::InvalidParameter(_))));
        assert!(matches!(a.difference(&b), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn induced_keeps_universe() {
        // 4-cycle induced on the two non-adjacent vertices {0, 2} is
        // edgeless but still lives on universe 0..4.
        let g = cycle(4);
        let t: VertexSet = [0usize, 2].into_iter().collect();
        let h = g.induced(t).unwrap();
        assert_eq!(h.n(), 4);
        assert!(h.is_edgeless());
        // Out-of-universe induced sets are rejected.
        assert!(matches!(
            g.induced(VertexSet::singleton(4)),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn induced_restricts_edges() {
        let g = Graph::complete(6).unwrap();
        let t: VertexSet = [1usize, 2, 4].into_iter().collect();
        let h = g.induced(t).unwrap();
        assert_eq!(h.edge_count(), 3);
        assert!(h.has_edge(1, 2) && h.has_edge(1, 4) && h.has_edge(2, 4));
        assert_eq!(h.degree(0), 0);
        assert!(h.is_subgraph_of(&g));
    }

    #[test]
    fn complement_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let g = random_graph(&mut rng, 12, 0.4);
            assert_eq!(g.complement().complement(), g);
            let full = g.union(&g.complement()).unwrap();
            assert_eq!(full, Graph::complete(12).unwrap());
        }
    }

    #[test]
    fn disjointness_detects_overlap() {
        let a = Graph::from_edges(4, &[(0, 1)]).unwrap();
        let b = Graph::from_edges(4, &[(0, 1), (1, 2)]).unwrap();
        assert!(!are_edge_disjoint(&[&a, &b]));
        assert!(are_edge_disjoint(&[]));
        assert!(are_edge_disjoint(&[&a]));
    }

    #[test]
    fn union_all_requires_nonempty_family() {
        assert!(matches!(Graph::union_all(&[]), Err(Error::InvalidParameter(_))));
    }

    // ------------------------------------------------------------------
    // Edge-list text format
    // ------------------------------------------------------------------

    #[test]
    fn edge_list_exact_text() {
        let g = Graph::complete(3).unwrap();
        assert_eq!(g.to_edge_list(), "3 3\n0 1\n0 2\n1 2\n");
        let e = Graph::empty(2).unwrap();
        assert_eq!(e.to_edge_list(), "2 0\n");
    }

    #[test]
    fn edge_list_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let n = 1 + rng.random_range(0..20);
            let g = random_graph(&mut rng, n, 0.3);
            let text = g.to_edge_list();
            let back = Graph::parse_edge_list(&text).unwrap();
            assert_eq!(back, g);
            // Render of the parse is byte-identical: round-trip exact.
            assert_eq!(back.to_edge_list(), text);
        }
    }

    #[test]
    fn edge_list_rejects_malformed_input() {
        // u >= v violates the convention.
        assert!(Graph::parse_edge_list("3 1\n1 0\n").is_err());
        assert!(Graph::parse_edge_list("3 1\n1 1\n").is_err());
        // Edge count mismatch.
        assert!(Graph::parse_edge_list("3 2\n0 1\n").is_err());
        // Vertex out of range.
        assert!(Graph::parse_edge_list("3 1\n0 3\n").is_err());
        // Duplicate edge.
        assert!(Graph::parse_edge_list("3 2\n0 1\n0 1\n").is_err());
        // Garbage tokens.
        assert!(Graph::parse_edge_list("3 one\n").is_err());
        assert!(Graph::parse_edge_list("3 1\n0 1 9\n").is_err());
        assert!(Graph::parse_edge_list("").is_err());
    }

    #[test]
    fn digest_tracks_content() {
        let a = Graph::from_edges(4, &[(0, 1)]).unwrap();
        let b = Graph::from_edges(4, &[(0, 2)]).unwrap();
        assert_ne!(a.digest_hex(), b.digest_hex());
        assert_eq!(a.digest_hex(), a.clone().digest_hex());
        assert_eq!(a.digest_hex().len(), 64);
    }

    #[test]
    fn serde_round_trip() {
        let g = cycle(5);
        let json = serde_json::to_string(&g).unwrap();
        let back: Graph = serde_json::from_str(&json).unwrap();
        assert_eq!(back, g);
        let s: VertexSet = [0usize, 4].into_iter().collect();
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, "[0,4]");
        let back: VertexSet = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }

    // ------------------------------------------------------------------
    // Partitions
    // ------------------------------------------------------------------

    #[test]
    fn partition_fixed_fills_in_ascending_order() {
        let set = VertexSet::full(10);
        let p = partition_fixed(set, 3).unwrap();
        let sizes: Vec<_> = p.parts().iter().map(|s| s.len()).collect();
        assert_eq!(sizes, vec![3, 3, 3, 1]);
        assert_eq!(p.parts()[0].to_vec(), vec![0, 1, 2]);
        assert_eq!(p.parts()[1].to_vec(), vec![3, 4, 5]);
        assert_eq!(p.parts()[2].to_vec(), vec![6, 7, 8]);
        assert_eq!(p.parts()[3].to_vec(), vec![9]);
        assert_eq!(p.ground(), set);
    }

    #[test]
    fn partition_fixed_exact_division_has_no_runt() {
        let p = partition_fixed(VertexSet::full(9), 3).unwrap();
        assert!(p.parts().iter().all(|s| s.len() == 3));
        assert_eq!(p.len(), 3);
    }

    #[test]
    fn partition_fixed_respects_sparse_sets() {
        let set: VertexSet = [2usize, 5, 9, 11, 30].into_iter().collect();
        let p = partition_fixed(set, 2).unwrap();
        assert_eq!(p.parts()[0].to_vec(), vec![2, 5]);
        assert_eq!(p.parts()[1].to_vec(), vec![9, 11]);
        assert_eq!(p.parts()[2].to_vec(), vec![30]);
    }

    #[test]
    fn partition_fixed_edge_cases() {
        // Empty ground set: empty partition.
        let p = partition_fixed(VertexSet::EMPTY, 4).unwrap();
        assert!(p.is_empty());
        // Zero group size is rejected.
        assert!(matches!(
            partition_fixed(VertexSet::full(3), 0),
            Err(Error::InvalidParameter(_))
        ));
        // Group size larger than the set: one part with everything.
        let p = partition_fixed(VertexSet::full(3), 10).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.parts()[0], VertexSet::full(3));
        // Part count bound: ceil(|S| / g).
        for n in 0..20usize {
            for g in 1..6usize {
                let p = partition_fixed(VertexSet::full(n), g).unwrap();
                assert_eq!(p.len(), n.div_ceil(g));
            }
        }
    }

    #[test]
    fn partition_validation_rejects_bad_families() {
        let ground = VertexSet::full(4);
        // Overlap.
        let overlapping = vec![
            [0usize, 1].into_iter().collect(),
            [1usize, 2, 3].into_iter().collect(),
        ];
        assert!(Partition::new(ground, overlapping).is_err());
        // Not covering.
        let undercover = vec![[0usize, 1].into_iter().collect()];
        assert!(Partition::new(ground, undercover).is_err());
        // Empty part.
        let with_empty = vec![VertexSet::full(4), VertexSet::EMPTY];
        assert!(Partition::new(ground, with_empty).is_err());
    }
}
