//! Exact solvers and cheap bounds used to certify every claimed set.
//!
//! The maximum-clique solver is a branch-and-bound over bitset candidate
//! sets with a greedy-coloring upper bound; at the crate's 64-vertex cap it
//! answers instantly on anything the harness produces. Maximum independent
//! set is solved through the complement. Both return the lexicographically
//! smallest optimum so results are reproducible byte for byte.

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet, MAX_VERTICES};

/// Vertex cap for the exact searches. The dense graph type already enforces
/// it, so the check here only guards future representation changes.
pub const ORACLE_VERTEX_CAP: usize = MAX_VERTICES;

#[inline(always)]
const fn bit(v: usize) -> u64 {
    1u64 << v
}

// ======================================================================
// Maximum clique
// ======================================================================

/// Greedy-color the candidate set; returns vertices in color order along
/// with each vertex's color index (1-based). Any clique inside `cand` uses
/// pairwise distinct colors, so the color count bounds the clique size.
fn color_sort(adj: &[u64], cand: u64) -> (Vec<usize>, Vec<usize>) {
    let mut order = Vec::with_capacity(cand.count_ones() as usize);
    let mut colors = Vec::with_capacity(order.capacity());
    let mut uncolored = cand;
    let mut color = 0usize;
    while uncolored != 0 {
        color += 1;
        let mut avail = uncolored;
        while avail != 0 {
            let v = avail.trailing_zeros() as usize;
            order.push(v);
            colors.push(color);
            uncolored &= !bit(v);
            avail &= !bit(v);
            avail &= !adj[v];
        }
    }
    (order, colors)
}

/// Branch-and-bound main loop: extend a clique of size `depth` inside the
/// candidate set, updating `best`.
fn expand(adj: &[u64], cand: u64, depth: usize, best: &mut usize) {
    if cand == 0 {
        if depth > *best {
            *best = depth;
        }
        return;
    }
    let (order, colors) = color_sort(adj, cand);
    let mut cand = cand;
    for i in (0..order.len()).rev() {
        if depth + colors[i] <= *best {
            return;
        }
        let v = order[i];
        expand(adj, cand & adj[v], depth + 1, best);
        cand &= !bit(v);
    }
}

/// Size of the maximum clique (0 only for the empty universe).
fn max_clique_size(adj: &[u64]) -> usize {
    let n = adj.len();
    if n == 0 {
        return 0;
    }
    let mut best = 1;
    let full = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
    expand(adj, full, 0, &mut best);
    best
}

/// True if some clique of size `k` lies inside `cand`.
fn has_clique(adj: &[u64], cand: u64, k: usize) -> bool {
    if k == 0 {
        return true;
    }
    if (cand.count_ones() as usize) < k {
        return false;
    }
    let (_, colors) = color_sort(adj, cand);
    if *colors.last().unwrap() < k {
        return false;
    }
    let mut cand = cand;
    loop {
        if (cand.count_ones() as usize) < k {
            return false;
        }
        let v = cand.trailing_zeros() as usize;
        if has_clique(adj, cand & adj[v], k - 1) {
            return true;
        }
        cand &= !bit(v);
    }
}

fn check_cap(g: &Graph) -> Result<()> {
    if g.n() > ORACLE_VERTEX_CAP {
        return Err(Error::ResourceLimit(format!(
            "exact search capped at {ORACLE_VERTEX_CAP} vertices, got {}",
            g.n()
        )));
    }
    Ok(())
}

/// Exact size of the maximum clique of `g`.
pub fn clique_number(g: &Graph) -> Result<usize> {
    check_cap(g)?;
    Ok(max_clique_size(g.rows()))
}

/// Exact maximum clique; returns the lexicographically smallest one among
/// all maximum-size cliques (comparing sorted vertex lists element-wise).
pub fn max_clique(g: &Graph) -> Result<VertexSet> {
    check_cap(g)?;
    let n = g.n();
    if n == 0 {
        return Ok(VertexSet::EMPTY);
    }
    let adj = g.rows();
    let omega = max_clique_size(adj);
    // Extract the lexicographically smallest witness greedily: take the
    // smallest vertex that still allows completing a clique of the required
    // size from its candidate neighborhood.
    let mut chosen = VertexSet::EMPTY;
    let mut cand = VertexSet::full(n).mask();
    let mut need = omega;
    while need > 0 {
        let mut rest = cand;
        loop {
            debug_assert!(rest != 0, "witness extraction lost the optimum");
            let v = rest.trailing_zeros() as usize;
            rest &= !bit(v);
            if has_clique(adj, cand & adj[v], need - 1) {
                chosen = chosen.with(v);
                cand &= adj[v];
                need -= 1;
                break;
            }
        }
    }
    Ok(chosen)
}

/// Size of the maximum clique without extracting a witness.
pub fn max_clique_count(g: &Graph) -> Result<usize> {
    check_cap(g)?;
    Ok(max_clique_size(g.rows()))
}

// ======================================================================
// Independent sets
// ======================================================================

/// Exact maximum independent set: maximum clique of the complement, hence
/// also lexicographically smallest among the optima.
pub fn max_independent_set(g: &Graph) -> Result<VertexSet> {
    max_clique(&g.complement())
}

/// Greedy maximal independent set: scan ids ascending, keep every vertex
/// with no kept neighbor. Deterministic; size at least n / (max degree + 1).
pub fn greedy_mis(g: &Graph) -> VertexSet {
    greedy_mis_within(g, VertexSet::full(g.n()))
}

/// Greedy maximal independent set restricted to `within`: only those
/// vertices are scanned (ascending) and eligible.
pub fn greedy_mis_within(g: &Graph, within: VertexSet) -> VertexSet {
    let mut chosen = VertexSet::EMPTY;
    for v in within.iter() {
        if v >= g.n() {
            break;
        }
        if chosen.mask() & g.rows()[v] == 0 {
            chosen = chosen.with(v);
        }
    }
    chosen
}

/// Degree-sum lower bound on the independence number: sum of
/// 1 / (deg(v) + 1) over all vertices.
pub fn caro_wei_sum(g: &Graph) -> f64 {
    (0..g.n()).map(|v| 1.0 / (g.degree(v) as f64 + 1.0)).sum()
}

/// True if no edge joins two members of `set`. Ids outside the universe are
/// rejected as non-independent only if they cannot occur (debug assert).
pub fn is_independent(g: &Graph, set: VertexSet) -> bool {
    debug_assert!(
        set.is_subset_of(VertexSet::full(g.n())),
        "set {set} outside universe 0..{}",
        g.n()
    );
    for v in set.iter() {
        if v >= g.n() {
            return false;
        }
        if g.rows()[v] & set.mask() != 0 {
            return false;
        }
    }
    true
}

/// True if every pair of members of `set` is joined by an edge.
pub fn is_clique(g: &Graph, set: VertexSet) -> bool {
    debug_assert!(
        set.is_subset_of(VertexSet::full(g.n())),
        "set {set} outside universe 0..{}",
        g.n()
    );
    for v in set.iter() {
        if v >= g.n() {
            return false;
        }
        let others = set.without(v).mask();
        if g.rows()[v] & others != others {
            return false;
        }
    }
    true
}

// ======================================================================
// Tests
// ======================================================================
