//! Deterministic and seeded graph families for batch runs.
//!
//! Every seeded family draws from its own derived stream, so generating the
//! same family with the same seed is reproducible regardless of what else
//! the process has sampled.

use crate::error::{Error, Result};
use crate::graph::{Graph, MAX_VERTICES};
use crate::seeding::{self, labels};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Complete graph on `n` vertices.
pub fn clique(n: usize) -> Result<Graph> {
    Graph::complete(n)
}

/// The complete multipartite graph on `n` vertices with `r` near-equal
/// classes: sizes differ by at most one, vertices are adjacent exactly when
/// they sit in different classes. Maximizes edges among K_{r+1}-free graphs.
pub fn turan(n: usize, r: usize) -> Result<Graph> {
    if r == 0 || r > n {
        return Err(Error::InvalidParameter(format!(
            "class count {r} outside 1..={n}"
        )));
    }
    // Vertex v belongs to class v mod r, giving ⌈n/r⌉ or ⌊n/r⌋ per class.
    let mut g = Graph::empty(n)?;
    for u in 0..n {
        for v in (u + 1)..n {
            if u % r != v % r {
                g = g.with_edge(u, v)?;
            }
        }
    }
    Ok(g)
}

/// Each possible edge independently present with probability `p`.
pub fn gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) || !p.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "edge probability {p} outside [0, 1]"
        )));
    }
    if n > MAX_VERTICES {
        return Err(Error::InvalidParameter(format!(
            "vertex count {n} over the {MAX_VERTICES}-vertex cap"
        )));
    }
    let mut rng = seeding::derive_rng(seed, &[labels::GENERATOR, 0]);
    let mut g = Graph::empty(n)?;
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random_bool(p) {
                g = g.with_edge(u, v)?;
            }
        }
    }
    Ok(g)
}

/// A uniform-ish random simple `d`-regular graph via the pairing model:
/// scatter `d` points per vertex, match them uniformly, retry the whole
/// matching when it produces a loop or parallel edge.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if n > MAX_VERTICES {
        return Err(Error::InvalidParameter(format!(
            "vertex count {n} over the {MAX_VERTICES}-vertex cap"
        )));
    }
    if d >= n.max(1) {
        return Err(Error::InvalidParameter(format!(
            "degree {d} needs at least {} vertices, got {n}",
            d + 1
        )));
    }
    if (n * d) % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "no {d}-regular graph on {n} vertices: n·d must be even"
        )));
    }
    if d == 0 {
        return Graph::empty(n);
    }
    let mut rng = seeding::derive_rng(seed, &[labels::GENERATOR, 1]);
    let mut points: Vec<usize> = (0..n * d).map(|i| i / d).collect();
    const ATTEMPT_CAP: u64 = 100_000;
    for _ in 0..ATTEMPT_CAP {
        points.shuffle(&mut rng);
        let mut g = Graph::empty(n)?;
        let mut simple = true;
        for pair in points.chunks_exact(2) {
            let (u, v) = (pair[0], pair[1]);
            if u == v || g.has_edge(u, v) {
                simple = false;
                break;
            }
            g = g.with_edge(u, v)?;
        }
        if simple {
            return Ok(g);
        }
    }
    Err(Error::SamplingFailure {
        attempts: ATTEMPT_CAP,
    })
}

/// A parsed family description, as written in run specifications:
/// `clique`, `turan:R`, `gnp:P`, `regular:D`, or `file:PATH`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Family {
    Clique,
    Turan { r: usize },
    Gnp { p: f64 },
    RandomRegular { d: usize },
    File { path: String },
}

impl Family {
    /// Parse the compact `name[:arg]` syntax.
    pub fn parse(text: &str) -> Result<Self> {
        let (name, arg) = match text.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a.trim())),
            None => (text.trim(), None),
        };
        let need = |what: &str| {
            Error::InvalidParameter(format!("family {name} needs a {what} argument"))
        };
        match name {
            "clique" => Ok(Family::Clique),
            "turan" => {
                let r = arg
                    .ok_or_else(|| need("class-count"))?
                    .parse()
                    .map_err(|e| Error::InvalidParameter(format!("class count: {e}")))?;
                Ok(Family::Turan { r })
            }
            "gnp" | "random-gnp" => {
                let p = arg
                    .ok_or_else(|| need("probability"))?
                    .parse()
                    .map_err(|e| Error::InvalidParameter(format!("edge probability: {e}")))?;
                Ok(Family::Gnp { p })
            }
            "regular" | "random-regular" => {
                let d = arg
                    .ok_or_else(|| need("degree"))?
                    .parse()
                    .map_err(|e| Error::InvalidParameter(format!("degree: {e}")))?;
                Ok(Family::RandomRegular { d })
            }
            "file" => {
                let path = arg.ok_or_else(|| need("path"))?;
                Ok(Family::File { path: path.into() })
            }
            other => Err(Error::InvalidParameter(format!(
                "unknown graph family {other:?}; expected clique, turan:R, gnp:P, regular:D, or file:PATH"
            ))),
        }
    }

    /// Generate an instance; `n` is ignored for `file` (the file fixes it).
    pub fn generate(&self, n: usize, seed: u64) -> Result<Graph> {
        match self {
            Family::Clique => clique(n),
            Family::Turan { r } => turan(n, *r),
            Family::Gnp { p } => gnp(n, *p, seed),
            Family::RandomRegular { d } => random_regular(n, *d, seed),
            Family::File { path } => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    Error::InvalidParameter(format!("reading {path}: {e}"))
                })?;
                Graph::parse_edge_list(&text)
            }
        }
    }

    /// Whether instances vary with the seed.
    pub fn is_seeded(&self) -> bool {
        matches!(self, Family::Gnp { .. } | Family::RandomRegular { .. })
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Family::Clique => write!(f, "clique"),
            Family::Turan { r } => write!(f, "turan:{r}"),
            Family::Gnp { p } => write!(f, "gnp:{p}"),
            Family::RandomRegular { d } => write!(f, "regular:{d}"),
            Family::File { path } => write!(f, "file:{path}"),
        }
    }
}
