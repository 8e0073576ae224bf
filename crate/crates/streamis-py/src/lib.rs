//! Python bindings: graphs, exact oracles, generators, streaming runs,
//! parameter arithmetic, and a JSON bridge for full adversary runs.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyModule;
use streamis::adversary::{
    self, run_adversary, verify_result, AdversaryConfig, Opponent,
};
use streamis::generators;
use streamis::graph::Graph;
use streamis::oracles;
use streamis::streaming::{self, by_name, ALGORITHM_NAMES};
use streamis::VertexSet;

fn err(e: streamis::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn set_to_vec(set: VertexSet) -> Vec<usize> {
    set.iter().collect()
}

/// Dense undirected graph on at most 64 vertices.
#[pyclass(name = "Graph", frozen, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyGraph {
    inner: Graph,
}

#[pymethods]
impl PyGraph {
    /// Build from a vertex count and `(u, v)` pairs.
    #[new]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        Ok(Self {
            inner: Graph::from_edges(n, &edges).map_err(err)?,
        })
    }

    /// Edgeless graph.
    #[staticmethod]
    fn empty(n: usize) -> PyResult<Self> {
        Ok(Self {
            inner: Graph::empty(n).map_err(err)?,
        })
    }

    /// Complete graph.
    #[staticmethod]
    fn complete(n: usize) -> PyResult<Self> {
        Ok(Self {
            inner: Graph::complete(n).map_err(err)?,
        })
    }

    /// Parse the edge-list text format (`"n m"` header, `"u v"` lines).
    #[staticmethod]
    fn parse_edge_list(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: Graph::parse_edge_list(text).map_err(err)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    #[getter]
    fn max_degree(&self) -> usize {
        self.inner.max_degree()
    }

    fn degree(&self, v: usize) -> usize {
        self.inner.degree(v)
    }

    fn has_edge(&self, u: usize, v: usize) -> bool {
        self.inner.has_edge(u, v)
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges()
    }

    fn to_edge_list(&self) -> String {
        self.inner.to_edge_list()
    }

    /// Hex SHA-256 of the canonical representation.
    fn digest(&self) -> String {
        self.inner.digest_hex()
    }

    fn complement(&self) -> Self {
        Self {
            inner: self.inner.complement(),
        }
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(n={}, m={}, max_degree={})",
            self.inner.n(),
            self.inner.edge_count(),
            self.inner.max_degree()
        )
    }
}

/// Exact maximum independent set (branch-and-bound).
#[pyfunction]
fn max_independent_set(g: &PyGraph) -> PyResult<Vec<usize>> {
    Ok(set_to_vec(
        oracles::max_independent_set(&g.inner).map_err(err)?,
    ))
}

/// Exact maximum clique.
#[pyfunction]
fn max_clique(g: &PyGraph) -> PyResult<Vec<usize>> {
    Ok(set_to_vec(oracles::max_clique(&g.inner).map_err(err)?))
}

/// Exact clique number ω(G).
#[pyfunction]
fn clique_number(g: &PyGraph) -> PyResult<usize> {
    oracles::clique_number(&g.inner).map_err(err)
}

/// Greedy independent set in ascending vertex order.
#[pyfunction]
fn greedy_mis(g: &PyGraph) -> Vec<usize> {
    set_to_vec(oracles::greedy_mis(&g.inner))
}

/// Degree-sum guarantee Σ 1/(1+deg(v)).
#[pyfunction]
fn caro_wei_sum(g: &PyGraph) -> f64 {
    oracles::caro_wei_sum(&g.inner)
}

/// Whether the vertex list is independent in the graph.
#[pyfunction]
fn is_independent(g: &PyGraph, vertices: Vec<usize>) -> PyResult<bool> {
    let mut set = VertexSet::EMPTY;
    for v in vertices {
        if v >= g.inner.n() {
            return Err(PyValueError::new_err(format!(
                "vertex {v} out of range for n = {}",
                g.inner.n()
            )));
        }
        set = set.with(v);
    }
    Ok(oracles::is_independent(&g.inner, set))
}

/// Turán graph: n vertices in r near-equal classes, complete multipartite.
#[pyfunction]
fn turan(n: usize, r: usize) -> PyResult<PyGraph> {
    Ok(PyGraph {
        inner: generators::turan(n, r).map_err(err)?,
    })
}

/// Each edge independently present with probability p.
#[pyfunction]
fn gnp(n: usize, p: f64, seed: u64) -> PyResult<PyGraph> {
    Ok(PyGraph {
        inner: generators::gnp(n, p, seed).map_err(err)?,
    })
}

/// Random simple d-regular graph (pairing model).
#[pyfunction]
fn random_regular(n: usize, d: usize, seed: u64) -> PyResult<PyGraph> {
    Ok(PyGraph {
        inner: generators::random_regular(n, d, seed).map_err(err)?,
    })
}

/// Stream the graph's edges (ascending) through a named algorithm; returns
/// `(claimed_vertices, peak_state_bits)`.
#[pyfunction]
#[pyo3(signature = (name, g, seed = 0))]
fn run_algo(name: &str, g: &PyGraph, seed: u64) -> PyResult<(Vec<usize>, u64)> {
    let delta = g.inner.max_degree().max(1);
    let alg = by_name(name, g.inner.n(), delta, seed).map_err(err)?;
    let stream = g.inner.edges();
    let claimed = streaming::run(alg.as_ref(), &stream).map_err(err)?;
    let peak = streaming::measure_peak_state(alg.as_ref(), &stream).map_err(err)?;
    Ok((set_to_vec(claimed), peak))
}

/// Repetition and round parameters from the formulas alone: `(ell, k)`.
#[pyfunction]
fn derive_ell_k(n: usize, s_bits: u64) -> (u64, u64) {
    adversary::derive_ell_k(n, s_bits)
}

/// `(ell, k)` with the full-guarantee domain checks enforced.
#[pyfunction]
fn derive_params(n: usize, delta: usize, s_bits: u64) -> PyResult<(u64, u64)> {
    adversary::derive_params(n, delta, s_bits).map_err(err)
}

/// Conceded-output ceiling `n/Δ²·(1 + k·(96·ℓ²·ln n + 30))`.
#[pyfunction]
fn threshold(n: usize, delta: usize, k: u64, ell: u64) -> f64 {
    adversary::threshold(n, delta, k, ell)
}

/// Simplified headline ceiling.
#[pyfunction]
fn simplified_output_bound(n: usize, delta: usize, s_bits: u64) -> f64 {
    adversary::simplified_output_bound(n, delta, s_bits)
}

/// Run the adaptive adversary from a flat key-value config text against a
/// named algorithm; returns the full result, verification report, and
/// per-round digests as a JSON string.
#[pyfunction]
#[pyo3(signature = (config_text, algorithm, algo_seed = 0))]
fn run_adversary_json(config_text: &str, algorithm: &str, algo_seed: u64) -> PyResult<String> {
    let config = AdversaryConfig::parse_flat(config_text).map_err(err)?;
    let alg = by_name(algorithm, config.n, config.delta, algo_seed).map_err(err)?;
    let opponent = Opponent::Streaming(alg.as_ref());
    let result = run_adversary(&config, &opponent).map_err(err)?;
    let verification = verify_result(&result, &config, &opponent).map_err(err)?;
    let payload = serde_json::json!({
        "algorithm": algorithm,
        "algo_seed": algo_seed,
        "round_digests": result.round_digests(),
        "verification": verification,
        "result": result,
    });
    serde_json::to_string(&payload).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pymodule]
fn streamis_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(max_independent_set, m)?)?;
    m.add_function(wrap_pyfunction!(max_clique, m)?)?;
    m.add_function(wrap_pyfunction!(clique_number, m)?)?;
    m.add_function(wrap_pyfunction!(greedy_mis, m)?)?;
    m.add_function(wrap_pyfunction!(caro_wei_sum, m)?)?;
    m.add_function(wrap_pyfunction!(is_independent, m)?)?;
    m.add_function(wrap_pyfunction!(turan, m)?)?;
    m.add_function(wrap_pyfunction!(gnp, m)?)?;
    m.add_function(wrap_pyfunction!(random_regular, m)?)?;
    m.add_function(wrap_pyfunction!(run_algo, m)?)?;
    m.add_function(wrap_pyfunction!(derive_ell_k, m)?)?;
    m.add_function(wrap_pyfunction!(derive_params, m)?)?;
    m.add_function(wrap_pyfunction!(threshold, m)?)?;
    m.add_function(wrap_pyfunction!(simplified_output_bound, m)?)?;
    m.add_function(wrap_pyfunction!(run_adversary_json, m)?)?;
    m.add("ALGORITHM_NAMES", ALGORITHM_NAMES.to_vec())?;
    Ok(())
}
