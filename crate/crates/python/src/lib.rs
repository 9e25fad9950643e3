//! Python bindings. Vertex labels are 1-based on the Python side, as in
//! the JSON format.

use num_bigint::BigInt;
use num_rational::BigRational;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use subcount::census::{self, FamilySpec};
use subcount::experiment::{self, ExperimentConfig};
use subcount::graph::{self as g, shapes};
use subcount::oracle;
use subcount::predict::{self, CycleNorm, LambdaConvention, Prediction};
use subcount::random;
use subcount::{GraphKind, WeightSpec};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn fraction<'py>(py: Python<'py>, q: &BigRational) -> PyResult<Bound<'py, PyAny>> {
    let (n, d): (BigInt, BigInt) = (q.numer().clone(), q.denom().clone());
    py.import("fractions")?.getattr("Fraction")?.call1((n, d))
}

fn from_json<'py>(py: Python<'py>, s: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (s,))
}

fn kind(s: &str) -> PyResult<GraphKind> {
    s.parse().map_err(err)
}

fn weights(s: Option<&str>) -> PyResult<Option<WeightSpec>> {
    s.map(|s| s.parse::<WeightSpec>().map_err(err)).transpose()
}

fn prediction<'py>(py: Python<'py>, p: PyResult<Prediction>) -> PyResult<Bound<'py, PyAny>> {
    from_json(py, &serde_json::to_string(&p?).map_err(err)?)
}

#[pyclass(name = "Graph", module = "subcount", eq, frozen, from_py_object)]
#[derive(Clone, PartialEq)]
struct PyGraph(subcount::Graph);

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (n, edges, kind = "multigraph"))]
    fn new(n: usize, edges: Vec<(u32, u32)>, kind: &str) -> PyResult<Self> {
        if edges.iter().any(|&(u, v)| u == 0 || v == 0) {
            return Err(err("vertex labels start at 1"));
        }
        let edges: Vec<(u32, u32)> = edges.iter().map(|&(u, v)| (u - 1, v - 1)).collect();
        Ok(PyGraph(subcount::Graph::from_edges(self::kind(kind)?, n, &edges).map_err(err)?))
    }

    /// A named shape: loop, edge, double-edge, triangle, pK, cK, kK, k1-K.
    #[staticmethod]
    #[pyo3(signature = (name, kind = "multigraph"))]
    fn builtin(name: &str, kind: &str) -> PyResult<Self> {
        Ok(PyGraph(shapes::parse_shape(name, self::kind(kind)?).map_err(err)?))
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        Ok(PyGraph(subcount::Graph::from_json(s).map_err(err)?))
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.0.m()
    }

    #[getter]
    fn kind(&self) -> String {
        self.0.kind().to_string()
    }

    #[getter]
    fn edges(&self) -> Vec<(u32, u32)> {
        self.0.edge_list().into_iter().map(|(u, v)| (u + 1, v + 1)).collect()
    }

    fn degrees(&self) -> Vec<u32> {
        self.0.degrees()
    }

    fn density<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &g::density(&self.0))
    }

    fn essential_density<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &g::essential_density(&self.0).map_err(err)?.0)
    }

    fn balance_class(&self) -> PyResult<String> {
        Ok(format!("{:?}", g::balance_class(&self.0).map_err(err)?))
    }

    fn aut_count(&self) -> PyResult<u64> {
        g::aut_count(&self.0).map_err(err)
    }

    fn canonical_copies(&self) -> PyResult<u64> {
        g::canonical_copies(&self.0).map_err(err)
    }

    fn is_isomorphic(&self, other: &PyGraph) -> bool {
        g::is_isomorphic(&self.0, &other.0)
    }

    /// Number of copies of `pattern` in this graph.
    fn count(&self, pattern: &PyGraph) -> PyResult<u128> {
        g::subgraph_count(&self.0, &pattern.0).map_err(err)
    }

    fn pair_family(&self) -> PyResult<Vec<PyGraph>> {
        Ok(g::pair_family(&self.0).map_err(err)?.into_iter().map(PyGraph).collect())
    }

    fn __repr__(&self) -> String {
        format!("Graph({})", self.0.to_json())
    }
}

fn family(shapes: Vec<PyGraph>) -> PyResult<FamilySpec> {
    let kind = shapes.first().map_or(GraphKind::Multi, |g| g.0.kind());
    FamilySpec::new(kind, shapes.into_iter().map(|g| g.0).collect()).map_err(err)
}

/// Copy-count distribution over every host, by enumeration.
#[pyfunction]
#[pyo3(signature = (n, m, family, kind = "multigraph", delta = None))]
fn oracle_distribution<'py>(
    py: Python<'py>,
    n: usize,
    m: usize,
    family: Vec<PyGraph>,
    kind: &str,
    delta: Option<&str>,
) -> PyResult<Bound<'py, PyDict>> {
    let shapes: Vec<subcount::Graph> = family.into_iter().map(|g| g.0).collect();
    let d = oracle::oracle_distribution(n, m, &shapes, weights(delta)?.as_ref(), self::kind(kind)?).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("total", fraction(py, &d.total)?)?;
    out.set_item("distinguished_total", fraction(py, &d.distinguished_total)?)?;
    let by_t = PyDict::new(py);
    for (t, w) in &d.by_t {
        by_t.set_item(t, fraction(py, w)?)?;
    }
    out.set_item("by_t", by_t)?;
    Ok(out)
}

/// Sum of copy counts over all hosts, from the generating function.
#[pyfunction]
#[pyo3(signature = (n, m, family, delta = None))]
fn distinguished_total<'py>(
    py: Python<'py>,
    n: usize,
    m: usize,
    family: Vec<PyGraph>,
    delta: Option<&str>,
) -> PyResult<Bound<'py, PyAny>> {
    let f = self::family(family)?;
    let q = match (f.kind(), weights(delta)?) {
        (GraphKind::Multi, None) => census::mg_distinguished(n, m, &f),
        (GraphKind::Simple, None) => census::sg_distinguished(n, m, &f),
        (_, Some(d)) => census::mg_distinguished_weighted(n, m, &d, &f),
    };
    fraction(py, &q.map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (n, m, family, delta = None))]
fn expected_count<'py>(
    py: Python<'py>,
    n: usize,
    m: usize,
    family: Vec<PyGraph>,
    delta: Option<&str>,
) -> PyResult<Bound<'py, PyAny>> {
    let q = census::expected_count(n, m, &self::family(family)?, weights(delta)?.as_ref()).map_err(err)?;
    fraction(py, &q)
}

/// Hosts with exactly `t` copies, for every `t`.
#[pyfunction]
fn exactly_t_distribution<'py>(py: Python<'py>, n: usize, m: usize, f: &PyGraph) -> PyResult<Bound<'py, PyDict>> {
    let d = census::exactly_t_distribution(n, m, &f.0, f.0.kind()).map_err(err)?;
    let out = PyDict::new(py);
    for (t, w) in &d {
        out.set_item(t, fraction(py, w)?)?;
    }
    Ok(out)
}

#[pyfunction]
#[pyo3(signature = (n, m, seed, replicate = 0, kind = "multigraph", delta = None))]
fn sample(n: usize, m: usize, seed: u64, replicate: u64, kind: &str, delta: Option<&str>) -> PyResult<PyGraph> {
    let rng = &mut random::replicate_rng(seed, replicate);
    let g = match (self::kind(kind)?, weights(delta)?) {
        (GraphKind::Simple, None) => random::sample_uniform_simple(n, m, rng).map(subcount::Graph::from),
        (GraphKind::Multi, None) => random::sample_uniform_multigraph(n, m, rng).map(subcount::Graph::from),
        (GraphKind::Multi, Some(d)) => random::sample_delta_multigraph(n, m, &d, rng).map(subcount::Graph::from),
        (GraphKind::Simple, Some(_)) => return Err(err("degree weights apply to multigraphs")),
    };
    Ok(PyGraph(g.map_err(err)?))
}

#[pyfunction]
fn solve_tuning(delta: &str, target: f64) -> PyResult<f64> {
    random::solve_tuning(&delta.parse::<WeightSpec>().map_err(err)?, target).map_err(err)
}

#[pyfunction]
fn threshold_exponent<'py>(py: Python<'py>, f: &PyGraph) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &predict::threshold_exponent(&f.0).map_err(err)?)
}

/// Poisson parameter of a strictly balanced pattern at `m ~ c n^alpha`.
#[pyfunction]
#[pyo3(signature = (f, c, convention = "iso-closed"))]
fn poisson_lambda<'py>(py: Python<'py>, f: &PyGraph, c: f64, convention: &str) -> PyResult<Bound<'py, PyAny>> {
    let p = match f.0.kind() {
        GraphKind::Simple => predict::poisson_lambda_simple(&f.0, c),
        GraphKind::Multi => {
            let conv: LambdaConvention = convention.parse().map_err(err)?;
            predict::poisson_lambda_multi(&f.0, c, conv)
        }
    };
    prediction(py, p.map_err(err))
}

#[pyfunction]
fn weighted_expectation<'py>(py: Python<'py>, f: &PyGraph, n: usize, m: usize, delta: &str) -> PyResult<Bound<'py, PyAny>> {
    let d: WeightSpec = delta.parse().map_err(err)?;
    prediction(py, predict::weighted_expectation_predictor(&f.0, n, m, &d).map_err(err))
}

#[pyfunction]
#[pyo3(signature = (l, n, m, delta, norm = "half"))]
fn cycle_mean<'py>(py: Python<'py>, l: usize, n: usize, m: usize, delta: &str, norm: &str) -> PyResult<Bound<'py, PyAny>> {
    let d: WeightSpec = delta.parse().map_err(err)?;
    let norm: CycleNorm = norm.parse().map_err(err)?;
    prediction(py, predict::cycle_poisson_mean_finite(l, n, m, &d, norm).map_err(err))
}

#[pyfunction]
fn power_law_cycles<'py>(py: Python<'py>, beta: f64, l: usize, n: usize) -> PyResult<Bound<'py, PyAny>> {
    prediction(py, predict::power_law_cycle_prediction(beta, l, n).map_err(err))
}

/// Runs an experiment from its JSON config and returns the report.
#[pyfunction]
#[pyo3(signature = (config, workers = None))]
fn run_experiment<'py>(py: Python<'py>, config: &str, workers: Option<usize>) -> PyResult<Bound<'py, PyAny>> {
    let cfg = ExperimentConfig::from_json(config).map_err(err)?;
    let threads = workers.unwrap_or_else(experiment::workers);
    let report = py.detach(|| experiment::run_with_workers(&cfg, threads)).map_err(err)?;
    from_json(py, &report.to_json())
}

#[pymodule(name = "subcount")]
fn subcount_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(oracle_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(distinguished_total, m)?)?;
    m.add_function(wrap_pyfunction!(expected_count, m)?)?;
    m.add_function(wrap_pyfunction!(exactly_t_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(sample, m)?)?;
    m.add_function(wrap_pyfunction!(solve_tuning, m)?)?;
    m.add_function(wrap_pyfunction!(threshold_exponent, m)?)?;
    m.add_function(wrap_pyfunction!(poisson_lambda, m)?)?;
    m.add_function(wrap_pyfunction!(weighted_expectation, m)?)?;
    m.add_function(wrap_pyfunction!(cycle_mean, m)?)?;
    m.add_function(wrap_pyfunction!(power_law_cycles, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    Ok(())
}
