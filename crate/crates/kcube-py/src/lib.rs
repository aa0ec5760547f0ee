//! Python bindings for the torus connectivity library.
//!
//! The module mirrors the Rust API at the level a notebook wants: a
//! `Torus` handle working on integer vertex codes, certificate-returning
//! kappa solvers, the named verification checks, and the fault-injection
//! estimators. Digit-string rendering is available for display.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use kcube::cuts::{self, SurvivorCondition};
use kcube::reliability::{self, FaultModel};
use kcube::solver::{self, KappaCertificate, SearchConfig};
use kcube::verify::{self, VerificationReport, VerifyMode};
use kcube::{Error, Torus, VertexSet};

/// Refusals become RuntimeError; domain and usage problems, ValueError.
fn to_py(e: Error) -> PyErr {
    match e {
        Error::CeilingExceeded { .. }
        | Error::CompleteGraph
        | Error::PoolBuild { .. }
        | Error::ConditionStarved => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn config(workers: usize, budget: Option<u64>) -> SearchConfig {
    SearchConfig {
        worker_count: workers,
        max_cut_size: budget,
        ..SearchConfig::default()
    }
}

fn parse_condition(s: &str) -> PyResult<SurvivorCondition> {
    s.parse().map_err(to_py)
}

#[pyclass(frozen, name = "Torus", skip_from_py_object)]
#[derive(Clone, Copy)]
struct PyTorus {
    inner: Torus,
}

impl PyTorus {
    fn set(&self, codes: Vec<u64>) -> PyResult<VertexSet> {
        VertexSet::from_codes(self.inner, codes).map_err(to_py)
    }
}

#[pymethods]
impl PyTorus {
    #[new]
    fn new(k: u64, n: u32) -> PyResult<Self> {
        Ok(Self {
            inner: Torus::new(k, n).map_err(to_py)?,
        })
    }

    #[getter]
    fn k(&self) -> u64 {
        self.inner.k()
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.n()
    }

    #[getter]
    fn vertex_count(&self) -> u64 {
        self.inner.vertex_count()
    }

    #[getter]
    fn edge_count(&self) -> u64 {
        self.inner.edge_count()
    }

    #[getter]
    fn degree(&self) -> u64 {
        self.inner.degree()
    }

    fn vertex_string(&self, code: u64) -> PyResult<String> {
        let v = self.inner.vertex(code).map_err(to_py)?;
        Ok(self.inner.vertex_string(v))
    }

    fn vertex_code(&self, label: &str) -> PyResult<u64> {
        Ok(self.inner.vertex_from_string(label).map_err(to_py)?.code())
    }

    fn neighbors(&self, code: u64) -> PyResult<Vec<u64>> {
        let v = self.inner.vertex(code).map_err(to_py)?;
        Ok(self.inner.neighbors(v).codes().to_vec())
    }

    fn lee_distance(&self, a: u64, b: u64) -> PyResult<u64> {
        let (a, b) = (self.inner.vertex(a).map_err(to_py)?, self.inner.vertex(b).map_err(to_py)?);
        Ok(self.inner.lee_distance(a, b))
    }

    fn is_adjacent(&self, a: u64, b: u64) -> PyResult<bool> {
        let (a, b) = (self.inner.vertex(a).map_err(to_py)?, self.inner.vertex(b).map_err(to_py)?);
        Ok(self.inner.is_adjacent(a, b))
    }

    fn common_neighbors(&self, a: u64, b: u64) -> PyResult<Vec<u64>> {
        let (a, b) = (self.inner.vertex(a).map_err(to_py)?, self.inner.vertex(b).map_err(to_py)?);
        Ok(self.inner.common_neighbors(a, b).map_err(to_py)?.codes().to_vec())
    }

    fn edges(&self) -> Vec<(u64, u64)> {
        self.inner.edges().map(|(u, v)| (u.code(), v.code())).collect()
    }

    /// Classifies the removal of `faults` (vertex codes) as a cut.
    fn classify_cut(&self, faults: Vec<u64>) -> PyResult<PyClassification> {
        let class = cuts::classify_cut(&self.set(faults)?).map_err(to_py)?;
        Ok(PyClassification {
            is_cut: class.is_cut,
            component_sizes: class.component_sizes.clone(),
            max_h: class.max_h,
            isolated_vertex_present: class.isolated_vertex_present,
            isolated_edge_present: class.isolated_edge_present,
        })
    }

    /// Connected components of the surviving vertices, as code lists.
    fn survivor_components(&self, faults: Vec<u64>) -> PyResult<Vec<Vec<u64>>> {
        let comps = cuts::survivor_components(&self.set(faults)?).map_err(to_py)?;
        Ok(comps.into_iter().map(|c| c.codes().to_vec()).collect())
    }

    fn __repr__(&self) -> String {
        format!("Torus(k={}, n={})", self.inner.k(), self.inner.n())
    }
}

#[pyclass(frozen, get_all, name = "Classification", skip_from_py_object)]
#[derive(Clone)]
struct PyClassification {
    is_cut: bool,
    component_sizes: Vec<u64>,
    max_h: i64,
    isolated_vertex_present: bool,
    isolated_edge_present: bool,
}

#[pymethods]
impl PyClassification {
    fn __repr__(&self) -> String {
        format!(
            "Classification(is_cut={}, component_sizes={:?}, max_h={})",
            self.is_cut, self.component_sizes, self.max_h
        )
    }
}

#[pyclass(frozen, get_all, name = "Certificate", skip_from_py_object)]
#[derive(Clone)]
struct PyCertificate {
    h: u32,
    value: u64,
    method: String,
    exhaustive: bool,
    witness: Option<Vec<String>>,
}

impl PyCertificate {
    fn from_cert(t: &Torus, cert: KappaCertificate) -> Self {
        Self {
            h: cert.h,
            value: cert.value,
            method: cert.method.label().to_string(),
            exhaustive: cert.exhaustive,
            witness: cert
                .witness
                .map(|w| w.iter().map(|v| t.vertex_string(v)).collect()),
        }
    }
}

#[pymethods]
impl PyCertificate {
    fn __repr__(&self) -> String {
        format!(
            "Certificate(h={}, value={}, method='{}', exhaustive={})",
            self.h, self.value, self.method, self.exhaustive
        )
    }
}

#[pyclass(frozen, get_all, name = "Report", skip_from_py_object)]
#[derive(Clone)]
struct PyReport {
    check_id: String,
    passed: bool,
    cases_checked: u64,
    mode: String,
    counterexample: Option<String>,
    elapsed_seconds: f64,
}

impl PyReport {
    fn from_report(rep: &VerificationReport) -> Self {
        Self {
            check_id: rep.check_id.to_string(),
            passed: rep.passed,
            cases_checked: rep.cases_checked,
            mode: match rep.mode {
                VerifyMode::Exhaustive => "exhaustive".to_string(),
                VerifyMode::Sampled { trials, seed } => {
                    format!("sampled(trials={trials}, seed={seed})")
                }
            },
            counterexample: rep.counterexample.as_ref().map(|ce| ce.detail.clone()),
            elapsed_seconds: rep.elapsed.as_secs_f64(),
        }
    }
}

#[pymethods]
impl PyReport {
    fn __repr__(&self) -> String {
        format!(
            "Report(check_id='{}', passed={}, cases_checked={})",
            self.check_id, self.passed, self.cases_checked
        )
    }
}

#[pyclass(frozen, get_all, name = "Estimate", skip_from_py_object)]
#[derive(Clone)]
struct PyEstimate {
    fault_count: u64,
    trials: u64,
    accepted: u64,
    disconnected: u64,
    point_estimate: f64,
    wilson_low: f64,
    wilson_high: f64,
}

impl PyEstimate {
    fn from_estimate(e: &reliability::ReliabilityEstimate) -> Self {
        Self {
            fault_count: e.fault_count,
            trials: e.trials,
            accepted: e.accepted,
            disconnected: e.disconnected,
            point_estimate: e.point_estimate,
            wilson_low: e.wilson_low,
            wilson_high: e.wilson_high,
        }
    }
}

#[pymethods]
impl PyEstimate {
    fn __repr__(&self) -> String {
        format!(
            "Estimate(fault_count={}, p={:.6}, wilson=[{:.6}, {:.6}])",
            self.fault_count, self.point_estimate, self.wilson_low, self.wilson_high
        )
    }
}

#[pyfunction]
fn kappa_formula(t: &PyTorus, h: u32) -> PyResult<PyCertificate> {
    let cert = solver::kappa_formula(&t.inner, h).map_err(to_py)?;
    Ok(PyCertificate::from_cert(&t.inner, cert))
}

#[pyfunction]
#[pyo3(signature = (t, h, workers = 1, budget = None))]
fn kappa_subset_oracle(t: &PyTorus, h: u32, workers: usize, budget: Option<u64>) -> PyResult<PyCertificate> {
    let cert = solver::kappa_subset_oracle(&t.inner, h, &config(workers, budget)).map_err(to_py)?;
    Ok(PyCertificate::from_cert(&t.inner, cert))
}

#[pyfunction]
#[pyo3(signature = (t, h, workers = 1, budget = None))]
fn kappa_boundary_enum(t: &PyTorus, h: u32, workers: usize, budget: Option<u64>) -> PyResult<PyCertificate> {
    let cert = solver::kappa_boundary_enum(&t.inner, h, &config(workers, budget)).map_err(to_py)?;
    Ok(PyCertificate::from_cert(&t.inner, cert))
}

#[pyfunction]
fn kappa_upper_bound(t: &PyTorus, h: u32) -> PyResult<PyCertificate> {
    let cert = solver::kappa_upper_bound(&t.inner, h).map_err(to_py)?;
    Ok(PyCertificate::from_cert(&t.inner, cert))
}

#[pyfunction]
#[pyo3(signature = (t, workers = 1))]
fn connectivity_flow(t: &PyTorus, workers: usize) -> PyResult<u64> {
    solver::classic_connectivity_flow(&t.inner, &config(workers, None)).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (check, n, mode = "exhaustive", trials = 100_000, seed = 42, workers = 1))]
fn verify_check(
    check: &str,
    n: u32,
    mode: &str,
    trials: u64,
    seed: u64,
    workers: usize,
) -> PyResult<PyReport> {
    let mode = match mode {
        "exhaustive" => VerifyMode::Exhaustive,
        "sampled" => VerifyMode::Sampled { trials, seed },
        other => return Err(PyValueError::new_err(format!("unknown mode `{other}`"))),
    };
    let run = match check {
        "common-neighbors" => verify::verify_common_neighbors,
        "closed-nbhd" => verify::verify_closed_neighborhood_connected,
        "edge-cut" => verify::verify_edge_cut_lemma,
        "path-cut" => verify::verify_path_cut_lemma,
        "thm1" => verify::verify_theorem1_conditional,
        "thm2" => verify::verify_theorem2_conditional,
        other => return Err(PyValueError::new_err(format!("unknown check `{other}`"))),
    };
    let rep = run(n, mode, &config(workers, None)).map_err(to_py)?;
    Ok(PyReport::from_report(&rep))
}

#[pyfunction]
#[pyo3(signature = (t, faults, trials, seed, condition = "none", workers = 1))]
fn estimate_disconnection(
    t: &PyTorus,
    faults: u64,
    trials: u64,
    seed: u64,
    condition: &str,
    workers: usize,
) -> PyResult<PyEstimate> {
    let model = FaultModel {
        fault_count: faults,
        condition: parse_condition(condition)?,
        seed,
    };
    let est = reliability::estimate_disconnection(&t.inner, &model, trials, &config(workers, None))
        .map_err(to_py)?;
    Ok(PyEstimate::from_estimate(&est))
}

#[pyfunction]
#[pyo3(signature = (t, fault_counts, trials, seed, condition = "none", workers = 1))]
fn sweep_fault_sizes(
    t: &PyTorus,
    fault_counts: Vec<u64>,
    trials: u64,
    seed: u64,
    condition: &str,
    workers: usize,
) -> PyResult<Vec<PyEstimate>> {
    let table = reliability::sweep_fault_sizes(
        &t.inner,
        &fault_counts,
        parse_condition(condition)?,
        trials,
        seed,
        &config(workers, None),
    )
    .map_err(to_py)?;
    Ok(table.iter().map(PyEstimate::from_estimate).collect())
}

#[pymodule]
fn kcube_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTorus>()?;
    m.add_class::<PyClassification>()?;
    m.add_class::<PyCertificate>()?;
    m.add_class::<PyReport>()?;
    m.add_class::<PyEstimate>()?;
    m.add_function(wrap_pyfunction!(kappa_formula, m)?)?;
    m.add_function(wrap_pyfunction!(kappa_subset_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(kappa_boundary_enum, m)?)?;
    m.add_function(wrap_pyfunction!(kappa_upper_bound, m)?)?;
    m.add_function(wrap_pyfunction!(connectivity_flow, m)?)?;
    m.add_function(wrap_pyfunction!(verify_check, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_disconnection, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_fault_sizes, m)?)?;
    Ok(())
}
