//! Python bindings: instances, formulations, circuits, search runs and
//! resource metrics.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use qapgas::analysis;
use qapgas::circuit::{build_ay, build_dicke, PhaseStyle, StateInit};
use qapgas::gas::{self, BackendKind, GasConfig, Termination};
use qapgas::poly::mask_to_bits;
use qapgas::{FormulationKind, Penalties, Permutation};

fn err(e: qapgas::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn kind_of(s: &str) -> PyResult<FormulationKind> {
    s.parse().map_err(err)
}

/// Quadratic assignment instance with normalized flow and distance matrices.
#[pyclass(name = "QapInstance", frozen)]
struct PyQapInstance {
    inner: qapgas::QapInstance,
}

#[pymethods]
impl PyQapInstance {
    /// Seeded instance with entries on a 0.1 grid.
    #[staticmethod]
    #[pyo3(signature = (n, seed = 0))]
    fn random(n: usize, seed: u64) -> PyResult<Self> {
        Ok(Self { inner: qapgas::random_instance(n, seed).map_err(err)? })
    }

    #[staticmethod]
    fn from_qaplib(text: &str) -> PyResult<Self> {
        Ok(Self { inner: qapgas::parse_qaplib(text).map_err(err)? })
    }

    #[staticmethod]
    #[pyo3(signature = (flow, dist, name = "matrices"))]
    fn from_matrices(flow: Vec<Vec<f64>>, dist: Vec<Vec<f64>>, name: &str) -> PyResult<Self> {
        Ok(Self { inner: qapgas::QapInstance::from_rows(name, &flow, &dist).map_err(err)? })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.size()
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    /// Cost of a 0-based permutation (`perm[i]` is the location of facility `i`).
    fn objective(&self, perm: Vec<usize>) -> PyResult<f64> {
        let p = Permutation::new(perm).map_err(err)?;
        self.inner.objective(&p).map_err(err)
    }

    /// `(permutation, value)` of an exhaustive search.
    fn brute_force(&self) -> PyResult<(Vec<usize>, f64)> {
        let (p, v) = qapgas::brute_force_optimum(&self.inner).map_err(err)?;
        Ok((p.mapping().to_vec(), v))
    }

    fn to_qaplib(&self) -> String {
        self.inner.to_qaplib()
    }

    fn __repr__(&self) -> String {
        format!("QapInstance(name={:?}, n={})", self.inner.name(), self.inner.size())
    }
}

/// Pseudo-Boolean formulation of an instance: `qubo-h`, `qubo-d` or `hubo-hw`.
#[pyclass(name = "Formulation", frozen)]
struct PyFormulation {
    inner: qapgas::Formulation,
}

#[pymethods]
impl PyFormulation {
    /// Encode with default penalties unless weights are given.
    #[staticmethod]
    #[pyo3(signature = (instance, kind, row_penalty = None, col_penalty = None))]
    fn encode(instance: &PyQapInstance, kind: &str, row_penalty: Option<f64>, col_penalty: Option<f64>) -> PyResult<Self> {
        let kind = kind_of(kind)?;
        let mut p = Penalties::default_for(kind, instance.inner.size());
        if let Some(c) = col_penalty {
            p.col = c;
        }
        if row_penalty.is_some() && kind != FormulationKind::QuboDicke {
            p.row = row_penalty;
        }
        Ok(Self { inner: qapgas::encode(&instance.inner, kind, p).map_err(err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: qapgas::Formulation::from_json(text).map_err(err)? })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind().as_str()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.size()
    }

    #[getter]
    fn num_vars(&self) -> usize {
        self.inner.num_vars()
    }

    #[getter]
    fn num_terms(&self) -> usize {
        self.inner.num_terms()
    }

    /// `[(variables, coefficient), ...]`, constant first.
    fn terms(&self) -> Vec<(Vec<u32>, f64)> {
        self.inner.poly().terms().map(|(m, c)| (m.vars().to_vec(), c)).collect()
    }

    fn evaluate(&self, bits: Vec<bool>) -> PyResult<f64> {
        self.inner.evaluate(&bits).map_err(err)
    }

    /// The permutation a bitstring encodes, or `None` if it encodes none.
    fn decode(&self, bits: Vec<bool>) -> PyResult<Option<Vec<usize>>> {
        Ok(self.inner.decode(&bits).map_err(err)?.map(|p| p.mapping().to_vec()))
    }

    fn encode_permutation(&self, perm: Vec<usize>) -> PyResult<Vec<bool>> {
        let p = Permutation::new(perm).map_err(err)?;
        self.inner.encode_permutation(&p).map_err(err)
    }

    /// Copy with every coefficient multiplied by `factor` (results must be integers).
    fn integer_scaled(&self, factor: f64) -> PyResult<Self> {
        Ok(Self { inner: self.inner.integer_scaled(factor).map_err(err)? })
    }

    /// Text form of `A_y` for this formulation.
    #[pyo3(signature = (m, y = 0.0, rz = false))]
    fn ay_circuit(&self, m: usize, y: f64, rz: bool) -> PyResult<String> {
        let style = if rz { PhaseStyle::Rz } else { PhaseStyle::R };
        let c = build_ay(self.inner.poly(), m, y, StateInit::for_formulation(&self.inner), style).map_err(err)?;
        Ok(c.to_text())
    }

    fn __repr__(&self) -> String {
        format!(
            "Formulation(kind={}, n={}, num_vars={}, num_terms={})",
            self.inner.kind(),
            self.inner.size(),
            self.inner.num_vars(),
            self.inner.num_terms()
        )
    }
}

/// Independent search runs. Returns `(run_id, queries, iterations,
/// found_value, grover_applications, best_bits)` per run.
#[pyfunction]
#[pyo3(signature = (formulation, runs, seed = 0, backend = "emulated", known_optimum = None, stall = None, max_iterations = 100_000))]
#[allow(clippy::type_complexity)]
fn run_gas(
    formulation: &PyFormulation,
    runs: usize,
    seed: u64,
    backend: &str,
    known_optimum: Option<f64>,
    stall: Option<usize>,
    max_iterations: usize,
) -> PyResult<Vec<(usize, u64, usize, f64, u64, Vec<bool>)>> {
    let backend = match backend {
        "emulated" => BackendKind::Emulated,
        "exact" => BackendKind::Exact,
        other => return Err(PyValueError::new_err(format!("unknown backend {other:?}"))),
    };
    let termination = match (known_optimum, stall) {
        (Some(v), _) => Termination::KnownOptimum(v),
        (None, Some(c)) => Termination::ThresholdStall(c),
        (None, None) => Termination::IterationCap,
    };
    let cfg = GasConfig { termination, backend, seed, max_iterations, ..Default::default() };
    let n = formulation.inner.num_vars();
    let results = gas::run_many(&formulation.inner, &cfg, runs).map_err(err)?;
    Ok(results
        .into_iter()
        .map(|(r, t)| (r.run_id, r.queries, r.iterations, r.found_value, r.grover_applications, mask_to_bits(t.best_x, n)))
        .collect())
}

/// Median query counts per formulation until the optimum is reached.
#[pyfunction]
#[pyo3(signature = (instance, runs, seed = 0))]
fn median_queries(instance: &PyQapInstance, runs: usize, seed: u64) -> PyResult<Vec<(String, f64)>> {
    let cfg = GasConfig { seed, ..Default::default() };
    let report = gas::cdf_experiment(&instance.inner, &FormulationKind::ALL, runs, &cfg).map_err(err)?;
    Ok(report.series.iter().map(|s| (s.kind.to_string(), s.median_queries)).collect())
}

/// Text form of the Dicke-state circuit `|D_k^n>`.
#[pyfunction]
fn dicke_circuit(n: usize, k: usize) -> PyResult<String> {
    Ok(build_dicke(n, k).map_err(err)?.to_text())
}

#[pyfunction]
fn term_count(n: usize, kind: &str) -> PyResult<(u128, u128)> {
    let kind = kind_of(kind)?;
    Ok((
        analysis::term_count_closed_form(n, kind).map_err(err)?,
        analysis::term_count_exact(n, kind).map_err(err)?,
    ))
}

/// `(variables, value-register width)` under the metric penalty convention.
#[pyfunction]
#[pyo3(signature = (n, kind, uniform_penalties = false))]
fn qubit_counts(n: usize, kind: &str, uniform_penalties: bool) -> PyResult<(usize, usize)> {
    let kind = kind_of(kind)?;
    let q = analysis::qubit_counts(n, kind, analysis::metric_penalties(n, kind, uniform_penalties)).map_err(err)?;
    Ok((q.n_vars, q.m))
}

#[pyfunction]
#[pyo3(signature = (n_min, n_max, uniform_penalties = false))]
fn metrics_csv(n_min: usize, n_max: usize, uniform_penalties: bool) -> PyResult<String> {
    analysis::emit_metrics(n_min, n_max, &FormulationKind::ALL, uniform_penalties).map_err(err)
}

#[pymodule]
#[pyo3(name = "qapgas")]
fn qapgas_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyQapInstance>()?;
    m.add_class::<PyFormulation>()?;
    m.add_function(wrap_pyfunction!(run_gas, m)?)?;
    m.add_function(wrap_pyfunction!(median_queries, m)?)?;
    m.add_function(wrap_pyfunction!(dicke_circuit, m)?)?;
    m.add_function(wrap_pyfunction!(term_count, m)?)?;
    m.add_function(wrap_pyfunction!(qubit_counts, m)?)?;
    m.add_function(wrap_pyfunction!(metrics_csv, m)?)?;
    Ok(())
}
