//! Python bindings: matrices, weights, rankings, transforms, axiom checks and
//! the published counterexamples. Structured results (witnesses, reports, proof
//! chains) cross the boundary as JSON strings.

use pcmrank_core as core;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable value")
}

fn method(name: &str) -> PyResult<core::MethodId> {
    name.parse().map_err(err)
}

fn axiom(name: &str) -> PyResult<core::AxiomId> {
    name.parse().map_err(err)
}

fn rank_config(tie_tol: f64) -> PyResult<core::RankConfig> {
    if !(tie_tol.is_finite() && tie_tol > 0.0) {
        return Err(PyValueError::new_err("tie_tol must be positive"));
    }
    Ok(core::RankConfig {
        tie_tol,
        ..core::RankConfig::default()
    })
}

/// A positive reciprocal pairwise comparison matrix.
#[pyclass(name = "Pcm", module = "pcmrank", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyPcm {
    inner: core::Pcm,
}

#[pymethods]
impl PyPcm {
    #[new]
    #[pyo3(signature = (rows, reciprocity_tol = core::DEFAULT_RECIPROCITY_TOL))]
    fn new(rows: Vec<Vec<f64>>, reciprocity_tol: f64) -> PyResult<Self> {
        let inner = core::Pcm::from_rows(&rows, reciprocity_tol).map_err(err)?;
        Ok(Self { inner })
    }

    /// Parses CSV text; entries may be decimals or fractions such as `1/3`.
    #[staticmethod]
    #[pyo3(signature = (text, reciprocity_tol = core::DEFAULT_RECIPROCITY_TOL))]
    fn parse(text: &str, reciprocity_tol: f64) -> PyResult<Self> {
        let inner = core::Pcm::parse(text, reciprocity_tol).map_err(err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn ones(n: usize) -> PyResult<Self> {
        if n < 2 {
            return Err(err(core::Error::TooSmall(n)));
        }
        Ok(Self {
            inner: core::Pcm::ones(n),
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn rows(&self) -> Vec<Vec<f64>> {
        self.inner.rows()
    }

    fn to_csv(&self) -> String {
        self.inner.to_csv()
    }

    fn __getitem__(&self, ij: (usize, usize)) -> PyResult<f64> {
        self.inner.check_index(ij.0).map_err(err)?;
        self.inner.check_index(ij.1).map_err(err)?;
        Ok(self.inner.get(ij.0, ij.1))
    }

    fn __eq__(&self, other: PyRef<'_, Self>) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Pcm({:?})", self.inner.rows())
    }
}

impl From<core::Pcm> for PyPcm {
    fn from(inner: core::Pcm) -> Self {
        Self { inner }
    }
}

/// Normalized weights of `method` (`rgm`, `em`, `arith`, `col1`, `favprod`).
#[pyfunction]
fn weights(a: PyRef<'_, PyPcm>, method_name: &str) -> PyResult<Vec<f64>> {
    let opts = core::EmOptions::default();
    Ok(core::method_weights(method(method_name)?, &a.inner, &opts)
        .map_err(err)?
        .into_vec())
}

/// Eigenvector weights together with the principal eigenvalue.
#[pyfunction]
fn em(a: PyRef<'_, PyPcm>) -> PyResult<(Vec<f64>, f64)> {
    let (w, lambda) = core::em_weights(&a.inner, &core::EmOptions::default()).map_err(err)?;
    Ok((w.into_vec(), lambda))
}

/// Dense rank labels, 0 for the best class.
#[pyfunction]
#[pyo3(signature = (a, method_name, tie_tol = core::DEFAULT_TIE_TOL))]
fn rank(a: PyRef<'_, PyPcm>, method_name: &str, tie_tol: f64) -> PyResult<Vec<usize>> {
    let r =
        core::method_rank(method(method_name)?, &a.inner, &rank_config(tie_tol)?).map_err(err)?;
    Ok(r.labels().to_vec())
}

#[pyfunction]
fn aggregate(matrices: Vec<PyRef<'_, PyPcm>>) -> PyResult<PyPcm> {
    let ms: Vec<core::Pcm> = matrices.iter().map(|m| m.inner.clone()).collect();
    Ok(core::aggregate(&ms).map_err(err)?.into())
}

#[pyfunction]
fn opposite(a: PyRef<'_, PyPcm>) -> PyPcm {
    core::opposite(&a.inner).into()
}

/// Entrywise power with a positive rational exponent such as `"2"` or `"1/3"`.
#[pyfunction]
fn power(a: PyRef<'_, PyPcm>, kappa: &str) -> PyResult<PyPcm> {
    let k = core::RationalExponent::parse(kappa).map_err(err)?;
    Ok(core::power(&a.inner, k).into())
}

/// Relabels alternative `i` as `sigma[i]` (0-based).
#[pyfunction]
fn permute(a: PyRef<'_, PyPcm>, sigma: Vec<usize>) -> PyResult<PyPcm> {
    let p = core::Permutation::new(sigma).map_err(err)?;
    Ok(core::permute(&a.inner, &p).map_err(err)?.into())
}

#[pyfunction]
fn equalize_pair(a: PyRef<'_, PyPcm>, i: usize, j: usize) -> PyResult<PyPcm> {
    Ok(core::equalize_pair(&a.inner, i, j).map_err(err)?.into())
}

/// Seeded counterexample search; returns the witness as JSON or `None`.
#[pyfunction]
#[pyo3(signature = (method_name, axiom_name, seed = 42, trials = 10_000, n_min = 2, n_max = 6))]
fn falsify(
    py: Python<'_>,
    method_name: &str,
    axiom_name: &str,
    seed: u64,
    trials: usize,
    n_min: usize,
    n_max: usize,
) -> PyResult<Option<String>> {
    let (m, x) = (method(method_name)?, axiom(axiom_name)?);
    let cfg = core::SearchConfig {
        seed,
        trials,
        n_range: (n_min, n_max),
        ..core::SearchConfig::default()
    };
    let found = py
        .detach(|| core::falsify(m, x, &cfg, &core::RankConfig::default()))
        .map_err(err)?;
    Ok(found.as_ref().map(to_json))
}

/// Reports for the published counterexamples as a JSON list; `case=None` runs all.
#[pyfunction]
#[pyo3(signature = (case = None))]
fn repro(case: Option<&str>) -> PyResult<String> {
    let cfg = core::RankConfig::default();
    let reports = match case {
        Some(id) => vec![core::registry::paper_counterexample(id, &cfg).map_err(err)?],
        None => core::registry::all_counterexamples(&cfg).map_err(err)?,
    };
    Ok(to_json(&reports))
}

/// The proof chain and its identity report as JSON.
#[pyfunction]
#[pyo3(signature = (a, equalize = false))]
fn proof_chain(a: PyRef<'_, PyPcm>, equalize: bool) -> PyResult<String> {
    let base = if equalize {
        core::equalize_pair(&a.inner, 0, 1).map_err(err)?
    } else {
        a.inner.clone()
    };
    let chain = core::build_proof_chain(&base).map_err(err)?;
    let ids = core::verify_proof_identities(&chain, core::theorem::CHAIN_TOL).map_err(err)?;
    Ok(to_json(&serde_json::json!({
        "alpha": chain.alpha,
        "B": chain.b,
        "C": chain.c,
        "D": chain.d,
        "E": chain.e,
        "identities": {
            "inv_swap": ids.inv_swap.holds,
            "swap_aggregation": ids.swap_aggregation.map(|c| c.holds),
            "unit_row_means": ids.unit_row_means.holds,
            "alpha": ids.alpha.holds,
        },
        "max_deviation": ids,
    })))
}

#[pymodule]
fn pcmrank(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPcm>()?;
    m.add_function(wrap_pyfunction!(weights, m)?)?;
    m.add_function(wrap_pyfunction!(em, m)?)?;
    m.add_function(wrap_pyfunction!(rank, m)?)?;
    m.add_function(wrap_pyfunction!(aggregate, m)?)?;
    m.add_function(wrap_pyfunction!(opposite, m)?)?;
    m.add_function(wrap_pyfunction!(power, m)?)?;
    m.add_function(wrap_pyfunction!(permute, m)?)?;
    m.add_function(wrap_pyfunction!(equalize_pair, m)?)?;
    m.add_function(wrap_pyfunction!(falsify, m)?)?;
    m.add_function(wrap_pyfunction!(repro, m)?)?;
    m.add_function(wrap_pyfunction!(proof_chain, m)?)?;
    Ok(())
}
