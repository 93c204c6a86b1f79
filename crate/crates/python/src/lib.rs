//! Python bindings. Reports come back as plain dicts (via their JSON form);
//! every library error surfaces as `ValueError` prefixed with its code.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use ::pdsing as core;
use core::classify::{
    enumerate_and_verify as enumerate, threshold_report as threshold, EnumerationBounds,
};
use core::cli::{self, render_graph, AnalyzeOptions, GraphFormat};
use core::number::{format_rational, parse_rational};

fn err(e: core::Error) -> PyErr {
    PyValueError::new_err(format!("{}: {e}", e.code()))
}

fn to_py<T: serde::Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

/// A normalized divisor s·P0 − Σ a_i·P_i with 0 < a_i < 1.
#[pyclass(name = "Divisor", frozen)]
struct PyDivisor {
    inner: core::NormalizedDivisor,
}

#[pymethods]
impl PyDivisor {
    /// Parses "2 - 3/5 - 4/5 - 1/2" (or a JSON object of labelled
    /// coefficients) and normalizes it.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        let q = cli::parse_divisor(text).map_err(err)?;
        Ok(PyDivisor {
            inner: core::normalize(&q).map_err(err)?,
        })
    }

    /// Builds (s; {num/den, ...}) directly from integer pairs.
    #[staticmethod]
    fn from_pairs(s: i64, fractions: Vec<(i64, i64)>) -> PyResult<Self> {
        Ok(PyDivisor {
            inner: core::NormalizedDivisor::from_pairs(s, &fractions).map_err(err)?,
        })
    }

    #[getter]
    fn s(&self) -> i64 {
        self.inner.s()
    }

    #[getter]
    fn fractions(&self) -> Vec<String> {
        self.inner
            .fractions()
            .iter()
            .map(|f| f.to_string())
            .collect()
    }

    #[getter]
    fn degree(&self) -> String {
        format_rational(&self.inner.degree())
    }

    #[getter]
    fn period(&self) -> u64 {
        self.inner.period()
    }

    /// deg [nD].
    fn deg_floor(&self, n: u64) -> i128 {
        core::deg_floor(&self.inner, n)
    }

    fn is_rational(&self) -> PyResult<bool> {
        Ok(core::is_rational_singularity(&self.inner)
            .map_err(err)?
            .is_rational())
    }

    /// (central weight, [branch expansions]).
    fn dual_graph(&self) -> PyResult<(i64, Vec<Vec<i64>>)> {
        let g = core::dual_graph(&self.inner).map_err(err)?;
        Ok((
            g.central_weight,
            g.branches.iter().map(|b| b.entries().to_vec()).collect(),
        ))
    }

    /// (n0, [branch coefficients]).
    fn fundamental_cycle(&self) -> PyResult<(u64, Vec<Vec<u64>>)> {
        let z = core::fundamental_cycle(&self.inner).map_err(err)?;
        Ok((z.n0, z.branch_coeffs))
    }

    fn multiplicity(&self) -> PyResult<u64> {
        Ok(core::multiplicity(&self.inner).map_err(err)?.value)
    }

    fn is_f_rational(&self, p: u64) -> PyResult<bool> {
        Ok(core::is_f_rational(&self.inner, p)
            .map_err(err)?
            .is_f_rational())
    }

    /// The full verdict at p, including the smallest failing B_n record.
    fn f_rationality(&self, py: Python<'_>, p: u64) -> PyResult<Py<PyAny>> {
        to_py(py, &core::is_f_rational(&self.inner, p).map_err(err)?)
    }

    fn failing_primes(&self) -> PyResult<Vec<u64>> {
        Ok(core::failing_primes(&self.inner)
            .map_err(err)?
            .into_iter()
            .collect())
    }

    /// Ids of the e = 3 / e = 4 table families this divisor instantiates.
    fn match_families(&self, multiplicity: u64) -> PyResult<Vec<String>> {
        let table = core::Table::for_multiplicity(multiplicity).map_err(err)?;
        Ok(core::match_families(&self.inner, table)
            .into_iter()
            .map(|m| m.family)
            .collect())
    }

    #[pyo3(signature = (format = "ascii"))]
    fn render(&self, format: &str) -> PyResult<String> {
        let format = match format {
            "ascii" => GraphFormat::Ascii,
            "dot" => GraphFormat::Dot,
            other => return Err(PyValueError::new_err(format!("unknown format {other:?}"))),
        };
        let g = core::dual_graph(&self.inner).map_err(err)?;
        let z = core::fundamental_cycle(&self.inner).ok();
        Ok(render_graph(&g, z.as_ref(), format))
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Divisor({:?})", self.inner.to_expression())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

/// Hirzebruch–Jung expansion of a rational > 1 given as "p/q".
#[pyfunction]
fn hj_expand(value: &str) -> PyResult<Vec<i64>> {
    let x = parse_rational(value).map_err(err)?;
    Ok(core::hj_expand(&x).map_err(err)?.entries().to_vec())
}

/// Value of [[b1, ..., bl]] as "p/q".
#[pyfunction]
fn hj_eval(entries: Vec<i64>) -> PyResult<String> {
    let seq = core::HjSequence::new(entries).map_err(err)?;
    Ok(format_rational(&core::hj_eval(&seq).map_err(err)?))
}

/// Same report as `pdsing analyze --json`, as a dict.
#[pyfunction]
#[pyo3(signature = (text, primes = Vec::new(), verify = false))]
fn analyze(py: Python<'_>, text: &str, primes: Vec<u64>, verify: bool) -> PyResult<Py<PyAny>> {
    let q = cli::parse_divisor(text).map_err(err)?;
    let report = cli::analyze(text, &q, &AnalyzeOptions { primes, verify }).map_err(err)?;
    to_py(py, &report)
}

#[pyfunction]
#[pyo3(signature = (multiplicity, max_s = 4, max_points = 5, max_denominator = 9, max_param = 8, max_instance_denominator = 60))]
fn enumerate_and_verify(
    py: Python<'_>,
    multiplicity: u64,
    max_s: i64,
    max_points: usize,
    max_denominator: i64,
    max_param: u64,
    max_instance_denominator: i64,
) -> PyResult<Py<PyAny>> {
    let bounds = EnumerationBounds {
        max_s,
        max_points,
        max_denominator,
        max_param,
        max_instance_denominator,
    };
    let report = py
        .detach(|| enumerate(&bounds, multiplicity))
        .map_err(err)?;
    to_py(py, &report)
}

#[pyfunction]
#[pyo3(signature = (multiplicity, primes, max_param = 8))]
fn threshold_report(
    py: Python<'_>,
    multiplicity: u64,
    primes: Vec<u64>,
    max_param: u64,
) -> PyResult<Py<PyAny>> {
    let report = py
        .detach(|| threshold(multiplicity, &primes, max_param))
        .map_err(err)?;
    to_py(py, &report)
}

#[pymodule]
fn pdsing(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDivisor>()?;
    m.add_function(wrap_pyfunction!(hj_expand, m)?)?;
    m.add_function(wrap_pyfunction!(hj_eval, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_and_verify, m)?)?;
    m.add_function(wrap_pyfunction!(threshold_report, m)?)?;
    m.add("SCHEMA_VERSION", core::classify::SCHEMA_VERSION)?;
    Ok(())
}
