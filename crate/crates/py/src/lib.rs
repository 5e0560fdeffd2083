//! Python bindings: the validated series type, the clustering pass and its
//! reference implementations, the quality measures and the seeded
//! generators.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use evclust_core as core;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A validated, non-decreasing sequence of event timestamps.
#[pyclass(frozen, name = "EventSeries", module = "evclust")]
struct PyEventSeries {
    inner: core::EventSeries,
}

#[pymethods]
impl PyEventSeries {
    #[new]
    fn new(events: Vec<f64>) -> PyResult<Self> {
        let inner = core::EventSeries::new(events).map_err(value_error)?;
        Ok(PyEventSeries { inner })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        match self.inner.span() {
            Some(span) => format!("EventSeries(n={}, span={})", self.inner.len(), span),
            None => format!("EventSeries(n={})", self.inner.len()),
        }
    }

    /// The timestamps as a list.
    fn events(&self) -> Vec<f64> {
        self.inner.events().to_vec()
    }

    /// Total span `t_N - t_1`, or None for fewer than two events.
    fn span(&self) -> Option<f64> {
        self.inner.span()
    }

    /// The N-1 consecutive gaps.
    fn gaps(&self) -> PyResult<Vec<f64>> {
        Ok(self.inner.gaps().map_err(value_error)?.into_vec())
    }

    /// Mean consecutive gap, span / (N-1).
    fn mean_gap(&self) -> PyResult<f64> {
        self.inner.mean_gap().map_err(value_error)
    }
}

/// Clusters, isolated events and per-event labels for one threshold.
#[pyclass(frozen, name = "ClusteringResult", module = "evclust")]
struct PyClusteringResult {
    inner: core::ClusteringResult,
}

#[pymethods]
impl PyClusteringResult {
    #[getter]
    fn delta_t(&self) -> f64 {
        self.inner.delta_t
    }

    /// Cluster intervals as (lo, hi) pairs, in series order.
    #[getter]
    fn clusters(&self) -> Vec<(f64, f64)> {
        self.inner.clusters.iter().map(|c| (c.lo, c.hi)).collect()
    }

    #[getter]
    fn isolated(&self) -> Vec<f64> {
        self.inner.isolated.clone()
    }

    /// One of "opening", "closing", "interior", "isolated" per event.
    #[getter]
    fn labels(&self) -> Vec<&'static str> {
        self.inner.labels.iter().map(|l| l.as_str()).collect()
    }

    #[getter]
    fn cluster_count(&self) -> usize {
        self.inner.cluster_count()
    }

    #[getter]
    fn isolated_count(&self) -> usize {
        self.inner.isolated_count()
    }

    fn __repr__(&self) -> String {
        format!(
            "ClusteringResult(delta_t={}, clusters={}, isolated={})",
            self.inner.delta_t,
            self.inner.cluster_count(),
            self.inner.isolated_count()
        )
    }
}

/// All measures evaluated at one sweep position.
#[pyclass(frozen, name = "MeasurePoint", module = "evclust")]
struct PyMeasurePoint {
    #[pyo3(get)]
    f: f64,
    #[pyo3(get)]
    delta_t: f64,
    #[pyo3(get)]
    coverage: f64,
    #[pyo3(get)]
    cluster_number: f64,
    #[pyo3(get)]
    isolation: f64,
}

impl From<core::MeasurePoint> for PyMeasurePoint {
    fn from(p: core::MeasurePoint) -> Self {
        PyMeasurePoint {
            f: p.f,
            delta_t: p.delta_t,
            coverage: p.coverage,
            cluster_number: p.cluster_number,
            isolation: p.isolation,
        }
    }
}

/// Clusters the series: gaps strictly larger than `delta_t` split clusters.
#[pyfunction]
fn cluster_events(series: &PyEventSeries, delta_t: f64) -> PyClusteringResult {
    PyClusteringResult {
        inner: core::cluster_events(&series.inner, delta_t),
    }
}

/// Per-event labels only.
#[pyfunction]
fn classify(series: &PyEventSeries, delta_t: f64) -> Vec<&'static str> {
    core::classify(&series.inner, delta_t)
        .iter()
        .map(|l| l.as_str())
        .collect()
}

/// Open intervals between clusters as (lo, hi) pairs; every isolated event
/// falls inside one of them.
#[pyfunction]
fn gap_intervals(result: &PyClusteringResult, series: &PyEventSeries) -> Vec<(f64, f64)> {
    core::gap_intervals(&result.inner, &series.inner)
        .iter()
        .map(|g| (g.lo, g.hi))
        .collect()
}

/// Reference classifier using both neighbor distances per event.
#[pyfunction]
fn naive_cluster(series: &PyEventSeries, delta_t: f64) -> PyClusteringResult {
    PyClusteringResult {
        inner: core::naive_cluster(&series.inner, delta_t),
    }
}

/// Density-based reference clustering with neighborhood radius `eps`.
#[pyfunction]
fn dbscan_reference(series: &PyEventSeries, eps: f64) -> PyResult<PyClusteringResult> {
    Ok(PyClusteringResult {
        inner: core::dbscan_reference(&series.inner, eps).map_err(value_error)?,
    })
}

/// Fraction of the span covered by clusters.
#[pyfunction]
fn coverage(result: &PyClusteringResult, series: &PyEventSeries) -> PyResult<f64> {
    core::coverage(&result.inner, &series.inner).map_err(value_error)
}

/// Normalized cluster count, `2 * (K - [K == 1]) / N`.
#[pyfunction]
fn cluster_number_measure(result: &PyClusteringResult, series: &PyEventSeries) -> f64 {
    core::cluster_number_measure(&result.inner, &series.inner)
}

/// Fraction of events that are isolated.
#[pyfunction]
fn isolation_measure(result: &PyClusteringResult, series: &PyEventSeries) -> f64 {
    core::isolation_measure(&result.inner, &series.inner)
}

/// Threshold for a log-frequency: `(span / N) * 10**(-f)`.
#[pyfunction]
fn f_to_delta_t(f: f64, series: &PyEventSeries) -> PyResult<f64> {
    core::f_to_delta_t(f, &series.inner).map_err(value_error)
}

/// Log-frequency for a positive threshold: `-log10(delta_t * N / span)`.
#[pyfunction]
fn delta_t_to_f(delta_t: f64, series: &PyEventSeries) -> PyResult<f64> {
    core::delta_t_to_f(delta_t, &series.inner).map_err(value_error)
}

/// Evaluates all measures on a linear grid in f, endpoints included.
#[pyfunction]
fn sweep(
    series: &PyEventSeries,
    f_min: f64,
    f_max: f64,
    steps: usize,
) -> PyResult<Vec<PyMeasurePoint>> {
    let swept = core::sweep(&series.inner, f_min, f_max, steps).map_err(value_error)?;
    Ok(swept.points.into_iter().map(PyMeasurePoint::from).collect())
}

/// Counts consecutive gaps into half-open bins; returns one count per bin.
#[pyfunction]
fn gap_histogram(series: &PyEventSeries, edges: Vec<f64>) -> PyResult<Vec<u64>> {
    Ok(core::gap_histogram(&series.inner, &edges)
        .map_err(value_error)?
        .counts)
}

/// `n` equally spaced events `start + i * period`.
#[pyfunction]
#[pyo3(signature = (n, period, start = 0.0))]
fn gen_periodic(n: usize, period: f64, start: f64) -> PyResult<PyEventSeries> {
    if !period.is_finite() || !start.is_finite() || period <= 0.0 {
        return Err(value_error("period must be positive and finite, start finite"));
    }
    Ok(PyEventSeries { inner: core::gen_periodic(n, period, start) })
}

/// `n` uniform draws on [lo, hi), sorted; deterministic per seed.
#[pyfunction]
#[pyo3(signature = (n, lo, hi, seed = 0))]
fn gen_uniform(n: usize, lo: f64, hi: f64, seed: u64) -> PyResult<PyEventSeries> {
    Ok(PyEventSeries {
        inner: core::gen_uniform(n, lo, hi, seed).map_err(value_error)?,
    })
}

/// A random burst on [0, 1) followed by equidistant events on [1, 10].
#[pyfunction]
#[pyo3(signature = (seed = 0))]
fn gen_burst_composite(seed: u64) -> PyEventSeries {
    PyEventSeries { inner: core::gen_burst_composite(seed) }
}

#[pymodule]
fn evclust(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyEventSeries>()?;
    m.add_class::<PyClusteringResult>()?;
    m.add_class::<PyMeasurePoint>()?;
    m.add_function(wrap_pyfunction!(cluster_events, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(gap_intervals, m)?)?;
    m.add_function(wrap_pyfunction!(naive_cluster, m)?)?;
    m.add_function(wrap_pyfunction!(dbscan_reference, m)?)?;
    m.add_function(wrap_pyfunction!(coverage, m)?)?;
    m.add_function(wrap_pyfunction!(cluster_number_measure, m)?)?;
    m.add_function(wrap_pyfunction!(isolation_measure, m)?)?;
    m.add_function(wrap_pyfunction!(f_to_delta_t, m)?)?;
    m.add_function(wrap_pyfunction!(delta_t_to_f, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(gap_histogram, m)?)?;
    m.add_function(wrap_pyfunction!(gen_periodic, m)?)?;
    m.add_function(wrap_pyfunction!(gen_uniform, m)?)?;
    m.add_function(wrap_pyfunction!(gen_burst_composite, m)?)?;
    Ok(())
}
