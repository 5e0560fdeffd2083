//! Service-quality measures derived from a clustering, swept over a
//! normalized log-frequency axis.
//!
//! For a series with N events spanning `span = t_N - t_1`, the normalized
//! log-frequency `f = -log10(delta_t * N / span)` rescales the threshold so
//! that `f = 0` corresponds to `delta_t = span / N`, the scale at which N
//! events would be equally spaced. Larger `f` means a tighter threshold.
//!
//! Three measures characterize a clustering:
//! - coverage: fraction of the span covered by cluster intervals,
//! - cluster number: `2 * (K - [K == 1]) / N`, a normalized count of how
//!   fragmented the coverage is (a single cluster counts as zero),
//! - isolation: fraction of events that are isolated.

use rayon::prelude::*;
use thiserror::Error;

use crate::cluster::{cluster_events, ClusteringResult};
use crate::series::EventSeries;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeasureError {
    /// The series span is zero or undefined (fewer than two events).
    #[error("series span is zero or undefined")]
    DegenerateSpan,
    /// Log-frequency is only defined for a positive threshold.
    #[error("delta_t must be positive to map to a log-frequency")]
    NonPositiveDeltaT,
    #[error("bad sweep grid: {0}")]
    BadGrid(String),
    #[error("bad histogram bins: {0}")]
    BadBins(String),
}

/// All three measures evaluated at one sweep position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurePoint {
    pub f: f64,
    pub delta_t: f64,
    pub coverage: f64,
    pub cluster_number: f64,
    pub isolation: f64,
}

/// Measures evaluated on a linear grid in `f`, ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub points: Vec<MeasurePoint>,
    pub f_min: f64,
    pub f_max: f64,
    pub steps: usize,
    /// Length and span of the source series, for provenance.
    pub series_len: usize,
    pub series_span: f64,
}

/// Histogram of the consecutive gaps, half-open bins `[lo, hi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GapHistogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl GapHistogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Fraction of the series span covered by cluster intervals, in [0, 1].
pub fn coverage(result: &ClusteringResult, series: &EventSeries) -> Result<f64, MeasureError> {
    let span = series.span().filter(|&s| s > 0.0).ok_or(MeasureError::DegenerateSpan)?;
    // Folded from positive zero: an empty `sum()` would yield -0.0, which
    // survives the clamp and prints as "-0".
    let covered = result.clusters.iter().map(|c| c.length()).fold(0.0, |a, b| a + b);
    // Guard against accumulated rounding pushing the ratio past 1.
    Ok((covered / span).clamp(0.0, 1.0))
}

/// Normalized cluster count `2 * (K - [K == 1]) / N`, in [0, 1]. Zero for an
/// empty series.
pub fn cluster_number_measure(result: &ClusteringResult, series: &EventSeries) -> f64 {
    let n = series.len();
    if n == 0 {
        return 0.0;
    }
    let k = result.cluster_count();
    let single = usize::from(k == 1);
    2.0 * (k - single) as f64 / n as f64
}

/// Fraction of events that are isolated, in [0, 1]. Zero for an empty
/// series.
pub fn isolation_measure(result: &ClusteringResult, series: &EventSeries) -> f64 {
    let n = series.len();
    if n == 0 {
        return 0.0;
    }
    result.isolated_count() as f64 / n as f64
}

/// Threshold corresponding to log-frequency `f`: `(span / N) * 10^(-f)`.
pub fn f_to_delta_t(f: f64, series: &EventSeries) -> Result<f64, MeasureError> {
    let span = series.span().filter(|&s| s > 0.0).ok_or(MeasureError::DegenerateSpan)?;
    Ok(span / series.len() as f64 * 10f64.powf(-f))
}

/// Log-frequency corresponding to a positive threshold:
/// `-log10(delta_t * N / span)`. Inverse of [`f_to_delta_t`].
pub fn delta_t_to_f(delta_t: f64, series: &EventSeries) -> Result<f64, MeasureError> {
    let span = series.span().filter(|&s| s > 0.0).ok_or(MeasureError::DegenerateSpan)?;
    if delta_t.is_nan() || delta_t <= 0.0 {
        return Err(MeasureError::NonPositiveDeltaT);
    }
    Ok(-(delta_t * series.len() as f64 / span).log10())
}

/// Evaluates all three measures on a linear grid of `steps` points from
/// `f_min` to `f_max` inclusive, clustering the series once per grid point.
/// Grid points are independent and evaluated in parallel; the result is
/// assembled in grid order, so the output is deterministic.
pub fn sweep(
    series: &EventSeries,
    f_min: f64,
    f_max: f64,
    steps: usize,
) -> Result<SweepResult, MeasureError> {
    if steps < 2 {
        return Err(MeasureError::BadGrid(format!("need at least 2 steps, got {steps}")));
    }
    if !f_min.is_finite() || !f_max.is_finite() || f_min >= f_max {
        return Err(MeasureError::BadGrid(format!(
            "need finite f_min < f_max, got [{f_min}, {f_max}]"
        )));
    }
    let span = series.span().filter(|&s| s > 0.0).ok_or(MeasureError::DegenerateSpan)?;

    let points = (0..steps)
        .into_par_iter()
        .map(|j| {
            let u = j as f64 / (steps - 1) as f64;
            let f = f_min * (1.0 - u) + f_max * u;
            measure_at(series, f)
        })
        .collect::<Result<Vec<_>, _>>()?;

    Ok(SweepResult {
        points,
        f_min,
        f_max,
        steps,
        series_len: series.len(),
        series_span: span,
    })
}

/// One sweep evaluation: threshold from `f`, one clustering, all three
/// measures.
pub fn measure_at(series: &EventSeries, f: f64) -> Result<MeasurePoint, MeasureError> {
    let delta_t = f_to_delta_t(f, series)?;
    let result = cluster_events(series, delta_t);
    Ok(MeasurePoint {
        f,
        delta_t,
        coverage: coverage(&result, series)?,
        cluster_number: cluster_number_measure(&result, series),
        isolation: isolation_measure(&result, series),
    })
}

/// Counts the consecutive gaps into half-open bins `[edges[i], edges[i+1])`.
/// The edges must be finite, strictly increasing and cover every gap.
pub fn gap_histogram(series: &EventSeries, edges: &[f64]) -> Result<GapHistogram, MeasureError> {
    if edges.len() < 2 {
        return Err(MeasureError::BadBins(format!(
            "need at least 2 edges, got {}",
            edges.len()
        )));
    }
    if edges.iter().any(|e| !e.is_finite()) {
        return Err(MeasureError::BadBins("edges must be finite".into()));
    }
    if edges.windows(2).any(|w| w[0] >= w[1]) {
        return Err(MeasureError::BadBins("edges must be strictly increasing".into()));
    }

    let mut counts = vec![0u64; edges.len() - 1];
    if series.len() >= 2 {
        for gap in series.gaps().expect("length checked").iter() {
            let idx = edges.partition_point(|&e| e <= *gap);
            if idx == 0 || idx == edges.len() {
                return Err(MeasureError::BadBins(format!(
                    "gap {gap} outside bin coverage [{}, {})",
                    edges[0],
                    edges[edges.len() - 1]
                )));
            }
            counts[idx - 1] += 1;
        }
    }
    Ok(GapHistogram { edges: edges.to_vec(), counts })
}
