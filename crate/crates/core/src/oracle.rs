//! Independent reference implementations used to cross-check the linear
//! pass, plus an equivalence runner.
//!
//! [`naive_cluster`] classifies every event from its two neighbor distances
//! computed independently, without the shared gap-bit bookkeeping of the
//! linear pass. [`dbscan_reference`] runs textbook density-based clustering
//! with a minimum neighborhood of two points and a generic range query, the
//! kind of baseline a spatial-index implementation would use. Neither calls
//! into [`crate::cluster`]'s scan internals, so agreement between the three
//! routes is meaningful.

use std::collections::VecDeque;

use thiserror::Error;

use crate::cluster::{cluster_events, ClusterInterval, ClusteringResult, PointLabel};
use crate::series::EventSeries;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("eps must be positive")]
    NonPositiveEps,
}

/// Two clustering routes disagreed; `detail` pinpoints the first divergence.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{route} diverges from the linear pass: {detail}")]
pub struct Divergence {
    pub route: &'static str,
    pub detail: String,
}

/// Which reference routes an equivalence run compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EquivReport {
    pub naive_checked: bool,
    pub dbscan_checked: bool,
}

/// Classifies every event from its left and right neighbor distances,
/// then assembles clusters from the label sequence. Four comparisons per
/// event, no shared state between events.
pub fn naive_cluster(series: &EventSeries, delta_t: f64) -> ClusteringResult {
    let t = series.events();
    let n = t.len();
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let left_bonded = i > 0 && t[i] - t[i - 1] <= delta_t;
        let right_bonded = i + 1 < n && t[i + 1] - t[i] <= delta_t;
        labels.push(match (left_bonded, right_bonded) {
            (false, false) => PointLabel::Isolated,
            (false, true) => PointLabel::OpeningBound,
            (true, false) => PointLabel::ClosingBound,
            (true, true) => PointLabel::ClusteredInterior,
        });
    }

    let mut clusters = Vec::new();
    let mut isolated = Vec::new();
    let mut open_lo = None;
    for (i, &label) in labels.iter().enumerate() {
        match label {
            PointLabel::OpeningBound => open_lo = Some(t[i]),
            PointLabel::ClosingBound => clusters.push(ClusterInterval {
                lo: open_lo.take().expect("opening precedes closing"),
                hi: t[i],
            }),
            PointLabel::Isolated => isolated.push(t[i]),
            PointLabel::ClusteredInterior => {}
        }
    }

    ClusteringResult { clusters, isolated, labels, delta_t }
}

const DBSCAN_MIN_PTS: usize = 2;

/// Density-based reference clustering on the real line: neighborhoods are
/// `|t_j - t_i| <= eps`, a point with at least `2` points in its
/// neighborhood (itself included) seeds or extends a cluster, and points
/// with no neighbor within `eps` are noise. Noise maps to isolated events,
/// the extremes of each cluster to its bounds.
///
/// The range query is a generic binary search over the sorted data, so each
/// lookup costs `O(log N)`; the pre-sorted structure is not otherwise
/// exploited. This is the self-contained stand-in for an off-the-shelf
/// baseline in the speedup benchmark.
pub fn dbscan_reference(series: &EventSeries, eps: f64) -> Result<ClusteringResult, OracleError> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(OracleError::NonPositiveEps);
    }
    let t = series.events();
    let n = t.len();

    const UNVISITED: i64 = -2;
    const NOISE: i64 = -1;
    let mut assignment = vec![UNVISITED; n];
    let mut cluster_id: i64 = 0;
    let mut queue = VecDeque::new();

    let range_query = |i: usize| -> (usize, usize) {
        // The l1 distance |x - pivot| is evaluated with the same floating
        // subtraction the gap rule uses; both predicates flip exactly once
        // over the sorted data, so each bound is one binary search.
        let pivot = t[i];
        let lo = t.partition_point(|&x| pivot - x > eps);
        let hi = t.partition_point(|&x| x - pivot <= eps);
        (lo, hi)
    };

    for p in 0..n {
        if assignment[p] != UNVISITED {
            continue;
        }
        let (lo, hi) = range_query(p);
        if hi - lo < DBSCAN_MIN_PTS {
            assignment[p] = NOISE;
            continue;
        }
        assignment[p] = cluster_id;
        queue.extend(lo..hi);
        while let Some(q) = queue.pop_front() {
            if assignment[q] == NOISE {
                // Border point: reachable from a core point.
                assignment[q] = cluster_id;
            }
            if assignment[q] != UNVISITED {
                continue;
            }
            assignment[q] = cluster_id;
            let (qlo, qhi) = range_query(q);
            if qhi - qlo >= DBSCAN_MIN_PTS {
                queue.extend(qlo..qhi);
            }
        }
        cluster_id += 1;
    }

    // Map assignments onto the shared output contract. Clusters of sorted
    // 1-D data are contiguous index runs.
    let mut clusters = Vec::new();
    let mut isolated = Vec::new();
    let mut labels = vec![PointLabel::Isolated; n];
    let mut i = 0;
    while i < n {
        let id = assignment[i];
        if id == NOISE {
            isolated.push(t[i]);
            i += 1;
            continue;
        }
        let mut j = i;
        while j + 1 < n && assignment[j + 1] == id {
            j += 1;
        }
        debug_assert!(j > i, "a density cluster holds at least two points");
        clusters.push(ClusterInterval { lo: t[i], hi: t[j] });
        labels[i] = PointLabel::OpeningBound;
        labels[j] = PointLabel::ClosingBound;
        for label in labels.iter_mut().take(j).skip(i + 1) {
            *label = PointLabel::ClusteredInterior;
        }
        i = j + 1;
    }

    Ok(ClusteringResult { clusters, isolated, labels, delta_t: eps })
}

/// Runs the linear pass, the naive per-point classifier and, for a positive
/// threshold, the density-based reference, and reports the first divergence
/// between their outputs.
pub fn assert_equiv(series: &EventSeries, delta_t: f64) -> Result<EquivReport, Divergence> {
    let linear = cluster_events(series, delta_t);
    let mut report = EquivReport::default();

    let naive = naive_cluster(series, delta_t);
    if let Some(detail) = first_divergence(&linear, &naive) {
        return Err(Divergence { route: "naive classifier", detail });
    }
    report.naive_checked = true;

    if delta_t > 0.0 {
        let dbscan = dbscan_reference(series, delta_t).expect("positive eps");
        if let Some(detail) = first_divergence(&linear, &dbscan) {
            return Err(Divergence { route: "density-based reference", detail });
        }
        report.dbscan_checked = true;
    }

    Ok(report)
}

/// First field and index at which two results differ, if any. Comparison is
/// exact.
pub fn first_divergence(a: &ClusteringResult, b: &ClusteringResult) -> Option<String> {
    if a.clusters.len() != b.clusters.len() {
        return Some(format!(
            "cluster count {} vs {}",
            a.clusters.len(),
            b.clusters.len()
        ));
    }
    for (k, (ca, cb)) in a.clusters.iter().zip(&b.clusters).enumerate() {
        if ca != cb {
            return Some(format!("cluster {k}: {ca:?} vs {cb:?}"));
        }
    }
    if a.isolated.len() != b.isolated.len() {
        return Some(format!(
            "isolated count {} vs {}",
            a.isolated.len(),
            b.isolated.len()
        ));
    }
    for (k, (xa, xb)) in a.isolated.iter().zip(&b.isolated).enumerate() {
        if xa.to_bits() != xb.to_bits() {
            return Some(format!("isolated {k}: {xa} vs {xb}"));
        }
    }
    for (k, (la, lb)) in a.labels.iter().zip(&b.labels).enumerate() {
        if la != lb {
            return Some(format!("label {k}: {la:?} vs {lb:?}"));
        }
    }
    None
}
