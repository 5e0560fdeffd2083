//! Single-pass clustering of an ordered series against an expected
//! inter-event interval.
//!
//! Consecutive events whose gap does not exceed the threshold `delta_t`
//! belong to the same cluster; a gap strictly greater than `delta_t` breaks
//! the chain. Conceptually each gap maps to a bit (1 = exceeded), the series
//! is padded with virtual exceeded gaps before the first and after the last
//! event, and every event is classified from the bit transition across it:
//! 1->0 opens a cluster, 0->1 closes one, 1->1 leaves the event isolated and
//! 0->0 puts it in a cluster interior. The pass keeps only the current and
//! next bit, so auxiliary working storage is constant.

use crate::series::{EventSeries, Timestamp};

/// Classification of a single event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointLabel {
    /// First event of a cluster.
    OpeningBound,
    /// Last event of a cluster.
    ClosingBound,
    /// Event strictly inside a cluster.
    ClusteredInterior,
    /// Event farther than the threshold from both neighbors.
    Isolated,
}

impl PointLabel {
    /// Stable lower-case name for serialized label lists.
    pub fn as_str(self) -> &'static str {
        match self {
            PointLabel::OpeningBound => "opening",
            PointLabel::ClosingBound => "closing",
            PointLabel::ClusteredInterior => "interior",
            PointLabel::Isolated => "isolated",
        }
    }
}

/// Closed interval `[lo, hi]` spanned by one cluster. Both endpoints are
/// events of the source series; `lo == hi` is legal and arises from
/// duplicate timestamps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterInterval {
    pub lo: Timestamp,
    pub hi: Timestamp,
}

impl ClusterInterval {
    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, t: Timestamp) -> bool {
        self.lo <= t && t <= self.hi
    }
}

/// Open interval between clusters, interpreted as a period with no
/// sufficiently frequent data. The outer endpoints of a leading or trailing
/// interval coincide with the series extremes, which are themselves isolated
/// events in that case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapInterval {
    pub lo: Timestamp,
    pub hi: Timestamp,
}

/// Output of [`cluster_events`]: cluster intervals, isolated events and the
/// per-event labels, all in series order.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusteringResult {
    pub clusters: Vec<ClusterInterval>,
    pub isolated: Vec<Timestamp>,
    pub labels: Vec<PointLabel>,
    /// The threshold the result was computed with.
    pub delta_t: f64,
}

impl ClusteringResult {
    pub fn cluster_count(&self) -> usize {
        self.clusters.len()
    }

    pub fn isolated_count(&self) -> usize {
        self.isolated.len()
    }
}

/// Clusters `series` against the expected inter-event interval `delta_t`.
///
/// A gap exactly equal to `delta_t` keeps its two events in one cluster;
/// only a strictly larger gap separates them. `delta_t` may be negative, in
/// which case every event is isolated. One left-to-right pass, linear in the
/// series length.
pub fn cluster_events(series: &EventSeries, delta_t: f64) -> ClusteringResult {
    let t = series.events();
    let n = t.len();
    let mut clusters = Vec::new();
    let mut isolated = Vec::new();
    let mut labels = Vec::with_capacity(n);

    // Virtual exceeded gap before the first event.
    let mut exceeded_before = true;
    let mut open_lo: Option<Timestamp> = None;

    for i in 0..n {
        // Virtual exceeded gap after the last event.
        let exceeded_after = match t.get(i + 1) {
            Some(&next) => next - t[i] > delta_t,
            None => true,
        };
        let label = match (exceeded_before, exceeded_after) {
            (true, false) => {
                open_lo = Some(t[i]);
                PointLabel::OpeningBound
            }
            (false, true) => {
                let lo = open_lo
                    .take()
                    .expect("closing bound always follows an opening bound");
                clusters.push(ClusterInterval { lo, hi: t[i] });
                PointLabel::ClosingBound
            }
            (true, true) => {
                isolated.push(t[i]);
                PointLabel::Isolated
            }
            (false, false) => PointLabel::ClusteredInterior,
        };
        labels.push(label);
        exceeded_before = exceeded_after;
    }
    debug_assert!(open_lo.is_none());

    ClusteringResult {
        clusters,
        isolated,
        labels,
        delta_t,
    }
}

/// Per-event labels only; same classification rule as [`cluster_events`]
/// without materializing the interval and isolated lists.
pub fn classify(series: &EventSeries, delta_t: f64) -> Vec<PointLabel> {
    let t = series.events();
    let n = t.len();
    let mut labels = Vec::with_capacity(n);
    let mut exceeded_before = true;
    for i in 0..n {
        let exceeded_after = match t.get(i + 1) {
            Some(&next) => next - t[i] > delta_t,
            None => true,
        };
        labels.push(match (exceeded_before, exceeded_after) {
            (true, false) => PointLabel::OpeningBound,
            (false, true) => PointLabel::ClosingBound,
            (true, true) => PointLabel::Isolated,
            (false, false) => PointLabel::ClusteredInterior,
        });
        exceeded_before = exceeded_after;
    }
    labels
}

/// The open intervals between consecutive clusters, plus a leading interval
/// from the first event when isolated events precede the first cluster and a
/// trailing one to the last event when they follow the last cluster. With no
/// clusters at all, the whole (non-degenerate) span is one interval. Every
/// isolated event lies in exactly one returned interval.
pub fn gap_intervals(result: &ClusteringResult, series: &EventSeries) -> Vec<GapInterval> {
    let (Some(first), Some(last)) = (series.first(), series.last()) else {
        return Vec::new();
    };
    let mut out = Vec::new();

    let Some(head) = result.clusters.first() else {
        // No clusters: all events are isolated and the whole span is a gap.
        if !result.isolated.is_empty() && first < last {
            out.push(GapInterval { lo: first, hi: last });
        }
        return out;
    };

    if first < head.lo {
        out.push(GapInterval { lo: first, hi: head.lo });
    }
    for pair in result.clusters.windows(2) {
        out.push(GapInterval { lo: pair[0].hi, hi: pair[1].lo });
    }
    let tail = result.clusters.last().expect("non-empty");
    if tail.hi < last {
        out.push(GapInterval { lo: tail.hi, hi: last });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_series;

    fn series(raw: Vec<f64>) -> EventSeries {
        EventSeries::new(raw).unwrap()
    }

    fn intervals(pairs: &[(f64, f64)]) -> Vec<ClusterInterval> {
        pairs
            .iter()
            .map(|&(lo, hi)| ClusterInterval { lo, hi })
            .collect()
    }

    #[test]
    fn threshold_below_every_gap_isolates_everything() {
        let t = series(test_series());
        let r = cluster_events(&t, -1.0);
        assert!(r.clusters.is_empty());
        assert_eq!(r.isolated, test_series());
        assert!(r.labels.iter().all(|&l| l == PointLabel::Isolated));
    }

    #[test]
    fn zero_threshold_bonds_duplicates_only() {
        let t = series(test_series());
        let r = cluster_events(&t, 0.0);
        assert_eq!(r.clusters, intervals(&[(202.0, 202.0)]));
        assert_eq!(r.isolated.len(), 10);
        assert_eq!(
            &r.labels[9..11],
            &[PointLabel::OpeningBound, PointLabel::ClosingBound]
        );
    }

    #[test]
    fn unit_threshold() {
        let t = series(test_series());
        let r = cluster_events(&t, 1.0);
        assert_eq!(
            r.clusters,
            intervals(&[(1.0, 2.9), (10.0, 11.0), (202.0, 203.0)])
        );
        assert_eq!(r.isolated, vec![-20.0, -18.0, 100.0, 200.0]);
    }

    #[test]
    fn ten_threshold_labels() {
        let t = series(test_series());
        let r = cluster_events(&t, 10.0);
        assert_eq!(
            r.clusters,
            intervals(&[(-20.0, -18.0), (1.0, 11.0), (200.0, 203.0)])
        );
        assert_eq!(r.isolated, vec![100.0]);

        use PointLabel::*;
        let expected = vec![
            OpeningBound,
            ClosingBound,
            OpeningBound,
            ClusteredInterior,
            ClusteredInterior,
            ClusteredInterior,
            ClosingBound,
            Isolated,
            OpeningBound,
            ClusteredInterior,
            ClusteredInterior,
            ClosingBound,
        ];
        assert_eq!(r.labels, expected);
        assert_eq!(classify(&t, 10.0), expected);
    }

    #[test]
    fn threshold_above_every_gap_gives_one_cluster() {
        let t = series(test_series());
        let r = cluster_events(&t, 100.0);
        assert_eq!(r.clusters, intervals(&[(-20.0, 203.0)]));
        assert!(r.isolated.is_empty());
    }

    #[test]
    fn single_event_is_isolated_for_any_threshold() {
        let t = series(vec![7.0]);
        for delta_t in [-1.0, 0.0, 1.0, f64::MAX] {
            let r = cluster_events(&t, delta_t);
            assert!(r.clusters.is_empty());
            assert_eq!(r.isolated, vec![7.0]);
            assert_eq!(r.labels, vec![PointLabel::Isolated]);
        }
        assert_eq!(classify(&t, 1.0), vec![PointLabel::Isolated]);
    }

    #[test]
    fn empty_series_gives_empty_result() {
        let t = series(vec![]);
        let r = cluster_events(&t, 1.0);
        assert!(r.clusters.is_empty());
        assert!(r.isolated.is_empty());
        assert!(r.labels.is_empty());
        assert!(gap_intervals(&r, &t).is_empty());
    }

    #[test]
    fn gap_intervals_between_clusters() {
        let t = series(test_series());
        let r = cluster_events(&t, 10.0);
        let gaps = gap_intervals(&r, &t);
        assert_eq!(
            gaps,
            vec![
                GapInterval { lo: -18.0, hi: 1.0 },
                GapInterval { lo: 11.0, hi: 200.0 },
            ]
        );
        // The single isolated event falls inside the second interval.
        assert!(gaps[1].lo < 100.0 && 100.0 < gaps[1].hi);
    }

    #[test]
    fn gap_intervals_single_cluster_is_empty() {
        let t = series(test_series());
        let r = cluster_events(&t, 100.0);
        assert!(gap_intervals(&r, &t).is_empty());
    }

    #[test]
    fn gap_intervals_leading_interval_covers_isolated_prefix() {
        let t = series(test_series());
        let r = cluster_events(&t, 1.0);
        let gaps = gap_intervals(&r, &t);
        assert_eq!(
            gaps,
            vec![
                GapInterval { lo: -20.0, hi: 1.0 },
                GapInterval { lo: 2.9, hi: 10.0 },
                GapInterval { lo: 11.0, hi: 202.0 },
            ]
        );
    }

    #[test]
    fn gap_intervals_no_clusters_covers_whole_span() {
        let t = series(test_series());
        let r = cluster_events(&t, -1.0);
        assert_eq!(
            gap_intervals(&r, &t),
            vec![GapInterval { lo: -20.0, hi: 203.0 }]
        );

        // A lone isolated event has no span to report.
        let single = series(vec![7.0]);
        let r = cluster_events(&single, -1.0);
        assert!(gap_intervals(&r, &single).is_empty());
    }
}
