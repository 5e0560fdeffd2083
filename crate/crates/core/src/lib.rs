//! Linear-time clustering of ordered event timestamps.
//!
//! Given a series of non-decreasing timestamps and an expected inter-event
//! interval, one left-to-right pass splits the series into cluster intervals
//! (runs of events never more than the threshold apart) and isolated events.
//! On top of that clustering sit three service-quality measures, swept over
//! a normalized log-frequency axis, which characterize how completely and
//! how contiguously an event source delivered data.
//!
//! The crate also ships the reference implementations used to validate the
//! pass (a naive per-point classifier and a density-based baseline), seeded
//! generators for synthetic series, a benchmark harness comparing the linear
//! pass against the baseline, and parsers for common timestamp file formats.

pub mod bench;
pub mod cluster;
pub mod ingest;
pub mod measures;
pub mod oracle;
pub mod series;
pub mod synth;

pub use bench::{measure_speedup, write_bench_csv, BenchRecord};
pub use cluster::{
    classify, cluster_events, gap_intervals, ClusterInterval, ClusteringResult, GapInterval,
    PointLabel,
};
pub use ingest::{
    parse_events, write_result, write_series_plain, ColumnSelector, IngestError, InputFormat,
    ParsedEvents, ResultDocument, SortPolicy, SortWarning,
};
pub use measures::{
    cluster_number_measure, coverage, delta_t_to_f, f_to_delta_t, gap_histogram, isolation_measure,
    measure_at, sweep, GapHistogram, MeasureError, MeasurePoint, SweepResult,
};
pub use oracle::{
    assert_equiv, dbscan_reference, first_divergence, naive_cluster, Divergence, EquivReport,
    OracleError,
};
pub use series::{EventSeries, GapSequence, SeriesError, Timestamp};
pub use synth::{gen_burst_composite, gen_periodic, gen_uniform, GeneratorSpec, SynthError};

/// The twelve-event series used throughout the unit tests.
#[cfg(test)]
pub(crate) fn test_series() -> Vec<f64> {
    vec![
        -20.0, -18.0, 1.0, 2.0, 2.9, 10.0, 11.0, 100.0, 200.0, 202.0, 202.0, 203.0,
    ]
}
