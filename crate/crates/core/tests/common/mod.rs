//! Shared helpers for the integration suites: structural invariant checks
//! and a deterministic randomized-trial driver.
#![allow(dead_code)] // each test target uses a subset

use std::sync::{Mutex, MutexGuard, PoisonError};

use evclust_core::{gap_intervals, ClusteringResult, EventSeries, PointLabel};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

static SUITE: Mutex<()> = Mutex::new(());

/// Serializes the checks within one test binary so the timing measurements
/// never share the machine with the CPU-heavy randomized checks.
pub fn exclusive() -> MutexGuard<'static, ()> {
    SUITE.lock().unwrap_or_else(PoisonError::into_inner)
}

/// The twelve-event series used by the golden tests.
pub fn t_star() -> Vec<f64> {
    vec![
        -20.0, -18.0, 1.0, 2.0, 2.9, 10.0, 11.0, 100.0, 200.0, 202.0, 202.0, 203.0,
    ]
}

pub fn t_star_series() -> EventSeries {
    EventSeries::new(t_star()).unwrap()
}

/// Checks every structural invariant of a clustering result against its
/// source series: label/list consistency, bound pairing, partition counts,
/// K <= N/2, gap soundness on both sides of every event, cluster ordering
/// and separation, and coverage of isolated events by the gap intervals.
pub fn check_structure(series: &EventSeries, result: &ClusteringResult) {
    let t = series.events();
    let n = t.len();
    let delta_t = result.delta_t;
    assert_eq!(result.labels.len(), n, "one label per event");

    let mut clusters = result.clusters.iter();
    let mut isolated = result.isolated.iter();
    let mut open: Option<usize> = None;
    let mut openings = 0usize;
    let mut closings = 0usize;
    let mut interior = 0usize;
    let mut isolated_count = 0usize;

    for (i, &label) in result.labels.iter().enumerate() {
        match label {
            PointLabel::OpeningBound => {
                assert!(open.is_none(), "opening bound inside an open cluster at {i}");
                let c = clusters.next().expect("more opening labels than clusters");
                assert_eq!(c.lo.to_bits(), t[i].to_bits(), "cluster lo mismatch at {i}");
                open = Some(i);
                openings += 1;
            }
            PointLabel::ClosingBound => {
                let start = open.take().expect("closing bound without opening");
                assert!(start < i, "bounds of one cluster are distinct events");
                let k = openings - 1;
                assert_eq!(
                    result.clusters[k].hi.to_bits(),
                    t[i].to_bits(),
                    "cluster hi mismatch at {i}"
                );
                closings += 1;
            }
            PointLabel::ClusteredInterior => {
                assert!(open.is_some(), "interior label outside a cluster at {i}");
                interior += 1;
            }
            PointLabel::Isolated => {
                assert!(open.is_none(), "isolated label inside a cluster at {i}");
                let x = isolated.next().expect("more isolated labels than entries");
                assert_eq!(x.to_bits(), t[i].to_bits(), "isolated value mismatch at {i}");
                isolated_count += 1;
            }
        }
    }
    assert!(open.is_none(), "unclosed cluster at end of series");
    assert!(clusters.next().is_none(), "unreferenced clusters");
    assert!(isolated.next().is_none(), "unreferenced isolated entries");

    let k = result.clusters.len();
    assert_eq!(openings, k);
    assert_eq!(closings, k);
    assert_eq!(isolated_count + interior + 2 * k, n, "partition count");
    assert!(2 * k <= n, "K <= N/2");

    // Gap soundness: bonded within clusters, separated across everything
    // else.
    for i in 0..n {
        let left = (i > 0).then(|| t[i] - t[i - 1]);
        let right = (i + 1 < n).then(|| t[i + 1] - t[i]);
        let (left_bonded, right_bonded) = match result.labels[i] {
            PointLabel::Isolated => (false, false),
            PointLabel::OpeningBound => (false, true),
            PointLabel::ClosingBound => (true, false),
            PointLabel::ClusteredInterior => (true, true),
        };
        if let Some(g) = left {
            assert_eq!(g <= delta_t, left_bonded, "left gap at {i}");
        } else {
            assert!(!left_bonded, "no left neighbor at {i}");
        }
        if let Some(g) = right {
            assert_eq!(g <= delta_t, right_bonded, "right gap at {i}");
        } else {
            assert!(!right_bonded, "no right neighbor at {i}");
        }
    }

    for c in &result.clusters {
        assert!(c.lo <= c.hi);
    }
    for w in result.clusters.windows(2) {
        assert!(w[0].hi <= w[1].lo, "clusters ordered and disjoint");
        assert!(w[1].lo - w[0].hi > delta_t, "inter-cluster gap exceeds threshold");
    }

    // Every isolated event lies in exactly one gap interval, except when the
    // whole series collapses to a single instant: an open interval cannot
    // represent a zero-width span, so none is reported.
    let gaps = gap_intervals(result, series);
    for g in &gaps {
        assert!(g.lo < g.hi, "gap intervals are non-degenerate");
    }
    let zero_span = series.first() == series.last();
    for &x in &result.isolated {
        let containing = gaps.iter().filter(|g| g.lo <= x && x <= g.hi).count();
        if result.clusters.is_empty() && zero_span {
            assert_eq!(containing, 0);
        } else {
            assert_eq!(containing, 1, "isolated {x} lies in {containing} gap intervals");
        }
    }
}

/// For thresholds `small <= large`, every cluster of the tighter result must
/// be contained in one cluster of the looser result.
pub fn check_nesting(small: &ClusteringResult, large: &ClusteringResult) {
    assert!(small.delta_t <= large.delta_t);
    for c in &small.clusters {
        let idx = large.clusters.partition_point(|cl| cl.hi < c.lo);
        let container = large.clusters.get(idx).unwrap_or_else(|| {
            panic!(
                "cluster [{}, {}] at delta_t {} has no container at delta_t {}",
                c.lo, c.hi, small.delta_t, large.delta_t
            )
        });
        assert!(
            container.lo <= c.lo && c.hi <= container.hi,
            "cluster [{}, {}] not inside [{}, {}]",
            c.lo,
            c.hi,
            container.lo,
            container.hi
        );
    }
}

/// A randomized series of length `n`, drawn from one of several shapes:
/// smooth uniform spread, quantized values with many duplicates, bursty
/// exponential-like gaps, and constant runs.
pub fn random_series(rng: &mut ChaCha8Rng, n: usize) -> EventSeries {
    let start = rng.random_range(-1e3..1e3);
    let shape = rng.random_range(0..4u8);
    let mut events = Vec::with_capacity(n);
    let mut current = start;
    for _ in 0..n {
        let gap = match shape {
            0 => rng.random_range(0.0..10.0),
            1 => rng.random_range(0i32..40) as f64 * 0.25,
            2 => {
                let u: f64 = rng.random_range(1e-12..1.0);
                -u.ln() * 2.0
            }
            _ => {
                if rng.random_range(0..8u8) == 0 {
                    rng.random_range(0.0..50.0)
                } else {
                    0.0
                }
            }
        };
        events.push(current);
        current += gap;
    }
    EventSeries::new(events).expect("cumulative non-negative gaps are ordered")
}

/// Threshold menu for a series: the fixed extremes plus draws from the gap
/// distribution, including exact gap values to exercise the bond-at-equality
/// rule. Sorted ascending.
pub fn threshold_menu(rng: &mut ChaCha8Rng, series: &EventSeries) -> Vec<f64> {
    let mut thresholds = vec![-1.0, 0.0, 1e308];
    if let Ok(gaps) = series.gaps() {
        let slice = gaps.as_slice();
        for _ in 0..2 {
            thresholds.push(slice[rng.random_range(0..slice.len())]);
        }
        let scale: f64 = rng.random_range(0.1..2.0);
        thresholds.push(slice[rng.random_range(0..slice.len())] * scale);
    } else {
        thresholds.push(1.0);
    }
    thresholds.sort_unstable_by(f64::total_cmp);
    thresholds
}

/// Runs `visit` over `trials` deterministic randomized trials. Series
/// lengths mix a heavy tail of small sizes with occasional large ones up to
/// `n_max`.
pub fn randomized_trials(
    seed: u64,
    trials: usize,
    n_max: usize,
    mut visit: impl FnMut(&EventSeries, &[f64]),
) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let n = match trial % 100 {
            // Pin the degenerate sizes every hundred trials.
            0 => 0,
            1 => 1,
            2 => 2,
            3 => rng.random_range(n_max / 2..=n_max),
            _ => {
                let u: f64 = rng.random_range(0.0..1.0);
                ((1000f64.powf(u) - 1.0) / 999.0 * 1000.0) as usize
            }
        };
        let series = random_series(&mut rng, n);
        let thresholds = threshold_menu(&mut rng, &series);
        visit(&series, &thresholds);
    }
}
