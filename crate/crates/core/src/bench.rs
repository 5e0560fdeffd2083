//! Runtime comparison of the linear pass against the density-based
//! reference, across input sizes.
//!
//! Timings use a monotonic clock. Per size, one warm-up run of each route is
//! discarded, the remaining runs are aggregated by median, and the spread is
//! the summed relative median absolute deviation of the two routes, a
//! first-order relative error estimate for the speedup ratio.

use std::hint::black_box;
use std::io::{self, Write};
use std::time::Instant;

use crate::cluster::cluster_events;
use crate::oracle::dbscan_reference;
use crate::series::EventSeries;

/// One benchmark row: runtimes in seconds, speedup `r` and its relative
/// spread.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchRecord {
    pub n: usize,
    pub runtime_linear: f64,
    pub runtime_baseline: f64,
    pub speedup: f64,
    pub spread: f64,
}

/// Times both routes over `repeats` runs per size and reports medians.
///
/// `generator` supplies the series for each size; the caller controls its
/// seeding, so repeated invocations with the same generator are directly
/// comparable. Runs are serial to keep timings honest.
///
/// # Panics
/// If `sizes` is empty or not ascending, `repeats < 3`, or `delta_t` is not
/// positive (the density-based baseline needs a positive radius).
pub fn measure_speedup(
    sizes: &[usize],
    delta_t: f64,
    repeats: usize,
    generator: impl Fn(usize) -> EventSeries,
) -> Vec<BenchRecord> {
    assert!(!sizes.is_empty(), "need at least one size");
    assert!(sizes.windows(2).all(|w| w[0] < w[1]), "sizes must be ascending");
    assert!(repeats >= 3, "need at least 3 repeats");
    assert!(delta_t > 0.0, "delta_t must be positive");

    sizes
        .iter()
        .map(|&n| {
            let series = generator(n);
            // Warm-up runs, discarded.
            black_box(cluster_events(&series, delta_t));
            black_box(dbscan_reference(&series, delta_t).expect("positive eps"));

            let mut linear = Vec::with_capacity(repeats);
            let mut baseline = Vec::with_capacity(repeats);
            for _ in 0..repeats {
                linear.push(time(|| {
                    black_box(cluster_events(black_box(&series), delta_t));
                }));
                baseline.push(time(|| {
                    black_box(dbscan_reference(black_box(&series), delta_t).expect("positive eps"));
                }));
            }

            let (med_linear, mad_linear) = median_and_mad(&mut linear);
            let (med_baseline, mad_baseline) = median_and_mad(&mut baseline);
            BenchRecord {
                n,
                runtime_linear: med_linear,
                runtime_baseline: med_baseline,
                speedup: med_baseline / med_linear,
                spread: mad_linear / med_linear + mad_baseline / med_baseline,
            }
        })
        .collect()
}

/// Writes records as CSV with header `N,runtime_linear_s,runtime_baseline_s,r,spread`.
pub fn write_bench_csv<W: Write>(records: &[BenchRecord], mut sink: W) -> io::Result<()> {
    writeln!(sink, "N,runtime_linear_s,runtime_baseline_s,r,spread")?;
    for r in records {
        writeln!(
            sink,
            "{},{},{},{},{}",
            r.n, r.runtime_linear, r.runtime_baseline, r.speedup, r.spread
        )?;
    }
    Ok(())
}

fn time(run: impl FnOnce()) -> f64 {
    let start = Instant::now();
    run();
    start.elapsed().as_secs_f64()
}

fn median_and_mad(samples: &mut [f64]) -> (f64, f64) {
    let median = median_of(samples);
    let mut deviations: Vec<f64> = samples.iter().map(|s| (s - median).abs()).collect();
    let mad = median_of(&mut deviations);
    (median, mad)
}

fn median_of(samples: &mut [f64]) -> f64 {
    samples.sort_unstable_by(f64::total_cmp);
    let mid = samples.len() / 2;
    if samples.len() % 2 == 1 {
        samples[mid]
    } else {
        0.5 * (samples[mid - 1] + samples[mid])
    }
}
