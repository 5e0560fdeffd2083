//! Deterministic, seeded generators for synthetic event series.
//!
//! The random generators run on ChaCha8 seeded from a caller-provided 64-bit
//! seed, so the same spec and seed always produce byte-identical series
//! (the generator crate is version-pinned through the lockfile).

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::series::EventSeries;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SynthError {
    #[error("bad range: need finite lo < hi, got [{lo}, {hi})")]
    BadRange { lo: f64, hi: f64 },
}

/// Declarative description of a synthetic series, e.g. as assembled from CLI
/// flags.
#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSpec {
    Periodic { n: usize, period: f64, start: f64 },
    UniformRandom { n: usize, lo: f64, hi: f64, seed: u64 },
    BurstComposite { seed: u64 },
}

impl GeneratorSpec {
    pub fn generate(&self) -> Result<EventSeries, SynthError> {
        match *self {
            GeneratorSpec::Periodic { n, period, start } => Ok(gen_periodic(n, period, start)),
            GeneratorSpec::UniformRandom { n, lo, hi, seed } => gen_uniform(n, lo, hi, seed),
            GeneratorSpec::BurstComposite { seed } => Ok(gen_burst_composite(seed)),
        }
    }
}

/// `n` equally spaced events `start + i * period`, i = 0..n.
///
/// # Panics
/// If `period` is not positive and finite or `start` is not finite.
pub fn gen_periodic(n: usize, period: f64, start: f64) -> EventSeries {
    assert!(
        period > 0.0 && period.is_finite(),
        "period must be positive and finite"
    );
    assert!(start.is_finite(), "start must be finite");
    let events = (0..n).map(|i| start + i as f64 * period).collect();
    EventSeries::new(events).expect("periodic series is ordered by construction")
}

/// `n` independent uniform draws on `[lo, hi)`, sorted ascending.
pub fn gen_uniform(n: usize, lo: f64, hi: f64, seed: u64) -> Result<EventSeries, SynthError> {
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(SynthError::BadRange { lo, hi });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut events: Vec<f64> = (0..n).map(|_| rng.random_range(lo..hi)).collect();
    events.sort_unstable_by(f64::total_cmp);
    Ok(EventSeries::new(events).expect("sorted finite draws form a valid series"))
}

/// Number of random events in the burst segment of [`gen_burst_composite`].
pub const BURST_RANDOM_COUNT: usize = 10_000;
/// Number of equidistant events in the periodic segment.
pub const BURST_PERIODIC_COUNT: usize = 1_000;

/// A burst of `BURST_RANDOM_COUNT` uniform events on `[0, 1)` followed by
/// `BURST_PERIODIC_COUNT` equidistant events spanning `[1, 10]` inclusive.
pub fn gen_burst_composite(seed: u64) -> EventSeries {
    let burst = gen_uniform(BURST_RANDOM_COUNT, 0.0, 1.0, seed).expect("fixed valid range");
    let mut events = burst.into_vec();
    let m = (BURST_PERIODIC_COUNT - 1) as f64;
    events.extend((0..BURST_PERIODIC_COUNT).map(|i| 1.0 + 9.0 * (i as f64 / m)));
    EventSeries::new(events).expect("burst events stay below the periodic segment")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periodic_examples() {
        assert_eq!(gen_periodic(3, 10.0, 0.0).events(), &[0.0, 10.0, 20.0]);
        assert_eq!(gen_periodic(1, 5.0, 7.0).events(), &[7.0]);
        assert!(gen_periodic(0, 1.0, 0.0).is_empty());
    }

    #[test]
    fn uniform_draws_are_sorted_and_in_range() {
        let s = gen_uniform(1000, -3.0, 7.0, 11).unwrap();
        assert_eq!(s.len(), 1000);
        assert!(s.events().iter().all(|&t| (-3.0..7.0).contains(&t)));
        assert!(s.events().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn uniform_is_deterministic_per_seed() {
        let a = gen_uniform(500, 0.0, 1.0, 42).unwrap();
        let b = gen_uniform(500, 0.0, 1.0, 42).unwrap();
        assert_eq!(a, b);
        let c = gen_uniform(500, 0.0, 1.0, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn uniform_rejects_bad_ranges() {
        assert!(matches!(
            gen_uniform(10, 1.0, 1.0, 0),
            Err(SynthError::BadRange { .. })
        ));
        assert!(matches!(
            gen_uniform(10, 2.0, 1.0, 0),
            Err(SynthError::BadRange { .. })
        ));
        assert!(matches!(
            gen_uniform(10, 0.0, f64::INFINITY, 0),
            Err(SynthError::BadRange { .. })
        ));
    }

    #[test]
    fn uniform_empty_is_legal() {
        assert!(gen_uniform(0, 0.0, 1.0, 9).unwrap().is_empty());
    }

    #[test]
    fn burst_composite_construction() {
        let s = gen_burst_composite(42);
        assert_eq!(s.len(), 11_000);
        assert!(s.first().unwrap() >= 0.0);
        assert!(s.first().unwrap() < 1.0);
        assert_eq!(s.last().unwrap(), 10.0);

        // The periodic tail is equidistant at 9/999.
        let expected = 9.0 / 999.0;
        let tail = &s.events()[BURST_RANDOM_COUNT..];
        assert_eq!(tail[0], 1.0);
        for w in tail.windows(2) {
            assert!((w[1] - w[0] - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn burst_composite_seeds_differ_only_in_prefix() {
        let a = gen_burst_composite(1);
        let b = gen_burst_composite(2);
        assert_ne!(a.events()[..BURST_RANDOM_COUNT], b.events()[..BURST_RANDOM_COUNT]);
        assert_eq!(a.events()[BURST_RANDOM_COUNT..], b.events()[BURST_RANDOM_COUNT..]);
    }

    #[test]
    fn spec_generate_dispatches() {
        let spec = GeneratorSpec::Periodic { n: 3, period: 1.0, start: 0.0 };
        assert_eq!(spec.generate().unwrap().events(), &[0.0, 1.0, 2.0]);
        let spec = GeneratorSpec::UniformRandom { n: 5, lo: 0.0, hi: 1.0, seed: 3 };
        assert_eq!(spec.generate().unwrap(), gen_uniform(5, 0.0, 1.0, 3).unwrap());
        let spec = GeneratorSpec::BurstComposite { seed: 7 };
        assert_eq!(spec.generate().unwrap(), gen_burst_composite(7));
    }
}
