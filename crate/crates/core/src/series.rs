//! Validated event-series representation.
//!
//! An [`EventSeries`] is a non-decreasing sequence of finite timestamps.
//! Everything downstream (clustering, measures, benchmarks) relies on that
//! ordering invariant, so it is checked once, at construction.

use thiserror::Error;

/// Seconds since an arbitrary epoch. The unit is irrelevant as long as it is
/// consistent within a series.
pub type Timestamp = f64;

/// Validation and precondition failures for event series.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    /// A timestamp was NaN or infinite.
    #[error("non-finite timestamp at index {0}")]
    NonFinite(usize),
    /// The first index whose timestamp is smaller than its predecessor.
    #[error("timestamps out of order at index {0}")]
    OutOfOrder(usize),
    /// The operation needs at least two events.
    #[error("series has {0} event(s), need at least 2")]
    TooShort(usize),
}

/// A validated, non-decreasing sequence of event timestamps.
///
/// Duplicates are allowed. Immutable after construction, so it can be shared
/// freely across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct EventSeries {
    events: Vec<Timestamp>,
    span: Option<f64>,
}

impl EventSeries {
    /// Validates a raw timestamp vector: every value finite, sequence
    /// non-decreasing. Returns the first offending index otherwise.
    pub fn new(raw: Vec<Timestamp>) -> Result<Self, SeriesError> {
        for (i, &v) in raw.iter().enumerate() {
            if !v.is_finite() {
                return Err(SeriesError::NonFinite(i));
            }
            if i > 0 && v < raw[i - 1] {
                return Err(SeriesError::OutOfOrder(i));
            }
        }
        let span = match raw.len() {
            0 | 1 => None,
            n => Some(raw[n - 1] - raw[0]),
        };
        Ok(Self { events: raw, span })
    }

    /// Number of events N.
    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn events(&self) -> &[Timestamp] {
        &self.events
    }

    pub fn into_vec(self) -> Vec<Timestamp> {
        self.events
    }

    pub fn first(&self) -> Option<Timestamp> {
        self.events.first().copied()
    }

    pub fn last(&self) -> Option<Timestamp> {
        self.events.last().copied()
    }

    /// Total span `t_N - t_1`, defined for series of at least two events.
    pub fn span(&self) -> Option<f64> {
        self.span
    }

    /// The N-1 consecutive differences `t_{i+1} - t_i`, all non-negative.
    pub fn gaps(&self) -> Result<GapSequence, SeriesError> {
        if self.len() < 2 {
            return Err(SeriesError::TooShort(self.len()));
        }
        let gaps = self.events.windows(2).map(|w| w[1] - w[0]).collect();
        Ok(GapSequence { gaps })
    }

    /// Arithmetic mean of the N-1 consecutive gaps, i.e. span / (N-1).
    pub fn mean_gap(&self) -> Result<f64, SeriesError> {
        match self.span {
            Some(span) => Ok(span / (self.len() - 1) as f64),
            None => Err(SeriesError::TooShort(self.len())),
        }
    }
}

/// The consecutive gaps of a series, in series order.
#[derive(Debug, Clone, PartialEq)]
pub struct GapSequence {
    gaps: Vec<f64>,
}

impl GapSequence {
    pub fn as_slice(&self) -> &[f64] {
        &self.gaps
    }

    pub fn len(&self) -> usize {
        self.gaps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gaps.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.gaps.iter()
    }

    pub fn max(&self) -> Option<f64> {
        self.gaps.iter().copied().reduce(f64::max)
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.gaps
    }
}

impl AsRef<[f64]> for GapSequence {
    fn as_ref(&self) -> &[f64] {
        &self.gaps
    }
}
