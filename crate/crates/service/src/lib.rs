//! Minimal monitoring service over the clustering library.
//!
//! Each stream is an append-only series of timestamps, persisted as a
//! plain-lines log (one file per stream) that is fsynced per batch before
//! the append is acknowledged and replayed verbatim on startup. Clustering
//! and measures are computed on demand per request; a frequency detector
//! estimates the expected inter-event interval as the mean of the most
//! recent gaps over a configurable window.
//!
//! Endpoints (JSON):
//! - `POST /streams/{id}/events` body `{"events":[...]}` -> `{"accepted":n}`
//! - `GET  /streams/{id}/clusters?delta_t=<r>` -> threshold, clusters,
//!   isolated events and gap intervals; `delta_t` defaults to the detector
//!   estimate
//! - `GET  /streams/{id}/measures?f_min=&f_max=&steps=` -> measure points on
//!   the grid (default `[-2, 3]` with 51 points)
//! - `GET  /streams/{id}/delta_t` -> detector estimate and window
//!
//! Errors are `4xx` with body `{"error":code,"detail":...}`.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{self, BufReader, Write};
use std::path::PathBuf;
use std::sync::{Arc, Mutex, PoisonError, RwLock};

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};

use evclust_core::{
    cluster_events, gap_intervals, parse_events, sweep, EventSeries, InputFormat, MeasureError,
    SeriesError, SortPolicy,
};

pub const DEFAULT_DETECTOR_WINDOW: usize = 128;
const DEFAULT_F_MIN: f64 = -2.0;
const DEFAULT_F_MAX: f64 = 3.0;
const DEFAULT_STEPS: usize = 51;

/// Service configuration: where logs live, the detector window W, and
/// whether appends to unknown streams create them.
#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub data_dir: PathBuf,
    pub detector_window: usize,
    pub auto_create: bool,
}

impl ServiceConfig {
    pub fn new(data_dir: impl Into<PathBuf>) -> Self {
        ServiceConfig {
            data_dir: data_dir.into(),
            detector_window: DEFAULT_DETECTOR_WINDOW,
            auto_create: true,
        }
    }
}

/// Mean of the most recent `min(window, N-1)` consecutive gaps.
pub fn estimate_delta_t(series: &EventSeries, window: usize) -> Result<f64, SeriesError> {
    let n = series.len();
    if n < 2 {
        return Err(SeriesError::TooShort(n));
    }
    let window = window.max(1);
    let count = window.min(n - 1);
    let tail = &series.events()[n - 1 - count..];
    let sum: f64 = tail.windows(2).map(|w| w[1] - w[0]).sum();
    Ok(sum / count as f64)
}

struct StreamInner {
    series: Arc<EventSeries>,
    log: File,
}

/// One stream: a single-writer lock around the current snapshot and its log
/// handle. Readers clone the snapshot and release the lock immediately.
struct Stream {
    inner: Mutex<StreamInner>,
}

impl Stream {
    fn create(log_path: &std::path::Path) -> io::Result<Self> {
        let log = OpenOptions::new().create(true).append(true).open(log_path)?;
        Ok(Stream {
            inner: Mutex::new(StreamInner {
                series: Arc::new(EventSeries::new(Vec::new()).expect("empty series")),
                log,
            }),
        })
    }

    fn open(log_path: &std::path::Path) -> io::Result<Self> {
        let reader = BufReader::new(File::open(log_path)?);
        let parsed = parse_events(reader, &InputFormat::PlainLines, SortPolicy::RejectUnsorted)
            .map_err(|e| {
                io::Error::new(
                    io::ErrorKind::InvalidData,
                    format!("corrupt stream log {}: {e}", log_path.display()),
                )
            })?;
        let log = OpenOptions::new().append(true).open(log_path)?;
        Ok(Stream {
            inner: Mutex::new(StreamInner { series: Arc::new(parsed.series), log }),
        })
    }

    fn snapshot(&self) -> Arc<EventSeries> {
        let inner = self.inner.lock().unwrap_or_else(PoisonError::into_inner);
        Arc::clone(&inner.series)
    }

    /// Validates, persists (write + fsync), then publishes the new snapshot.
    /// The whole batch is rejected on any violation; nothing partial is
    /// applied.
    fn append(&self, batch: &[f64]) -> Result<usize, ApiError> {
        for (i, &v) in batch.iter().enumerate() {
            if !v.is_finite() {
                return Err(ApiError::NonFinite { index: i });
            }
            if i > 0 && v < batch[i - 1] {
                return Err(ApiError::OutOfOrderAppend);
            }
        }

        let mut inner = self.inner.lock().unwrap_or_else(PoisonError::into_inner);
        if let (Some(&first), Some(last)) = (batch.first(), inner.series.last()) {
            if first < last {
                return Err(ApiError::OutOfOrderAppend);
            }
        }
        if batch.is_empty() {
            return Ok(0);
        }

        let mut lines = String::new();
        for v in batch {
            lines.push_str(&format!("{v}\n"));
        }
        let old_len = inner.log.metadata().map_err(ApiError::io)?.len();
        if let Err(e) = inner
            .log
            .write_all(lines.as_bytes())
            .and_then(|()| inner.log.sync_data())
        {
            // Roll the log back so a partial write cannot survive a replay.
            let _ = inner.log.set_len(old_len);
            return Err(ApiError::io(e));
        }

        let mut events = Vec::with_capacity(inner.series.len() + batch.len());
        events.extend_from_slice(inner.series.events());
        events.extend_from_slice(batch);
        inner.series = Arc::new(EventSeries::new(events).expect("append keeps order"));
        Ok(batch.len())
    }
}

/// Shared service state: the stream registry and configuration.
pub struct AppState {
    config: ServiceConfig,
    streams: RwLock<HashMap<String, Arc<Stream>>>,
}

impl AppState {
    /// Creates the data directory if needed and replays every `*.log` file
    /// in it. A log that does not replay to a valid series is a startup
    /// error.
    pub fn open(config: ServiceConfig) -> io::Result<Arc<Self>> {
        std::fs::create_dir_all(&config.data_dir)?;
        let mut streams = HashMap::new();
        for entry in std::fs::read_dir(&config.data_dir)? {
            let path = entry?.path();
            if path.extension().and_then(|e| e.to_str()) != Some("log") {
                continue;
            }
            let id = path
                .file_stem()
                .and_then(|s| s.to_str())
                .filter(|s| valid_stream_id(s))
                .ok_or_else(|| {
                    io::Error::new(
                        io::ErrorKind::InvalidData,
                        format!("invalid stream log name: {}", path.display()),
                    )
                })?;
            streams.insert(id.to_string(), Arc::new(Stream::open(&path)?));
        }
        Ok(Arc::new(AppState {
            config,
            streams: RwLock::new(streams),
        }))
    }

    pub fn config(&self) -> &ServiceConfig {
        &self.config
    }

    fn get(&self, id: &str) -> Result<Arc<Stream>, ApiError> {
        if !valid_stream_id(id) {
            return Err(ApiError::InvalidStreamId);
        }
        self.streams
            .read()
            .unwrap_or_else(PoisonError::into_inner)
            .get(id)
            .cloned()
            .ok_or(ApiError::UnknownStream)
    }

    fn get_or_create(&self, id: &str) -> Result<Arc<Stream>, ApiError> {
        match self.get(id) {
            Err(ApiError::UnknownStream) if self.config.auto_create => {}
            other => return other,
        }
        let mut streams = self.streams.write().unwrap_or_else(PoisonError::into_inner);
        if let Some(stream) = streams.get(id) {
            return Ok(Arc::clone(stream));
        }
        let log_path = self.config.data_dir.join(format!("{id}.log"));
        let stream = Arc::new(Stream::create(&log_path).map_err(ApiError::io)?);
        streams.insert(id.to_string(), Arc::clone(&stream));
        Ok(stream)
    }
}

/// Stream ids map directly to log file names, so only a conservative
/// character set is accepted.
fn valid_stream_id(id: &str) -> bool {
    !id.is_empty()
        && id.len() <= 128
        && id
            .bytes()
            .all(|b| b.is_ascii_alphanumeric() || b == b'-' || b == b'_')
}

#[derive(Debug, thiserror::Error)]
pub enum ApiError {
    #[error("stream id must be 1..=128 characters of [A-Za-z0-9_-]")]
    InvalidStreamId,
    #[error("no such stream")]
    UnknownStream,
    #[error("stream has no events")]
    EmptyStream,
    #[error("stream needs at least 2 events")]
    TooShort,
    #[error("event {index} in the batch is not finite")]
    NonFinite { index: usize },
    #[error("batch is not ordered after the stream's last timestamp")]
    OutOfOrderAppend,
    #[error("series span is zero or undefined")]
    DegenerateSpan,
    #[error("{0}")]
    BadRequest(String),
    #[error("i/o failure: {0}")]
    Io(#[from] io::Error),
}

impl ApiError {
    fn io(e: io::Error) -> Self {
        ApiError::Io(e)
    }

    fn code(&self) -> (&'static str, StatusCode) {
        match self {
            ApiError::InvalidStreamId => ("invalid_stream_id", StatusCode::BAD_REQUEST),
            ApiError::UnknownStream => ("unknown_stream", StatusCode::NOT_FOUND),
            ApiError::EmptyStream => ("empty_stream", StatusCode::UNPROCESSABLE_ENTITY),
            ApiError::TooShort => ("too_short", StatusCode::UNPROCESSABLE_ENTITY),
            ApiError::NonFinite { .. } => ("non_finite", StatusCode::BAD_REQUEST),
            ApiError::OutOfOrderAppend => ("out_of_order_append", StatusCode::CONFLICT),
            ApiError::DegenerateSpan => ("degenerate_span", StatusCode::UNPROCESSABLE_ENTITY),
            ApiError::BadRequest(_) => ("bad_request", StatusCode::BAD_REQUEST),
            ApiError::Io(_) => ("internal", StatusCode::INTERNAL_SERVER_ERROR),
        }
    }
}

#[derive(Serialize)]
struct ErrorBody {
    error: &'static str,
    detail: String,
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (error, status) = self.code();
        let body = ErrorBody { error, detail: self.to_string() };
        (status, Json(body)).into_response()
    }
}

#[derive(Deserialize)]
struct AppendRequest {
    events: Vec<f64>,
}

#[derive(Serialize)]
struct AppendResponse {
    accepted: usize,
}

#[derive(Serialize)]
struct ClustersResponse {
    delta_t: f64,
    clusters: Vec<[f64; 2]>,
    isolated: Vec<f64>,
    gaps: Vec<[f64; 2]>,
}

#[derive(Serialize)]
struct MeasurePointBody {
    f: f64,
    delta_t: f64,
    c_o: f64,
    c_n: f64,
    c_s: f64,
}

#[derive(Serialize)]
struct MeasuresResponse {
    points: Vec<MeasurePointBody>,
}

#[derive(Serialize)]
struct DeltaTResponse {
    delta_t: f64,
    window: usize,
}

/// Builds the HTTP router over shared state.
pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/streams/{id}/events", post(append_events))
        .route("/streams/{id}/clusters", get(get_clusters))
        .route("/streams/{id}/measures", get(get_measures))
        .route("/streams/{id}/delta_t", get(get_delta_t))
        .with_state(state)
}

async fn append_events(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Json<AppendResponse>, ApiError> {
    let request: AppendRequest = serde_json::from_slice(&body)
        .map_err(|e| ApiError::BadRequest(format!("invalid body: {e}")))?;
    let stream = state.get_or_create(&id)?;
    let accepted = tokio::task::spawn_blocking(move || stream.append(&request.events))
        .await
        .map_err(|e| ApiError::BadRequest(format!("append task failed: {e}")))??;
    Ok(Json(AppendResponse { accepted }))
}

fn parse_param<T: std::str::FromStr>(
    params: &HashMap<String, String>,
    name: &str,
) -> Result<Option<T>, ApiError> {
    match params.get(name) {
        None => Ok(None),
        Some(raw) => raw
            .parse()
            .map(Some)
            .map_err(|_| ApiError::BadRequest(format!("invalid {name}: {raw:?}"))),
    }
}

async fn get_clusters(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Query(params): Query<HashMap<String, String>>,
) -> Result<Json<ClustersResponse>, ApiError> {
    let delta_t_param: Option<f64> = parse_param(&params, "delta_t")?;
    if let Some(v) = delta_t_param {
        if !v.is_finite() {
            return Err(ApiError::BadRequest("delta_t must be finite".into()));
        }
    }
    let series = state.get(&id)?.snapshot();
    if series.is_empty() {
        return Err(ApiError::EmptyStream);
    }
    let delta_t = match delta_t_param {
        Some(v) => v,
        None => estimate_delta_t(&series, state.config.detector_window)
            .map_err(|_| ApiError::TooShort)?,
    };

    let response = tokio::task::spawn_blocking(move || {
        let result = cluster_events(&series, delta_t);
        let gaps = gap_intervals(&result, &series);
        ClustersResponse {
            delta_t,
            clusters: result.clusters.iter().map(|c| [c.lo, c.hi]).collect(),
            isolated: result.isolated,
            gaps: gaps.iter().map(|g| [g.lo, g.hi]).collect(),
        }
    })
    .await
    .map_err(|e| ApiError::BadRequest(format!("clustering task failed: {e}")))?;
    Ok(Json(response))
}

async fn get_measures(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Query(params): Query<HashMap<String, String>>,
) -> Result<Json<MeasuresResponse>, ApiError> {
    let f_min = parse_param(&params, "f_min")?.unwrap_or(DEFAULT_F_MIN);
    let f_max = parse_param(&params, "f_max")?.unwrap_or(DEFAULT_F_MAX);
    let steps = parse_param(&params, "steps")?.unwrap_or(DEFAULT_STEPS);

    let series = state.get(&id)?.snapshot();
    let swept = tokio::task::spawn_blocking(move || sweep(&series, f_min, f_max, steps))
        .await
        .map_err(|e| ApiError::BadRequest(format!("sweep task failed: {e}")))?
        .map_err(|e| match e {
            MeasureError::DegenerateSpan => ApiError::DegenerateSpan,
            other => ApiError::BadRequest(other.to_string()),
        })?;

    let points = swept
        .points
        .iter()
        .map(|p| MeasurePointBody {
            f: p.f,
            delta_t: p.delta_t,
            c_o: p.coverage,
            c_n: p.cluster_number,
            c_s: p.isolation,
        })
        .collect();
    Ok(Json(MeasuresResponse { points }))
}

async fn get_delta_t(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> Result<Json<DeltaTResponse>, ApiError> {
    let series = state.get(&id)?.snapshot();
    let window = state.config.detector_window;
    let delta_t = estimate_delta_t(&series, window).map_err(|_| ApiError::TooShort)?;
    Ok(Json(DeltaTResponse { delta_t, window }))
}
