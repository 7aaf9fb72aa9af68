//! Stateless JSON-over-HTTP facade.
//!
//! Responses are pure functions of the request, rendered through the same
//! serializers as the CLI, so a fiber document fetched over HTTP is
//! byte-identical to `hopf-atlas fiber` output for the same parameters.

use std::collections::HashMap;
use std::future::Future;
use std::net::SocketAddr;
use std::path::PathBuf;

use axum::body::Bytes;
use axum::extract::Query;
use axum::http::{header, HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::{Deserialize, Serialize};
use tokio::net::TcpListener;
use tower_http::cors::{AllowOrigin, CorsLayer};
use tower_http::services::ServeDir;

use crate::document::{to_json, FiberDocument};
use crate::error::HopfError;
use crate::hopf::{GaugeKind, PointS2, DEFAULT_FIBER_SAMPLES};
use crate::linkage::pairwise_link_check;

/// Largest batch accepted by `POST /api/fibers`.
pub const MAX_BATCH: usize = 512;

const CACHE_FOREVER: &str = "public, max-age=31536000, immutable";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApiError {
    /// One of `pole`, `domain`, `parse`, `proximity`.
    pub code: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<serde_json::Value>,
}

struct ApiFailure {
    status: StatusCode,
    body: ApiError,
}

impl ApiFailure {
    fn parse(message: impl Into<String>) -> Self {
        Self {
            status: StatusCode::BAD_REQUEST,
            body: ApiError { code: "parse", message: message.into(), detail: None },
        }
    }

    fn with_detail(mut self, detail: serde_json::Value) -> Self {
        self.body.detail = Some(detail);
        self
    }
}

impl From<HopfError> for ApiFailure {
    fn from(e: HopfError) -> Self {
        let (status, code, detail) = match &e {
            HopfError::Parse(_) => (StatusCode::BAD_REQUEST, "parse", None),
            HopfError::Pole(_) => (StatusCode::UNPROCESSABLE_ENTITY, "pole", None),
            HopfError::Proximity(_) => (StatusCode::UNPROCESSABLE_ENTITY, "proximity", None),
            HopfError::Domain(_) => (StatusCode::UNPROCESSABLE_ENTITY, "domain", None),
            HopfError::Fit { line_residual, circle_residual } => (
                StatusCode::UNPROCESSABLE_ENTITY,
                "domain",
                Some(serde_json::json!({
                    "line_residual": line_residual,
                    "circle_residual": circle_residual,
                })),
            ),
            HopfError::Consistency(_) => (StatusCode::INTERNAL_SERVER_ERROR, "domain", None),
        };
        Self { status, body: ApiError { code, message: e.to_string(), detail } }
    }
}

impl IntoResponse for ApiFailure {
    fn into_response(self) -> Response {
        let mut resp = (self.status, self.body.to_json_body()).into_response();
        resp.headers_mut()
            .insert(header::CONTENT_TYPE, HeaderValue::from_static("application/json"));
        resp
    }
}

impl ApiError {
    fn to_json_body(&self) -> String {
        to_json(self)
    }
}

fn json_ok(body: String) -> Response {
    (
        StatusCode::OK,
        [
            (header::CONTENT_TYPE, HeaderValue::from_static("application/json")),
            (header::CACHE_CONTROL, HeaderValue::from_static(CACHE_FOREVER)),
        ],
        body,
    )
        .into_response()
}

type Params = HashMap<String, String>;

fn float_param(q: &Params, name: &str) -> Result<f64, ApiFailure> {
    let raw = q
        .get(name)
        .ok_or_else(|| ApiFailure::parse(format!("missing query parameter `{name}`")))?;
    raw.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| ApiFailure::parse(format!("`{name}={raw}` is not a finite number")))
}

fn samples_param(q: &Params) -> Result<usize, ApiFailure> {
    match q.get("samples") {
        None => Ok(DEFAULT_FIBER_SAMPLES),
        Some(raw) => raw
            .trim()
            .parse()
            .map_err(|_| ApiFailure::parse(format!("`samples={raw}` is not a non-negative integer"))),
    }
}

fn gauge_param(raw: Option<&str>) -> Result<GaugeKind, ApiFailure> {
    raw.map_or(Ok(GaugeKind::Auto), |g| g.parse().map_err(ApiFailure::from))
}

fn point_param(q: &Params, names: [&str; 3]) -> Result<PointS2, ApiFailure> {
    let [a, b, c] = names;
    Ok(PointS2::new(float_param(q, a)?, float_param(q, b)?, float_param(q, c)?)?)
}

async fn health() -> Response {
    #[derive(Serialize)]
    struct Health {
        status: &'static str,
        version: &'static str,
    }
    json_ok(to_json(&Health { status: "ok", version: env!("CARGO_PKG_VERSION") }))
}

async fn get_fiber(Query(q): Query<Params>) -> Result<Response, ApiFailure> {
    let base = point_param(&q, ["p1", "p2", "p3"])?;
    let samples = samples_param(&q)?;
    let gauge = gauge_param(q.get("gauge").map(String::as_str))?;
    Ok(json_ok(FiberDocument::build(base, gauge, samples)?.to_json()))
}

#[derive(Debug, Deserialize)]
struct BatchRequest {
    points: Vec<[f64; 3]>,
    #[serde(default)]
    samples: Option<usize>,
    #[serde(default)]
    gauge: Option<String>,
}

#[derive(Serialize)]
struct BatchResponse {
    fibers: Vec<FiberDocument>,
}

async fn post_fibers(body: Bytes) -> Result<Response, ApiFailure> {
    let req: BatchRequest = serde_json::from_slice(&body)
        .map_err(|e| ApiFailure::parse(format!("invalid request body: {e}")))?;
    if req.points.len() > MAX_BATCH {
        return Err(ApiFailure::parse(format!(
            "batch of {} points exceeds the limit of {MAX_BATCH}",
            req.points.len()
        ))
        .with_detail(serde_json::json!({ "limit": MAX_BATCH, "count": req.points.len() })));
    }
    let samples = req.samples.unwrap_or(DEFAULT_FIBER_SAMPLES);
    let gauge = gauge_param(req.gauge.as_deref())?;
    let mut fibers = Vec::with_capacity(req.points.len());
    for (index, [p1, p2, p3]) in req.points.into_iter().enumerate() {
        let doc = PointS2::new(p1, p2, p3)
            .and_then(|base| FiberDocument::build(base, gauge, samples))
            .map_err(|e| {
                ApiFailure::from(e.context(&format!("point {index}")))
                    .with_detail(serde_json::json!({ "index": index }))
            })?;
        fibers.push(doc);
    }
    Ok(json_ok(to_json(&BatchResponse { fibers })))
}

async fn get_link(Query(q): Query<Params>) -> Result<Response, ApiFailure> {
    let a = point_param(&q, ["pa1", "pa2", "pa3"])?;
    let b = point_param(&q, ["pb1", "pb2", "pb3"])?;
    let samples = samples_param(&q)?;
    Ok(json_ok(to_json(&pairwise_link_check(a, b, samples)?)))
}

fn is_local_origin(origin: &HeaderValue) -> bool {
    let Ok(origin) = origin.to_str() else { return false };
    let host = origin
        .strip_prefix("http://")
        .or_else(|| origin.strip_prefix("https://"))
        .unwrap_or("");
    let host = host.rsplit_once(':').map_or(host, |(h, port)| {
        if port.chars().all(|c| c.is_ascii_digit()) {
            h
        } else {
            host
        }
    });
    matches!(host, "localhost" | "127.0.0.1" | "[::1]")
}

/// The API router; `assets`, when given, is served under `/`.
pub fn router(assets: Option<PathBuf>) -> Router {
    let cors = CorsLayer::new()
        .allow_origin(AllowOrigin::predicate(|origin, _| is_local_origin(origin)))
        .allow_methods([Method::GET, Method::POST])
        .allow_headers([header::CONTENT_TYPE]);
    let api = Router::new()
        .route("/api/health", get(health))
        .route("/api/fiber", get(get_fiber))
        .route("/api/fibers", post(post_fibers))
        .route("/api/link", get(get_link));
    let app = match assets {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    };
    app.layer(cors)
}

/// Serves on an already bound listener until `shutdown` resolves.
pub async fn serve_listener(
    listener: TcpListener,
    assets: Option<PathBuf>,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, router(assets))
        .with_graceful_shutdown(shutdown)
        .await
}

/// Binds `addr` and serves until Ctrl-C.
pub async fn serve(addr: SocketAddr, assets: Option<PathBuf>) -> std::io::Result<()> {
    let listener = TcpListener::bind(addr).await?;
    eprintln!("hopf-atlas listening on http://{}", listener.local_addr()?);
    serve_listener(listener, assets, async {
        let _ = tokio::signal::ctrl_c().await;
    })
    .await
}
