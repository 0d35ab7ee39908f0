//! Stateless HTTP/JSON service over the analysis functions.
//!
//! Every request runs on the blocking pool under a time budget. When the budget runs out
//! the client gets 408 and the computation's result is discarded when it finishes.

use std::net::SocketAddr;
use std::sync::Arc;
use std::time::Duration;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde_json::{json, Value};

use polyassoc_core::io::parse_region;
use polyassoc_core::{geom::ValidateOptions, Region};

use crate::analysis::{
    analyze, json_point, move_log, parse_products, parse_star_path, resolve_cap, star_log, AppError, Options,
};

pub const DEFAULT_BUDGET: Duration = Duration::from_secs(30);

#[derive(Clone, Debug)]
pub struct ServiceConfig {
    pub budget: Duration,
    /// Cap used when a request does not set one.
    pub cap: usize,
}

impl ServiceConfig {
    pub fn from_env() -> Result<ServiceConfig, AppError> {
        Ok(ServiceConfig { budget: DEFAULT_BUDGET, cap: resolve_cap(None)? })
    }
}

pub fn router(config: ServiceConfig) -> Router {
    Router::new()
        .route("/api/health", get(health))
        .route("/api/analyze", post(analyze_handler))
        .route("/api/move", post(move_handler))
        .route("/api/star-deform", post(star_handler))
        .with_state(Arc::new(config))
}

pub async fn serve(addr: SocketAddr, config: ServiceConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(config)).await
}

fn error_response(err: &AppError) -> Response {
    let mut body = json!({ "error": err.kind(), "message": err.to_string() });
    let status = match err {
        AppError::Core(polyassoc_core::Error::RegionTooLarge { cap, reached }) => {
            body["cap"] = json!(cap);
            body["reached"] = json!(reached);
            StatusCode::PAYLOAD_TOO_LARGE
        }
        AppError::Core(e) if !e.is_validation() => StatusCode::INTERNAL_SERVER_ERROR,
        AppError::Io(_) => StatusCode::INTERNAL_SERVER_ERROR,
        _ => StatusCode::BAD_REQUEST,
    };
    (status, Json(body)).into_response()
}

async fn run<F>(config: &ServiceConfig, job: F) -> Response
where
    F: FnOnce() -> Result<Value, AppError> + Send + 'static,
{
    let task = tokio::task::spawn_blocking(job);
    match tokio::time::timeout(config.budget, task).await {
        Ok(Ok(Ok(v))) => (StatusCode::OK, Json(v)).into_response(),
        Ok(Ok(Err(e))) => error_response(&e),
        Ok(Err(join)) => error_response(&AppError::Io(format!("computation failed: {join}"))),
        Err(_) => {
            let body = json!({ "error": "Timeout", "message": format!("request exceeded {:?}", config.budget) });
            (StatusCode::REQUEST_TIMEOUT, Json(body)).into_response()
        }
    }
}

fn parse_body(body: &Bytes) -> Result<Value, AppError> {
    serde_json::from_slice(body).map_err(|e| polyassoc_core::Error::Parse(e.to_string()).into())
}

fn polygon_field(v: &Value) -> Result<Region, AppError> {
    let p = v.get("polygon").ok_or_else(|| polyassoc_core::Error::Parse("missing \"polygon\"".into()))?;
    Ok(parse_region(p, ValidateOptions::default())?)
}

fn usize_field(v: &Value, key: &str) -> Result<Option<usize>, AppError> {
    match v.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(x) => x
            .as_u64()
            .map(|n| Some(n as usize))
            .ok_or_else(|| polyassoc_core::Error::Parse(format!("\"{key}\" must be a nonnegative integer")).into()),
    }
}

async fn health() -> Json<Value> {
    Json(json!({ "status": "ok" }))
}

fn analyze_request(v: &Value, default_cap: usize) -> Result<Value, AppError> {
    let region = polygon_field(v)?;
    let names = match v.get("products") {
        Some(Value::Array(a)) => a
            .iter()
            .map(|x| {
                x.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| polyassoc_core::Error::Parse("product names must be strings".into()))
            })
            .collect::<Result<Vec<_>, _>>()?
            .join(","),
        Some(Value::String(s)) => s.clone(),
        _ => return Err(polyassoc_core::Error::Parse("\"products\" must be a list of names".into()).into()),
    };
    let products = parse_products(&names)?;
    let root = match v.get("root") {
        None | Some(Value::Null) => None,
        Some(Value::Array(a)) if a.len() == 2 && a.iter().all(|x| x.is_u64()) => {
            Some((a[0].as_u64().unwrap() as usize, a[1].as_u64().unwrap() as usize))
        }
        Some(_) => return Err(polyassoc_core::Error::Parse("\"root\" must be [i, j]".into()).into()),
    };
    let opts = Options {
        cap: usize_field(v, "cap")?.unwrap_or(default_cap),
        root,
        deterministic: v.get("deterministic").and_then(Value::as_bool).unwrap_or(false),
    };
    analyze(&region, &products, &opts)
}

async fn analyze_handler(State(config): State<Arc<ServiceConfig>>, body: Bytes) -> Response {
    let cap = config.cap;
    run(&config, move || analyze_request(&parse_body(&body)?, cap)).await
}

fn move_request(v: &Value) -> Result<Value, AppError> {
    let region = polygon_field(v)?;
    let one = |m: &Value| -> Result<(usize, polyassoc_core::Point), AppError> {
        let vertex =
            usize_field(m, "vertex")?.ok_or_else(|| polyassoc_core::Error::Parse("missing \"vertex\"".into()))?;
        let target = m.get("target").ok_or_else(|| polyassoc_core::Error::Parse("missing \"target\"".into()))?;
        Ok((vertex, json_point(target)?))
    };
    let moves = match v.get("moves") {
        Some(Value::Array(list)) => list.iter().map(one).collect::<Result<Vec<_>, _>>()?,
        Some(_) => return Err(polyassoc_core::Error::Parse("\"moves\" must be a list".into()).into()),
        None => vec![one(v)?],
    };
    move_log(&region, &moves)
}

async fn move_handler(State(config): State<Arc<ServiceConfig>>, body: Bytes) -> Response {
    run(&config, move || move_request(&parse_body(&body)?)).await
}

fn star_request(v: &Value) -> Result<Value, AppError> {
    let region = polygon_field(v)?;
    let center = match v.get("center") {
        None | Some(Value::Null) => None,
        Some(c) => Some(json_point(c)?),
    };
    let path = match v.get("path").and_then(Value::as_str) {
        Some(name) => parse_star_path(name)?,
        None => Default::default(),
    };
    star_log(&region, center, path)
}

async fn star_handler(State(config): State<Arc<ServiceConfig>>, body: Bytes) -> Response {
    run(&config, move || star_request(&parse_body(&body)?)).await
}
