//! JSON API under `/api/v1`.
//!
//! The service binds immediately and answers 503 until the data directory
//! has been loaded; after that its state never changes.

use std::net::SocketAddr;
use std::sync::{Arc, OnceLock};

use axum::body::Bytes;
use axum::extract::State;
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use opinsum::summarizer::{ControlParams, Engine};
use opinsum::{Error, FieldError};
use serde_json::json;
use tokio::sync::oneshot;

use crate::store::DataDir;

#[derive(Clone, Default)]
pub struct Service {
    engine: Arc<OnceLock<Arc<Engine>>>,
}

impl Service {
    /// A service that answers 503 until [`Service::install`] is called.
    pub fn new() -> Self {
        Service::default()
    }

    pub fn ready(engine: Engine) -> Self {
        let service = Service::new();
        service.install(engine);
        service
    }

    /// Returns false if an engine was already installed.
    pub fn install(&self, engine: Engine) -> bool {
        self.engine.set(Arc::new(engine)).is_ok()
    }

    fn engine(&self) -> Result<Arc<Engine>, ApiError> {
        self.engine.get().cloned().ok_or(ApiError::Unavailable)
    }
}

#[derive(Debug)]
enum ApiError {
    Unavailable,
    BadRequest(String, Vec<FieldError>),
    NotFound(String),
    Internal(String),
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        match e {
            Error::Controls(fields) => ApiError::BadRequest("invalid controls".into(), fields),
            e @ Error::UnknownAspect { .. } => {
                let message = e.to_string();
                ApiError::BadRequest("invalid controls".into(), vec![FieldError::new("aspects", message)])
            }
            Error::UnknownPlace(place) => ApiError::NotFound(place),
            other => ApiError::Internal(other.to_string()),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        match self {
            ApiError::Unavailable => (
                StatusCode::SERVICE_UNAVAILABLE,
                Json(json!({ "error": "service is still loading its data" })),
            )
                .into_response(),
            ApiError::BadRequest(message, fields) => (
                StatusCode::BAD_REQUEST,
                Json(json!({ "error": message, "fields": fields })),
            )
                .into_response(),
            ApiError::NotFound(place) => (
                StatusCode::NOT_FOUND,
                Json(json!({ "error": format!("unknown place {place:?}"), "place": place })),
            )
                .into_response(),
            ApiError::Internal(detail) => {
                let id = uuid::Uuid::new_v4();
                tracing::error!(%id, %detail, "request failed");
                (
                    StatusCode::INTERNAL_SERVER_ERROR,
                    Json(json!({ "error": "internal error", "request_id": id.to_string() })),
                )
                    .into_response()
            }
        }
    }
}

pub fn router(service: Service) -> Router {
    Router::new()
        .route("/api/v1/places", get(places))
        .route("/api/v1/aspects", get(aspects))
        .route("/api/v1/summarize", post(summarize))
        .with_state(service)
}

async fn places(State(service): State<Service>) -> Result<Response, ApiError> {
    let engine = service.engine()?;
    let stats: Vec<_> = engine.places().map(|c| c.stats()).collect();
    Ok(Json(stats).into_response())
}

async fn aspects(State(service): State<Service>) -> Result<Response, ApiError> {
    let engine = service.engine()?;
    Ok(Json(engine.catalog().classes()).into_response())
}

fn parse_controls(body: &[u8]) -> Result<ControlParams, ApiError> {
    let mut de = serde_json::Deserializer::from_slice(body);
    serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let field = if path == "." { "body".to_string() } else { path };
        ApiError::BadRequest(
            "malformed request body".into(),
            vec![FieldError::new(field, e.into_inner().to_string())],
        )
    })
}

async fn summarize(State(service): State<Service>, body: Bytes) -> Result<Response, ApiError> {
    let engine = service.engine()?;
    let controls = parse_controls(&body)?;
    let summary = tokio::task::spawn_blocking(move || engine.summarize(&controls))
        .await
        .map_err(|e| ApiError::Internal(e.to_string()))??;
    Ok(([(header::CONTENT_TYPE, "application/json")], summary.to_json()).into_response())
}

/// Binds `addr`, loads `data` in the background and serves until Ctrl-C.
pub async fn serve(data: DataDir, addr: SocketAddr) -> anyhow::Result<()> {
    let service = Service::new();
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!(%addr, "listening");
    eprintln!("listening on http://{}", listener.local_addr()?);

    let (failed_tx, failed_rx) = oneshot::channel::<Error>();
    let loader = service.clone();
    tokio::task::spawn_blocking(move || match data.load_engine() {
        Ok(engine) => {
            tracing::info!(places = engine.places().count(), "data loaded");
            loader.install(engine);
        }
        Err(e) => {
            let _ = failed_tx.send(e);
        }
    });

    let (stop_tx, stop_rx) = oneshot::channel::<Option<Error>>();
    tokio::spawn(async move {
        let reason = tokio::select! {
            _ = tokio::signal::ctrl_c() => None,
            Ok(e) = failed_rx => Some(e),
        };
        let _ = stop_tx.send(reason);
    });
    let (reason_tx, reason_rx) = oneshot::channel::<Option<Error>>();
    axum::serve(listener, router(service))
        .with_graceful_shutdown(async move {
            let reason = stop_rx.await.ok().flatten();
            let _ = reason_tx.send(reason);
        })
        .await?;
    match reason_rx.await.ok().flatten() {
        Some(e) => Err(e.into()),
        None => Ok(()),
    }
}
