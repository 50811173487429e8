//! HTTP routes. Axioms travel as strings in the ontology text syntax.

use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use elrepair_core::Axiom;
use serde::{Deserialize, Serialize};

use crate::error::{Result, ServiceError};
use crate::session::CreateSession;
use crate::store::Store;

/// Body of the answer and revision routes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Answer {
    pub axiom: Axiom,
    pub verdict: bool,
}

type Shared = Arc<Store>;

fn body<T>(b: std::result::Result<Json<T>, JsonRejection>) -> Result<T> {
    b.map(|Json(v)| v).map_err(|e| ServiceError::BadRequest {
        code: "bad_request",
        message: e.body_text(),
        detail: serde_json::Value::Null,
    })
}

/// Runs a store call off the async workers; engine steps are CPU-bound.
async fn blocking<T: Send + 'static>(f: impl FnOnce() -> Result<T> + Send + 'static) -> Result<T> {
    tokio::task::spawn_blocking(f).await.map_err(|e| ServiceError::Internal(e.to_string()))?
}

async fn create(State(store): State<Shared>, b: std::result::Result<Json<CreateSession>, JsonRejection>) -> Result<Response> {
    let req = body(b)?;
    let view = blocking(move || store.create(req)).await?;
    Ok((StatusCode::CREATED, Json(view)).into_response())
}

async fn start(State(store): State<Shared>, Path(id): Path<String>) -> Result<Response> {
    Ok(Json(blocking(move || store.start(&id)).await?).into_response())
}

async fn show(State(store): State<Shared>, Path(id): Path<String>) -> Result<Response> {
    Ok(Json(blocking(move || store.view(&id)).await?).into_response())
}

async fn pending(State(store): State<Shared>, Path(id): Path<String>) -> Result<Response> {
    Ok(Json(blocking(move || store.pending(&id)).await?).into_response())
}

async fn answer(
    State(store): State<Shared>,
    Path(id): Path<String>,
    b: std::result::Result<Json<Answer>, JsonRejection>,
) -> Result<Response> {
    let a = body(b)?;
    Ok(Json(blocking(move || store.answer(&id, a.axiom, a.verdict)).await?).into_response())
}

async fn revise(
    State(store): State<Shared>,
    Path(id): Path<String>,
    b: std::result::Result<Json<Answer>, JsonRejection>,
) -> Result<Response> {
    let a = body(b)?;
    Ok(Json(blocking(move || store.revise(&id, a.axiom, a.verdict)).await?).into_response())
}

async fn result(State(store): State<Shared>, Path(id): Path<String>) -> Result<Response> {
    Ok(Json(blocking(move || store.result(&id)).await?).into_response())
}

/// The report document alone, byte for byte as the command line writes it.
async fn report(State(store): State<Shared>, Path(id): Path<String>) -> Result<Response> {
    let r = blocking(move || store.result(&id)).await?;
    Ok(([(header::CONTENT_TYPE, "application/json")], r.report.to_json()).into_response())
}

async fn warnings(State(store): State<Shared>, Path(id): Path<String>) -> Result<Response> {
    Ok(Json(blocking(move || store.warnings(&id)).await?).into_response())
}

async fn list(State(store): State<Shared>) -> Response {
    Json(store.ids()).into_response()
}

pub fn router(store: Arc<Store>) -> Router {
    Router::new()
        .route("/sessions", post(create).get(list))
        .route("/sessions/{id}", get(show))
        .route("/sessions/{id}/start", post(start))
        .route("/sessions/{id}/pending", get(pending))
        .route("/sessions/{id}/answers", post(answer))
        .route("/sessions/{id}/revisions", post(revise))
        .route("/sessions/{id}/result", get(result))
        .route("/sessions/{id}/report", get(report))
        .route("/sessions/{id}/warnings", get(warnings))
        .with_state(store)
}

/// Serves until interrupted.
pub async fn serve(listener: tokio::net::TcpListener, store: Arc<Store>) -> std::io::Result<()> {
    axum::serve(listener, router(store))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
