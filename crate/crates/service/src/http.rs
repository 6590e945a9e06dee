use std::collections::BTreeSet;
use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use lexforge_core::generation::GenerationError;
use lexforge_core::Section;
use serde::{Deserialize, Serialize};

use crate::service::DraftingService;
use crate::session::Provenance;
use crate::ServiceError;

/// Error body of every failed request.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApiError {
    pub code: String,
    pub message: String,
}

struct Failure(StatusCode, ApiError);

impl From<ServiceError> for Failure {
    fn from(e: ServiceError) -> Self {
        let status = match &e {
            ServiceError::UnknownSession(_) => StatusCode::NOT_FOUND,
            ServiceError::Validation(_) => StatusCode::UNPROCESSABLE_ENTITY,
            ServiceError::DuplicateTerm(_) => StatusCode::CONFLICT,
            ServiceError::Generation(GenerationError::EndpointFailure { .. })
            | ServiceError::Generation(GenerationError::NoJsonFound)
            | ServiceError::Generation(GenerationError::MissingKey(_)) => StatusCode::BAD_GATEWAY,
            ServiceError::Generation(GenerationError::Config(_)) | ServiceError::Storage(_) => {
                StatusCode::INTERNAL_SERVER_ERROR
            }
            ServiceError::Generation(GenerationError::DuplicateTerm(_)) => StatusCode::CONFLICT,
            ServiceError::Generation(_) | ServiceError::Retrieval(_) => StatusCode::UNPROCESSABLE_ENTITY,
        };
        Failure(
            status,
            ApiError {
                code: e.code().to_string(),
                message: e.to_string(),
            },
        )
    }
}

impl From<JsonRejection> for Failure {
    fn from(e: JsonRejection) -> Self {
        Failure(
            e.status(),
            ApiError {
                code: "invalid_body".into(),
                message: e.body_text(),
            },
        )
    }
}

impl IntoResponse for Failure {
    fn into_response(self) -> Response {
        (self.0, Json(self.1)).into_response()
    }
}

type Shared = Arc<DraftingService>;

/// Runs a service call off the async executor; generation blocks on the network.
async fn blocking<T, F>(service: Shared, call: F) -> Result<T, Failure>
where
    T: Send + 'static,
    F: FnOnce(&DraftingService) -> Result<T, ServiceError> + Send + 'static,
{
    tokio::task::spawn_blocking(move || call(&service))
        .await
        .map_err(|e| {
            Failure(
                StatusCode::INTERNAL_SERVER_ERROR,
                ApiError {
                    code: "internal".into(),
                    message: e.to_string(),
                },
            )
        })?
        .map_err(Failure::from)
}

#[derive(Debug, Deserialize)]
struct CreateSession {
    #[serde(default)]
    title: String,
    #[serde(default)]
    eurovoc: BTreeSet<String>,
    #[serde(default)]
    sections: Vec<Section>,
}

#[derive(Debug, Deserialize)]
struct ReplaceSections {
    sections: Vec<Section>,
}

#[derive(Debug, Deserialize)]
struct GenerateQuery {
    k: Option<usize>,
}

#[derive(Debug, Deserialize)]
struct Accept {
    term: String,
    text: String,
    provenance: Provenance,
}

async fn create_session(
    State(service): State<Shared>,
    body: Result<Json<CreateSession>, JsonRejection>,
) -> Result<impl IntoResponse, Failure> {
    let Json(body) = body?;
    let session = blocking(service, move |s| s.create_session(&body.title, body.eurovoc, body.sections)).await?;
    Ok((StatusCode::CREATED, Json(session)))
}

async fn get_session(State(service): State<Shared>, Path(id): Path<String>) -> Result<impl IntoResponse, Failure> {
    Ok(Json(blocking(service, move |s| s.get_session(&id)).await?))
}

async fn replace_sections(
    State(service): State<Shared>,
    Path(id): Path<String>,
    body: Result<Json<ReplaceSections>, JsonRejection>,
) -> Result<impl IntoResponse, Failure> {
    let Json(body) = body?;
    Ok(Json(blocking(service, move |s| s.update_sections(&id, body.sections)).await?))
}

async fn lookup_term(
    State(service): State<Shared>,
    Path((id, term)): Path<(String, String)>,
) -> Result<impl IntoResponse, Failure> {
    Ok(Json(blocking(service, move |s| s.lookup_term(&id, &term)).await?))
}

async fn generate(
    State(service): State<Shared>,
    Path((id, term)): Path<(String, String)>,
    Query(query): Query<GenerateQuery>,
) -> Result<impl IntoResponse, Failure> {
    Ok(Json(blocking(service, move |s| s.generate_for_term(&id, &term, query.k)).await?))
}

async fn accept_definition(
    State(service): State<Shared>,
    Path(id): Path<String>,
    body: Result<Json<Accept>, JsonRejection>,
) -> Result<impl IntoResponse, Failure> {
    let Json(body) = body?;
    let session = blocking(service, move |s| s.accept_definition(&id, &body.term, &body.text, body.provenance)).await?;
    Ok(Json(session))
}

async fn export_article(State(service): State<Shared>, Path(id): Path<String>) -> Result<impl IntoResponse, Failure> {
    let text = blocking(service, move |s| s.export_article(&id)).await?;
    Ok(([(header::CONTENT_TYPE, "text/plain; charset=utf-8")], text))
}

/// The `/v1` API over a shared service.
pub fn router(service: Arc<DraftingService>) -> Router {
    Router::new()
        .route("/v1/sessions", post(create_session))
        .route("/v1/sessions/{id}", get(get_session))
        .route("/v1/sessions/{id}/sections", put(replace_sections))
        .route("/v1/sessions/{id}/terms/{term}", get(lookup_term))
        .route("/v1/sessions/{id}/terms/{term}/generate", post(generate))
        .route("/v1/sessions/{id}/definitions", post(accept_definition))
        .route("/v1/sessions/{id}/article", get(export_article))
        .with_state(service)
}

/// Binds `addr` and serves the API until the process is stopped.
pub async fn serve(addr: std::net::SocketAddr, service: Arc<DraftingService>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(service)).await
}
