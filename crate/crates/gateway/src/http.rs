//! JSON-over-HTTP API.

use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::registry::{
    Gateway, QueryResponse, SelectResponse, SessionCreated, SpeechCompleteResponse,
};
use crate::GatewayError;
use voice_core::visual::StateSnapshot;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateSession {
    pub model: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueryBody {
    pub text: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelectBody {
    pub index: usize,
}

#[derive(Debug, Serialize)]
pub struct Models {
    pub models: Vec<String>,
}

pub enum ApiError {
    Gateway(GatewayError),
    BadRequest(String),
}

impl From<GatewayError> for ApiError {
    fn from(e: GatewayError) -> Self {
        ApiError::Gateway(e)
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError::BadRequest(e.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, code, message) = match self {
            ApiError::BadRequest(m) => (StatusCode::BAD_REQUEST, "BadRequest", m),
            ApiError::Gateway(e) => {
                let status = match &e {
                    GatewayError::UnknownModel(_) | GatewayError::UnknownSession(_) => {
                        StatusCode::NOT_FOUND
                    }
                    GatewayError::Busy | GatewayError::NoPendingOptions => StatusCode::CONFLICT,
                    GatewayError::IndexOutOfRange { .. } => StatusCode::UNPROCESSABLE_ENTITY,
                    GatewayError::Config(_) | GatewayError::Scene(_) | GatewayError::Backend(_) => {
                        StatusCode::INTERNAL_SERVER_ERROR
                    }
                };
                (status, e.code(), e.to_string())
            }
        };
        (status, Json(json!({ "error": code, "message": message }))).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

async fn models(State(gw): State<Arc<Gateway>>) -> Json<Models> {
    Json(Models {
        models: gw.model_names(),
    })
}

async fn create(
    State(gw): State<Arc<Gateway>>,
    body: Result<Json<CreateSession>, JsonRejection>,
) -> Result<(StatusCode, Json<SessionCreated>), ApiError> {
    let Json(body) = body?;
    Ok((StatusCode::CREATED, Json(gw.create_session(&body.model)?)))
}

async fn query(
    State(gw): State<Arc<Gateway>>,
    Path(id): Path<String>,
    body: Result<Json<QueryBody>, JsonRejection>,
) -> ApiResult<QueryResponse> {
    let Json(body) = body?;
    Ok(Json(gw.query(&id, &body.text).await?))
}

async fn select(
    State(gw): State<Arc<Gateway>>,
    Path(id): Path<String>,
    body: Result<Json<SelectBody>, JsonRejection>,
) -> ApiResult<SelectResponse> {
    let Json(body) = body?;
    Ok(Json(gw.select(&id, body.index).await?))
}

async fn state(State(gw): State<Arc<Gateway>>, Path(id): Path<String>) -> ApiResult<StateSnapshot> {
    Ok(Json(gw.state(&id)?))
}

async fn speech_complete(
    State(gw): State<Arc<Gateway>>,
    Path(id): Path<String>,
) -> ApiResult<SpeechCompleteResponse> {
    Ok(Json(gw.speech_complete(&id).await?))
}

pub fn router(gateway: Arc<Gateway>) -> Router {
    Router::new()
        .route("/models", get(models))
        .route("/sessions", post(create))
        .route("/sessions/{id}/query", post(query))
        .route("/sessions/{id}/select", post(select))
        .route("/sessions/{id}/state", get(state))
        .route("/sessions/{id}/speech-complete", post(speech_complete))
        .with_state(gateway)
}
