//! Read-only HTTP view of an archive root.
//!
//! Every request opens a fresh snapshot of the archive, so responses follow
//! whatever the last writer committed and no state is shared between requests.

use std::collections::BTreeMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use corpus_forge::metadata::{build_header, catalog_record, Tier};
use corpus_forge::{Archive, Error, FormatTag};
use serde::{Deserialize, Serialize};

/// Response header naming the payload format of `/resources/{id}`.
pub const FORMAT_HEADER: &str = "x-format-tag";

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub bind: SocketAddr,
    pub root: PathBuf,
}

#[derive(Debug)]
pub enum ApiError {
    NotFound(String),
    Internal(String),
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownCorpus(_)
            | Error::UnknownLevel(_)
            | Error::UnknownResource(_)
            | Error::UnknownSubject(_) => ApiError::NotFound(e.to_string()),
            other => ApiError::Internal(other.to_string()),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, message) = match self {
            ApiError::NotFound(m) => (StatusCode::NOT_FOUND, m),
            ApiError::Internal(m) => (StatusCode::INTERNAL_SERVER_ERROR, m),
        };
        (status, Json(serde_json::json!({ "error": message }))).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusSummary {
    pub id: String,
    pub title: String,
    pub languages: Vec<String>,
    pub levels: usize,
    pub materialized_levels: usize,
    pub resources: usize,
    pub href: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusList {
    pub total: usize,
    pub offset: usize,
    pub corpora: Vec<CorpusSummary>,
}

#[derive(Debug, Default, Deserialize)]
pub struct Page {
    #[serde(default)]
    pub offset: usize,
}

#[derive(Clone)]
struct AppState {
    root: Arc<PathBuf>,
}

impl AppState {
    /// Opens a snapshot off the async runtime and runs `f` on it.
    async fn read<T, F>(&self, f: F) -> ApiResult<T>
    where
        T: Send + 'static,
        F: FnOnce(&Archive) -> ApiResult<T> + Send + 'static,
    {
        let root = self.root.clone();
        tokio::task::spawn_blocking(move || {
            let archive = Archive::open(root.as_path())?;
            f(&archive)
        })
        .await
        .map_err(|e| ApiError::Internal(e.to_string()))?
    }
}

pub fn router(root: impl Into<PathBuf>) -> Router {
    let state = AppState {
        root: Arc::new(root.into()),
    };
    Router::new()
        .route("/corpora", get(list_corpora))
        .route("/corpora/{id}", get(corpus_record))
        .route("/resources/{id}", get(resource_payload))
        .route("/resources/{id}/header", get(resource_header))
        .with_state(state)
}

pub fn summarize(archive: &Archive, offset: usize) -> corpus_forge::Result<CorpusList> {
    let mut corpora = Vec::new();
    for corpus in archive.corpora().skip(offset) {
        let levels: Vec<_> = archive.levels(&corpus.id)?.collect();
        let mut materialized = 0;
        for level in &levels {
            if archive.is_materialized(&level.id)? {
                materialized += 1;
            }
        }
        corpora.push(CorpusSummary {
            id: corpus.id.clone(),
            title: corpus.title.clone(),
            languages: corpus.languages.clone(),
            levels: levels.len(),
            materialized_levels: materialized,
            resources: archive.resources(&corpus.id)?.count(),
            href: format!("/corpora/{}", corpus.id),
        });
    }
    Ok(CorpusList {
        total: archive.corpora().count(),
        offset,
        corpora,
    })
}

async fn list_corpora(
    State(state): State<AppState>,
    Query(page): Query<Page>,
) -> ApiResult<Json<CorpusList>> {
    let list = state
        .read(move |a| summarize(a, page.offset).map_err(ApiError::from))
        .await?;
    Ok(Json(list))
}

async fn corpus_record(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> ApiResult<Response> {
    let record = state
        .read(move |a| catalog_record(a, &id).map_err(ApiError::from))
        .await?;
    Ok(Json(record).into_response())
}

fn media_type(format: FormatTag) -> &'static str {
    match format {
        FormatTag::TabularMorpho => "text/tab-separated-values; charset=utf-8",
        FormatTag::SyntaxTree | FormatTag::PlainText => "text/plain; charset=utf-8",
        FormatTag::Audio => "application/octet-stream",
        _ => "application/xml; charset=utf-8",
    }
}

async fn resource_payload(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> ApiResult<Response> {
    let (format, bytes) = state
        .read(move |a| {
            let resource = a.resource(&id)?;
            if !a.payload_exists(resource) {
                return Err(ApiError::NotFound(format!(
                    "payload of resource `{id}` is not available"
                )));
            }
            Ok((resource.format_tag, a.payload(&id)?))
        })
        .await?;
    Ok((
        [
            (
                header::CONTENT_TYPE,
                HeaderValue::from_static(media_type(format)),
            ),
            (
                header::HeaderName::from_static(FORMAT_HEADER),
                HeaderValue::from_static(format.name()),
            ),
        ],
        bytes,
    )
        .into_response())
}

async fn resource_header(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> ApiResult<Response> {
    let document = state
        .read(move |a| {
            a.resource(&id)?;
            match a.stored_header(&id)? {
                Some(bytes) => Ok(bytes),
                None => Ok(build_header(a, Tier::Resource, &id, &BTreeMap::new())?
                    .to_document()
                    .into_bytes()),
            }
        })
        .await?;
    Ok((
        [(header::CONTENT_TYPE, "application/xml; charset=utf-8")],
        document,
    )
        .into_response())
}

/// Binds `config.bind` and serves until ctrl-c.
pub async fn serve(config: ServiceConfig) -> std::io::Result<()> {
    Archive::open(&config.root).map_err(std::io::Error::other)?;
    let listener = tokio::net::TcpListener::bind(config.bind).await?;
    eprintln!("listening on {}", listener.local_addr()?);
    serve_on(listener, config.root, async {
        let _ = tokio::signal::ctrl_c().await;
    })
    .await
}

/// Serves `root` on an already bound listener until `shutdown` completes.
pub async fn serve_on(
    listener: tokio::net::TcpListener,
    root: PathBuf,
    shutdown: impl std::future::Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, router(root))
        .with_graceful_shutdown(shutdown)
        .await
}
