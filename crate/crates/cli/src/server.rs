//! JSON service over the synthesizer, backing the spreadsheet UI.

use std::collections::BTreeMap;
use std::net::{IpAddr, Ipv4Addr, SocketAddr};
use std::num::NonZeroUsize;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock};

use axum::extract::rejection::JsonRejection;
use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{Html, IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use dsi_bench::load_suite;
use dsi_core::dsbk::{builtin_domains, describe_domain, DsbkError, Library, BUILTIN_DOMAINS};
use dsi_core::synth::{SpaceCache, SynthesisResult};
use dsi_core::term::{FillResult, Program, DEFAULT_FUEL};
use lru::LruCache;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tower_http::services::ServeDir;

use crate::engine::{self, EngineError, Limits};

pub const API_VERSION: u32 = 1;
pub const PROGRAM_TABLE_CAPACITY: usize = 4096;
pub const MAX_RETURNED_LIMIT: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ServiceConfig {
    pub bind: IpAddr,
    pub port: u16,
    pub d_max: u32,
    pub budget_ms: u64,
    pub max_candidates: Option<u64>,
    pub suite_dir: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
    pub static_dir: Option<PathBuf>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            bind: IpAddr::V4(Ipv4Addr::LOCALHOST),
            port: 8080,
            d_max: engine::DEFAULT_D_MAX,
            budget_ms: engine::DEFAULT_BUDGET_MS,
            max_candidates: None,
            suite_dir: None,
            cache_dir: None,
            static_dir: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("port must be in 1-65535")]
    Port,
    #[error("{0} must be positive")]
    Budget(&'static str),
}

impl ServiceConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.port == 0 {
            return Err(ConfigError::Port);
        }
        if self.d_max == 0 {
            return Err(ConfigError::Budget("d_max"));
        }
        if self.budget_ms == 0 {
            return Err(ConfigError::Budget("budget_ms"));
        }
        if self.max_candidates == Some(0) {
            return Err(ConfigError::Budget("max_candidates"));
        }
        Ok(())
    }

    pub fn addr(&self) -> SocketAddr {
        SocketAddr::new(self.bind, self.port)
    }
}

pub struct AppState {
    config: ServiceConfig,
    cache: SpaceCache,
    custom: RwLock<BTreeMap<String, Library>>,
    programs: Mutex<LruCache<String, Program>>,
    next_id: AtomicU64,
}

impl AppState {
    pub fn new(config: ServiceConfig) -> std::io::Result<AppState> {
        let cache = match &config.cache_dir {
            Some(dir) => SpaceCache::with_dir(dir).map_err(std::io::Error::other)?,
            None => SpaceCache::new(),
        };
        Ok(AppState {
            config,
            cache,
            custom: RwLock::new(BTreeMap::new()),
            programs: Mutex::new(LruCache::new(
                NonZeroUsize::new(PROGRAM_TABLE_CAPACITY).expect("nonzero"),
            )),
            next_id: AtomicU64::new(1),
        })
    }

    fn library(&self, name: &str) -> Result<Library, ApiError> {
        if let Some(lib) = self.custom.read().expect("lock").get(name) {
            return Ok(lib.clone());
        }
        engine::builtin_library(name).map_err(|e| {
            ApiError::new(
                StatusCode::UNPROCESSABLE_ENTITY,
                "unknown_domain",
                e.to_string(),
            )
        })
    }

    fn remember(&self, program: &Program) -> String {
        let id = format!("p{:x}", self.next_id.fetch_add(1, Ordering::Relaxed));
        self.programs
            .lock()
            .expect("lock")
            .put(id.clone(), program.clone());
        id
    }

    fn recall(&self, id: Option<&str>, rendering: Option<&str>) -> Option<Program> {
        let mut table = self.programs.lock().expect("lock");
        if let Some(id) = id {
            return table.get(id).cloned();
        }
        let rendering = rendering?;
        table
            .iter()
            .find(|(_, p)| p.rendering() == rendering)
            .map(|(_, p)| p.clone())
    }
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    code: &'static str,
    message: String,
    detail: Value,
}

impl ApiError {
    fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> ApiError {
        ApiError {
            status,
            code,
            message: message.into(),
            detail: Value::Null,
        }
    }

    fn bad_request(message: impl Into<String>) -> ApiError {
        ApiError::new(StatusCode::BAD_REQUEST, "bad_request", message)
    }

    fn with_detail(mut self, detail: Value) -> ApiError {
        self.detail = detail;
        self
    }
}

impl From<JsonRejection> for ApiError {
    fn from(r: JsonRejection) -> ApiError {
        ApiError::bad_request(r.body_text())
    }
}

fn manifest_error(e: DsbkError) -> ApiError {
    let detail = match &e {
        DsbkError::Parse { line, .. } => json!({ "line": line }),
        _ => Value::Null,
    };
    ApiError::new(
        StatusCode::UNPROCESSABLE_ENTITY,
        "manifest_error",
        e.to_string(),
    )
    .with_detail(detail)
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = json!({ "error": { "code": self.code, "message": self.message, "detail": self.detail } });
        (self.status, Json(body)).into_response()
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct ApiSynthesizeRequest {
    pub domain: Option<String>,
    /// Inline manifest text, used instead of `domain`.
    pub manifest: Option<String>,
    pub examples: Vec<(String, String)>,
    pub d_max: Option<u32>,
    pub budget_ms: Option<u64>,
    pub max_returned: Option<usize>,
    #[serde(default)]
    pub extra_inputs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApiProgram {
    pub id: String,
    pub rendering: String,
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApiStats {
    pub enumerated_count: u64,
    pub evaluated_count: u64,
    pub elapsed_ms: u64,
    pub timed_out: bool,
    pub partial_space: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApiSynthesizeResponse {
    pub version: u32,
    pub programs: Vec<ApiProgram>,
    /// Top program applied to `extra_inputs`; `null` where it failed.
    pub fills: Vec<Option<String>>,
    pub fill_errors: Vec<Option<String>>,
    pub stats: ApiStats,
    pub timed_out: bool,
}

#[derive(Debug, Clone, Deserialize)]
pub struct ApiApplyRequest {
    pub program_id: Option<String>,
    pub rendering: Option<String>,
    pub inputs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApiApplyResponse {
    pub fills: Vec<Option<String>>,
    pub fill_errors: Vec<Option<String>>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct ApiManifestRequest {
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApiDomain {
    pub name: String,
    pub breadth: usize,
    pub description: String,
}

fn split_fills(fills: Vec<FillResult>) -> (Vec<Option<String>>, Vec<Option<String>>) {
    fills
        .into_iter()
        .map(|f| match f {
            FillResult::Ok(s) => (Some(s), None),
            FillResult::Failed(e) => (None, Some(e.to_string())),
        })
        .unzip()
}

fn respond(
    state: &AppState,
    result: SynthesisResult,
    extra: &[String],
    fuel: u64,
) -> ApiSynthesizeResponse {
    let programs = result
        .programs
        .iter()
        .map(|p| ApiProgram {
            id: state.remember(p),
            rendering: p.rendering().to_string(),
            depth: p.depth(),
        })
        .collect();
    let (fills, fill_errors) = match result.best() {
        Some(p) => split_fills(engine::fill(p, extra, fuel)),
        None => (Vec::new(), Vec::new()),
    };
    let s = result.stats;
    ApiSynthesizeResponse {
        version: API_VERSION,
        programs,
        fills,
        fill_errors,
        timed_out: s.timed_out,
        stats: ApiStats {
            enumerated_count: s.enumerated_count,
            evaluated_count: s.evaluated_count,
            elapsed_ms: s.elapsed_ms,
            timed_out: s.timed_out,
            partial_space: s.partial_space,
        },
    }
}

async fn synthesize(
    State(state): State<Arc<AppState>>,
    body: Result<Json<ApiSynthesizeRequest>, JsonRejection>,
) -> Result<Json<ApiSynthesizeResponse>, ApiError> {
    let Json(body) = body?;
    if body.examples.is_empty() {
        return Err(ApiError::bad_request("at least one example is required"));
    }
    if body.d_max == Some(0) || body.budget_ms == Some(0) || body.max_returned == Some(0) {
        return Err(ApiError::bad_request(
            "d_max, budget_ms and max_returned must be positive",
        ));
    }
    if body.max_returned.is_some_and(|m| m > MAX_RETURNED_LIMIT) {
        return Err(ApiError::bad_request(format!(
            "max_returned is capped at {MAX_RETURNED_LIMIT}"
        )));
    }
    let library = match (&body.domain, &body.manifest) {
        (_, Some(text)) => engine::library_from_text(text).map_err(manifest_error)?,
        (Some(name), None) => state.library(name)?,
        (None, None) => {
            return Err(ApiError::bad_request(
                "either `domain` or `manifest` is required",
            ))
        }
    };
    let limits = Limits {
        d_max: Some(body.d_max.unwrap_or(state.config.d_max)),
        budget_ms: Some(body.budget_ms.unwrap_or(state.config.budget_ms)),
        max_returned: body.max_returned,
        max_candidates: state.config.max_candidates,
    };
    let req = engine::request(library, body.examples, &limits);
    let worker = state.clone();
    let result = tokio::task::spawn_blocking(move || {
        engine::run(&req, &worker.cache).map(|r| (r, req.fuel))
    })
    .await
    .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string()))?;
    let (result, fuel) = result.map_err(|e| match e {
        EngineError::Request(r) => ApiError::bad_request(r.to_string()),
        other => ApiError::new(
            StatusCode::UNPROCESSABLE_ENTITY,
            "synthesis_error",
            other.to_string(),
        ),
    })?;
    Ok(Json(respond(&state, result, &body.extra_inputs, fuel)))
}

async fn apply(
    State(state): State<Arc<AppState>>,
    body: Result<Json<ApiApplyRequest>, JsonRejection>,
) -> Result<Json<ApiApplyResponse>, ApiError> {
    let Json(body) = body?;
    if body.program_id.is_none() && body.rendering.is_none() {
        return Err(ApiError::bad_request("`program_id` is required"));
    }
    let program = state
        .recall(body.program_id.as_deref(), body.rendering.as_deref())
        .ok_or_else(|| {
            ApiError::new(
                StatusCode::NOT_FOUND,
                "unknown_program",
                "no such program in this session",
            )
        })?;
    let (fills, fill_errors) = split_fills(engine::fill(&program, &body.inputs, DEFAULT_FUEL));
    Ok(Json(ApiApplyResponse { fills, fill_errors }))
}

async fn domains(State(state): State<Arc<AppState>>) -> Json<Vec<ApiDomain>> {
    let mut out: Vec<ApiDomain> = builtin_domains()
        .iter()
        .map(|l| ApiDomain {
            name: l.name().to_string(),
            breadth: l.breadth(),
            description: describe_domain(l.name()).to_string(),
        })
        .collect();
    out.extend(
        state
            .custom
            .read()
            .expect("lock")
            .values()
            .map(|l| ApiDomain {
                name: l.name().to_string(),
                breadth: l.breadth(),
                description: describe_domain(l.name()).to_string(),
            }),
    );
    Json(out)
}

async fn manifests(
    State(state): State<Arc<AppState>>,
    body: Result<Json<ApiManifestRequest>, JsonRejection>,
) -> Result<(StatusCode, Json<ApiDomain>), ApiError> {
    let Json(body) = body?;
    let lib = engine::library_from_text(&body.text).map_err(manifest_error)?;
    if BUILTIN_DOMAINS.contains(&lib.name()) {
        return Err(ApiError::new(
            StatusCode::UNPROCESSABLE_ENTITY,
            "reserved_name",
            format!("`{}` is a builtin domain", lib.name()),
        ));
    }
    let domain = ApiDomain {
        name: lib.name().to_string(),
        breadth: lib.breadth(),
        description: describe_domain(lib.name()).to_string(),
    };
    state
        .custom
        .write()
        .expect("lock")
        .insert(domain.name.clone(), lib);
    Ok((StatusCode::CREATED, Json(domain)))
}

async fn datasets(State(state): State<Arc<AppState>>) -> Result<Json<Value>, ApiError> {
    let Some(dir) = state.config.suite_dir.clone() else {
        return Ok(Json(json!([])));
    };
    let suite = tokio::task::spawn_blocking(move || load_suite(dir))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string()))?
        .map_err(|e| {
            ApiError::new(
                StatusCode::INTERNAL_SERVER_ERROR,
                "suite_error",
                e.to_string(),
            )
        })?;
    let list: Vec<Value> = suite
        .iter()
        .map(|d| json!({ "id": d.id, "domain": d.domain, "description": d.description, "rows": d.rows }))
        .collect();
    Ok(Json(Value::Array(list)))
}

async fn health() -> Json<Value> {
    Json(json!({ "status": "ok", "version": env!("CARGO_PKG_VERSION"), "api": API_VERSION }))
}

async fn api_not_found() -> ApiError {
    ApiError::new(StatusCode::NOT_FOUND, "not_found", "no such endpoint")
}

const PLACEHOLDER: &str = "<!doctype html><title>dsi</title><p>The UI bundle is not installed. \
The JSON API is served under <code>/api</code>.</p>";

pub fn router(state: Arc<AppState>) -> Router {
    let api = Router::new()
        .route("/synthesize", post(synthesize))
        .route("/apply", post(apply))
        .route("/manifests", post(manifests))
        .route("/domains", get(domains))
        .route("/datasets", get(datasets))
        .route("/health", get(health))
        .fallback(api_not_found);
    let app = Router::new().nest("/api", api);
    let app = match &state.config.static_dir {
        Some(dir) => app.fallback_service(ServeDir::new(dir)),
        None => app.route("/", get(|| async { Html(PLACEHOLDER) })),
    };
    app.with_state(state)
}

pub async fn serve(config: ServiceConfig) -> std::io::Result<()> {
    config.validate().map_err(std::io::Error::other)?;
    let addr = config.addr();
    let state = Arc::new(AppState::new(config)?);
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
