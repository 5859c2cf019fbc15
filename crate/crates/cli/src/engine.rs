//! Request building shared by the command line and the HTTP service, so both
//! paths hand the synthesizer identical requests.

use std::fs;
use std::path::Path;

use dsi_core::catalog::Catalog;
use dsi_core::dsbk::{build_library, builtin_domain, parse_manifest, DsbkError, Library};
use dsi_core::synth::{
    synthesize_with, EnumOptions, RequestError, SpaceCache, SynthesisRequest, SynthesisResult,
};
use dsi_core::term::{apply_program, EvalBudget, FillResult, Program};

pub const DEFAULT_D_MAX: u32 = 4;
pub const DEFAULT_BUDGET_MS: u64 = 120_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("unknown domain `{0}`")]
    UnknownDomain(String),
    #[error("{path}: {source}")]
    Manifest { path: String, source: DsbkError },
    #[error("{path}: {reason}")]
    Io { path: String, reason: String },
    #[error(transparent)]
    Request(#[from] RequestError),
}

pub fn builtin_library(name: &str) -> Result<Library, EngineError> {
    builtin_domain(name).map_err(|_| EngineError::UnknownDomain(name.to_string()))
}

pub fn library_from_text(text: &str) -> Result<Library, DsbkError> {
    build_library(&parse_manifest(text)?, &Catalog::builtin())
}

pub fn library_from_file(path: &Path) -> Result<Library, EngineError> {
    let text = fs::read_to_string(path).map_err(|e| EngineError::Io {
        path: path.display().to_string(),
        reason: e.to_string(),
    })?;
    library_from_text(&text).map_err(|source| EngineError::Manifest {
        path: path.display().to_string(),
        source,
    })
}

/// Knobs a caller may set; anything left `None` takes the request default.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Limits {
    pub d_max: Option<u32>,
    pub budget_ms: Option<u64>,
    pub max_returned: Option<usize>,
    pub max_candidates: Option<u64>,
}

pub fn request(
    library: Library,
    examples: Vec<(String, String)>,
    limits: &Limits,
) -> SynthesisRequest {
    let mut req = SynthesisRequest::new(library, examples);
    req.d_max = limits.d_max.unwrap_or(DEFAULT_D_MAX);
    req.budget_ms = limits.budget_ms.unwrap_or(DEFAULT_BUDGET_MS);
    if let Some(m) = limits.max_returned {
        req.max_returned = m;
    }
    req.enum_options = EnumOptions {
        max_candidates: limits.max_candidates,
        ..EnumOptions::default()
    };
    req
}

pub fn run(req: &SynthesisRequest, cache: &SpaceCache) -> Result<SynthesisResult, EngineError> {
    Ok(synthesize_with(req, cache)?)
}

pub fn fill<S: AsRef<str>>(program: &Program, inputs: &[S], fuel: u64) -> Vec<FillResult> {
    apply_program(program, inputs, EvalBudget::new(fuel))
}

/// Leading rows with a non-empty expected output count as examples.
pub fn infer_n(rows: &[(String, String)]) -> usize {
    rows.iter().take_while(|(_, y)| !y.is_empty()).count()
}
