//! Two-phase search: enumerate every canonical candidate up to a depth
//! bound, then keep the ones consistent with the examples.

mod cache;
mod memo;
mod persist;
mod select;
mod space;

use std::time::{Duration, Instant};

use crate::dsbk::Library;
use crate::par::Parallelism;
use crate::term::{Program, Ty, DEFAULT_FUEL};

pub use cache::{CacheError, SpaceCache};
pub use persist::{decode_space, encode_space, PersistError, FORMAT_VERSION};
pub use select::{select, SelectOptions};
pub use space::{enumerate, enumerate_with, CandidateSpace, EnumError, EnumOptions};

/// Default number of programs returned per request.
pub const DEFAULT_MAX_RETURNED: usize = 10;

/// `Text -> Text`, the type of every synthesized program.
pub fn program_type() -> Ty {
    Ty::func(Ty::Text, Ty::Text)
}

#[derive(Debug, Clone)]
pub struct SynthesisRequest {
    pub library: Library,
    pub examples: Vec<(String, String)>,
    pub d_max: u32,
    pub budget_ms: u64,
    pub max_returned: usize,
    pub fuel: u64,
    pub parallelism: Parallelism,
    pub enum_options: EnumOptions,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RequestError {
    #[error("at least one example is required")]
    NoExamples,
    #[error("d_max must be at least 1")]
    ZeroDepth,
    #[error("budget_ms must be positive")]
    ZeroBudget,
}

impl SynthesisRequest {
    pub fn new(library: Library, examples: Vec<(String, String)>) -> SynthesisRequest {
        SynthesisRequest {
            library,
            examples,
            d_max: 4,
            budget_ms: 120_000,
            max_returned: DEFAULT_MAX_RETURNED,
            fuel: DEFAULT_FUEL,
            parallelism: Parallelism::Parallel,
            enum_options: EnumOptions::default(),
        }
    }

    pub fn n(&self) -> usize {
        self.examples.len()
    }

    pub fn validate(&self) -> Result<(), RequestError> {
        if self.examples.is_empty() {
            return Err(RequestError::NoExamples);
        }
        if self.d_max == 0 {
            return Err(RequestError::ZeroDepth);
        }
        if self.budget_ms == 0 {
            return Err(RequestError::ZeroBudget);
        }
        Ok(())
    }

    pub fn select_options(&self) -> SelectOptions {
        SelectOptions {
            budget: Duration::from_millis(self.budget_ms),
            max_returned: self.max_returned,
            fuel: self.fuel,
            parallelism: self.parallelism,
        }
    }
}

/// Position of a returned program in the candidate space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Found {
    pub depth: usize,
    pub index: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Stats {
    pub enumerated_count: u64,
    pub evaluated_count: u64,
    pub elapsed_ms: u64,
    pub timed_out: bool,
    /// Generation stopped early at its candidate budget.
    pub partial_space: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthesisResult {
    pub programs: Vec<Program>,
    pub found: Vec<Found>,
    pub stats: Stats,
}

impl SynthesisResult {
    pub fn best(&self) -> Option<&Program> {
        self.programs.first()
    }
}

/// Runs both phases, reusing spaces from the process-wide cache.
pub fn synthesize(req: &SynthesisRequest) -> Result<SynthesisResult, RequestError> {
    synthesize_with(req, SpaceCache::global())
}

pub fn synthesize_with(
    req: &SynthesisRequest,
    cache: &SpaceCache,
) -> Result<SynthesisResult, RequestError> {
    req.validate()?;
    let start = Instant::now();
    let space =
        match cache.get_or_build(&req.library, &program_type(), req.d_max, &req.enum_options) {
            Ok(s) => s,
            Err(EnumError::BudgetExceeded { partial, .. }) => std::sync::Arc::new(*partial),
            Err(EnumError::ZeroDepth) => return Err(RequestError::ZeroDepth),
            Err(EnumError::UnsupportedPrim(_)) => {
                return Ok(SynthesisResult {
                    programs: Vec::new(),
                    found: Vec::new(),
                    stats: Stats {
                        elapsed_ms: start.elapsed().as_millis() as u64,
                        ..Stats::default()
                    },
                })
            }
        };
    let mut opts = req.select_options();
    opts.budget = opts.budget.saturating_sub(start.elapsed());
    let mut result = select(&space, &req.examples, &opts);
    result.stats.partial_space = space.is_partial();
    result.stats.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(result)
}
