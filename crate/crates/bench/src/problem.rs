use std::time::Instant;

use dsi_core::dsbk::Library;
use dsi_core::par::Parallelism;
use dsi_core::synth::{synthesize_with, SpaceCache, SynthesisRequest};
use dsi_core::term::{apply_program, EvalBudget, FillResult, Program, DEFAULT_FUEL};

use crate::dataset::Dataset;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{fills} fills for {expected} expected outputs")]
pub struct LengthMismatch {
    pub fills: usize,
    pub expected: usize,
}

/// Fraction of fills equal to their expected text. An empty list scores 0.
pub fn accuracy<S: AsRef<str>>(
    fills: &[FillResult],
    expected: &[S],
) -> Result<f64, LengthMismatch> {
    if fills.len() != expected.len() {
        return Err(LengthMismatch {
            fills: fills.len(),
            expected: expected.len(),
        });
    }
    if fills.is_empty() {
        return Ok(0.0);
    }
    let correct = fills
        .iter()
        .zip(expected)
        .filter(|(f, y)| f.text() == Some(y.as_ref()))
        .count();
    Ok(correct as f64 / fills.len() as f64)
}

/// Two-decimal rendering used in reports.
pub fn format_accuracy(a: f64) -> String {
    format!("{a:.2}")
}

/// Settings shared by every cell of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunConfig {
    pub n: usize,
    pub d_max: u32,
    pub budget_ms: u64,
    pub fuel: u64,
    pub parallelism: Parallelism,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n: 1,
            d_max: 4,
            budget_ms: 120_000,
            fuel: DEFAULT_FUEL,
            parallelism: Parallelism::Parallel,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemResult {
    pub dataset_id: u32,
    pub library: String,
    pub program: Option<Program>,
    /// One fill per held-out row.
    pub fills: Vec<FillResult>,
    pub accuracy: f64,
    pub timed_out: bool,
    pub elapsed_ms: u64,
    pub diagnostics: Vec<String>,
}

impl ProblemResult {
    fn empty(ds: &Dataset, lib: &Library, diag: String) -> ProblemResult {
        ProblemResult {
            dataset_id: ds.id,
            library: lib.name().to_string(),
            program: None,
            fills: Vec::new(),
            accuracy: 0.0,
            timed_out: false,
            elapsed_ms: 0,
            diagnostics: vec![diag],
        }
    }
}

pub fn run_problem(
    dataset: &Dataset,
    library: &Library,
    n: usize,
    d_max: u32,
    budget_ms: u64,
) -> ProblemResult {
    let config = RunConfig {
        n,
        d_max,
        budget_ms,
        ..RunConfig::default()
    };
    run_problem_with(dataset, library, &config, SpaceCache::global())
}

/// Synthesizes from the first `config.n` rows and scores the top program
/// on the rest.
pub fn run_problem_with(
    dataset: &Dataset,
    library: &Library,
    config: &RunConfig,
    cache: &SpaceCache,
) -> ProblemResult {
    let n = config.n;
    if n == 0 || n >= dataset.rows.len() {
        return ProblemResult::empty(
            dataset,
            library,
            format!(
                "n = {n} leaves no held-out rows among {}",
                dataset.rows.len()
            ),
        );
    }
    let start = Instant::now();
    let mut req = SynthesisRequest::new(library.clone(), dataset.examples(n).to_vec());
    req.d_max = config.d_max;
    req.budget_ms = config.budget_ms;
    req.max_returned = 1;
    req.fuel = config.fuel;
    req.parallelism = config.parallelism;
    let result = match synthesize_with(&req, cache) {
        Ok(r) => r,
        Err(e) => return ProblemResult::empty(dataset, library, e.to_string()),
    };
    let held: Vec<&str> = dataset
        .held_out(n)
        .iter()
        .map(|(x, _)| x.as_str())
        .collect();
    let expected: Vec<&str> = dataset
        .held_out(n)
        .iter()
        .map(|(_, y)| y.as_str())
        .collect();
    let mut out = ProblemResult {
        dataset_id: dataset.id,
        library: library.name().to_string(),
        program: result.programs.first().cloned(),
        fills: Vec::new(),
        accuracy: 0.0,
        timed_out: result.stats.timed_out,
        elapsed_ms: 0,
        diagnostics: Vec::new(),
    };
    match &out.program {
        Some(p) => {
            out.fills = apply_program(p, &held, EvalBudget::new(config.fuel));
            out.accuracy = accuracy(&out.fills, &expected).unwrap_or(0.0);
        }
        None if result.stats.timed_out => out.diagnostics.push("timed out".into()),
        None => out.diagnostics.push("no consistent program".into()),
    }
    if result.stats.partial_space {
        out.diagnostics.push("candidate space is partial".into());
    }
    out.elapsed_ms = start.elapsed().as_millis() as u64;
    out
}
