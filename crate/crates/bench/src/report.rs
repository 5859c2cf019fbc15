use std::path::Path;

use dsi_core::dsbk::Library;
use dsi_core::par;
use dsi_core::synth::SpaceCache;

use crate::dataset::{load_suite, Dataset, FormatError};
use crate::problem::{format_accuracy, run_problem_with, ProblemResult, RunConfig};

/// Accuracy matrix over datasets and libraries.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub config: RunConfig,
    pub datasets: Vec<(u32, String)>,
    pub libraries: Vec<String>,
    /// `cells[row][col]`, rows in dataset order, columns in library order.
    pub cells: Vec<Vec<ProblemResult>>,
}

impl Report {
    pub fn accuracy(&self, row: usize, col: usize) -> f64 {
        self.cells[row][col].accuracy
    }

    pub fn matrix(&self) -> Matrix {
        Matrix {
            datasets: self.datasets.iter().map(|(id, _)| *id).collect(),
            libraries: self.libraries.clone(),
            values: self
                .cells
                .iter()
                .map(|r| r.iter().map(|c| c.accuracy).collect())
                .collect(),
        }
    }

    pub fn column(&self, library: &str) -> Option<usize> {
        self.libraries.iter().position(|l| l == library)
    }
}

/// The numeric part of a report, as stored in CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    pub datasets: Vec<u32>,
    pub libraries: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

/// Runs every dataset against every library. Cells are independent and may
/// run in parallel; the report keeps dataset and library order.
pub fn run_datasets(
    datasets: &[Dataset],
    libraries: &[Library],
    config: &RunConfig,
    cache: &SpaceCache,
) -> Report {
    let jobs: Vec<(usize, usize)> = (0..datasets.len())
        .flat_map(|r| (0..libraries.len()).map(move |c| (r, c)))
        .collect();
    let results = par::map_items(config.parallelism, jobs, |(r, c)| {
        run_problem_with(&datasets[r], &libraries[c], config, cache)
    });
    let mut cells: Vec<Vec<ProblemResult>> = Vec::with_capacity(datasets.len());
    let mut it = results.into_iter();
    for _ in datasets {
        cells.push(it.by_ref().take(libraries.len()).collect());
    }
    Report {
        config: *config,
        datasets: datasets.iter().map(|d| (d.id, d.domain.clone())).collect(),
        libraries: libraries.iter().map(|l| l.name().to_string()).collect(),
        cells,
    }
}

pub fn run_benchmark(
    suite_dir: impl AsRef<Path>,
    libraries: &[Library],
    config: &RunConfig,
) -> Result<Report, FormatError> {
    let datasets = load_suite(suite_dir)?;
    Ok(run_datasets(
        &datasets,
        libraries,
        config,
        SpaceCache::global(),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Csv,
}

pub fn render_report(report: &Report, format: ReportFormat) -> String {
    match format {
        ReportFormat::Csv => render_csv(&report.matrix()),
        ReportFormat::Text => render_text(report),
    }
}

pub fn render_csv(m: &Matrix) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["dataset".to_string()];
    header.extend(m.libraries.iter().cloned());
    w.write_record(&header).expect("in-memory write");
    for (id, row) in m.datasets.iter().zip(&m.values) {
        let mut rec = vec![id.to_string()];
        rec.extend(row.iter().map(|v| v.to_string()));
        w.write_record(&rec).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn render_text(report: &Report) -> String {
    let mut out = format!(
        "d_max={} n={} budget_ms={}\n",
        report.config.d_max, report.config.n, report.config.budget_ms
    );
    let domain_w = report
        .datasets
        .iter()
        .map(|(_, d)| d.len())
        .max()
        .unwrap_or(0)
        .max("domain".len());
    let widths: Vec<usize> = report.libraries.iter().map(|l| l.len().max(4)).collect();
    out.push_str(&format!("{:>4}  {:<domain_w$}", "id", "domain"));
    for (l, w) in report.libraries.iter().zip(&widths) {
        out.push_str(&format!("  {l:>w$}"));
    }
    out.push('\n');
    for ((id, domain), row) in report.datasets.iter().zip(&report.cells) {
        out.push_str(&format!("{id:>4}  {domain:<domain_w$}"));
        for (cell, w) in row.iter().zip(&widths) {
            out.push_str(&format!("  {:>w$}", format_accuracy(cell.accuracy)));
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("report csv line {line}: {reason}")]
pub struct ReportParseError {
    pub line: u64,
    pub reason: String,
}

pub fn parse_report_csv(text: &str) -> Result<Matrix, ReportParseError> {
    let err = |line: u64, reason: String| ReportParseError { line, reason };
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(|e| err(1, e.to_string()))?.clone();
    if headers.get(0) != Some("dataset") {
        return Err(err(1, "first column must be `dataset`".into()));
    }
    let libraries: Vec<String> = headers.iter().skip(1).map(str::to_string).collect();
    let mut datasets = Vec::new();
    let mut values = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| err(e.position().map_or(0, |p| p.line()), e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != libraries.len() + 1 {
            return Err(err(
                line,
                format!("expected {} fields", libraries.len() + 1),
            ));
        }
        datasets.push(
            rec[0]
                .parse()
                .map_err(|_| err(line, format!("bad id `{}`", &rec[0])))?,
        );
        let row = rec
            .iter()
            .skip(1)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| err(line, format!("bad value `{v}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        values.push(row);
    }
    Ok(Matrix {
        datasets,
        libraries,
        values,
    })
}
