//! Benchmark harness: dataset files, per-problem runs and the accuracy
//! matrix across libraries.

pub mod dataset;
pub mod problem;
pub mod report;

pub use dataset::{
    id_from_file_name, load_dataset, load_suite, load_suite_manifest, parse_dataset, Dataset,
    FormatError, SuiteEntry, SUITE_MANIFEST,
};
pub use problem::{
    accuracy, format_accuracy, run_problem, run_problem_with, LengthMismatch, ProblemResult,
    RunConfig,
};
pub use report::{
    parse_report_csv, render_csv, render_report, run_benchmark, run_datasets, Matrix, Report,
    ReportFormat,
};
