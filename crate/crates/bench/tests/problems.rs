use std::path::Path;

use dsi_bench::{
    accuracy, format_accuracy, parse_report_csv, render_csv, render_report, run_datasets,
    run_problem_with, Dataset, LengthMismatch, Matrix, ReportFormat, RunConfig,
};
use dsi_core::dsbk::{builtin_domain, builtin_domains};
use dsi_core::synth::SpaceCache;
use dsi_core::term::{EvalError, FillResult};
use proptest::prelude::*;

fn ok(s: &str) -> FillResult {
    FillResult::Ok(s.to_string())
}

#[test]
fn ten_of_eleven_renders_as_0_91() {
    let expected: Vec<String> = (0..11).map(|i| i.to_string()).collect();
    let mut fills: Vec<FillResult> = expected.iter().map(|s| ok(s)).collect();
    fills[4] = ok("wrong");
    let a = accuracy(&fills, &expected).unwrap();
    assert_eq!(a, 10.0 / 11.0);
    assert_eq!(format_accuracy(a), "0.91");
}

#[test]
fn failures_count_as_misses_and_lengths_must_agree() {
    let fills = vec![ok("a"), FillResult::Failed(EvalError::FuelExhausted)];
    assert_eq!(accuracy(&fills, &["a", "b"]).unwrap(), 0.5);
    assert_eq!(
        accuracy(&fills, &["a"]),
        Err(LengthMismatch {
            fills: 2,
            expected: 1
        })
    );
    assert_eq!(accuracy::<&str>(&[], &[]).unwrap(), 0.0);
}

proptest! {
    #[test]
    fn accuracy_is_the_fraction_of_exact_matches(rows in proptest::collection::vec(("[ab]{0,2}", "[ab]{0,2}"), 1..40)) {
        let fills: Vec<FillResult> = rows.iter().map(|(f, _)| ok(f)).collect();
        let expected: Vec<&str> = rows.iter().map(|(_, y)| y.as_str()).collect();
        let correct = rows.iter().filter(|(f, y)| f == y).count();
        let a = accuracy(&fills, &expected).unwrap();
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert_eq!(a, correct as f64 / rows.len() as f64);
    }

    #[test]
    fn report_csv_round_trips(values in proptest::collection::vec(proptest::collection::vec(0u32..=11, 3), 1..6)) {
        let m = Matrix {
            datasets: (1..=values.len() as u32).collect(),
            libraries: vec!["dates".into(), "freetext".into(), "all".into()],
            values: values.iter().map(|r| r.iter().map(|&c| c as f64 / 11.0).collect()).collect(),
        };
        prop_assert_eq!(parse_report_csv(&render_csv(&m)).unwrap(), m);
    }
}

#[test]
fn malformed_report_csv_is_rejected() {
    assert!(parse_report_csv("id,dates\n1,0.5\n").is_err());
    assert!(parse_report_csv("dataset,dates\n1,zero\n").is_err());
    assert!(parse_report_csv("dataset,dates\nx,0.5\n").is_err());
}

fn dataset(id: u32, domain: &str, rows: &[(&str, &str)]) -> Dataset {
    Dataset {
        id,
        domain: domain.into(),
        description: String::new(),
        rows: rows
            .iter()
            .map(|(x, y)| (x.to_string(), y.to_string()))
            .collect(),
    }
}

#[test]
fn a_phone_problem_scores_one_with_phones() {
    let ds = dataset(
        20,
        "phones",
        &[
            ("235-7654 & Taiwan", "(886) 235-7654"),
            ("17-455-81-39 & Spain", "(34) 17-455-81-39"),
            ("618-4390 & Panama", "(507) 618-4390"),
        ],
    );
    let r = run_problem_with(
        &ds,
        &builtin_domain("phones").unwrap(),
        &RunConfig::default(),
        &SpaceCache::new(),
    );
    assert_eq!(r.accuracy, 1.0);
    assert_eq!(r.fills.len(), 2);
    assert!(r.program.is_some());
    assert!(!r.timed_out);
}

#[test]
fn n_must_leave_held_out_rows() {
    let ds = dataset(1, "freetext", &[("a", "a"), ("b", "b")]);
    let lib = builtin_domain("default").unwrap();
    let config = RunConfig {
        n: 2,
        ..RunConfig::default()
    };
    let r = run_problem_with(&ds, &lib, &config, &SpaceCache::new());
    assert_eq!(r.accuracy, 0.0);
    assert!(r.program.is_none());
    assert_eq!(r.diagnostics.len(), 1);
}

#[test]
fn a_one_dataset_suite_gives_a_one_by_nine_report() {
    let ds = dataset(
        14,
        "emails",
        &[
            ("Nancy.FreeHafer@fourthcoffee.com", "fourthcoffee.com"),
            ("iabetrae@yahoo.es", "yahoo.es"),
            ("Sb.edhxo.sk8@hotmail.com", "hotmail.com"),
        ],
    );
    let config = RunConfig {
        d_max: 3,
        ..RunConfig::default()
    };
    let report = run_datasets(&[ds], &builtin_domains(), &config, &SpaceCache::new());
    let m = report.matrix();
    assert_eq!(m.values.len(), 1);
    assert_eq!(m.values[0].len(), 9);
    assert_eq!(report.accuracy(0, report.column("emails").unwrap()), 1.0);
    let csv = render_report(&report, ReportFormat::Csv);
    assert!(csv.starts_with("dataset,default,freetext,dates,emails,names,phones,times,units,all\n"));
    assert_eq!(parse_report_csv(&csv).unwrap(), m);
    let text = render_report(&report, ReportFormat::Text);
    assert!(text.starts_with("d_max=3 n=1 budget_ms=120000\n"));
    assert!(text.lines().nth(2).unwrap().contains("1.00"));
}

#[test]
fn the_suite_directory_must_exist() {
    assert!(dsi_bench::run_benchmark(
        Path::new("/no/such/suite"),
        &builtin_domains(),
        &RunConfig::default()
    )
    .is_err());
}
