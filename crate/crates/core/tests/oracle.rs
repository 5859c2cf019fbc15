mod common;

use std::collections::HashSet;

use common::{oracle_counts, oracle_select, oracle_space, toy, toy_library};
use dsi_core::synth::{enumerate, program_type, select, SelectOptions};
use dsi_core::term::Expr;

fn space_set(space: &dsi_core::synth::CandidateSpace) -> Vec<HashSet<Expr>> {
    let mut out = vec![HashSet::new(); space.counts().len()];
    for (d, e) in space.iter_exprs() {
        assert!(out[d].insert(e), "duplicate candidate at depth {d}");
    }
    out
}

#[test]
fn enumeration_matches_brute_force_for_small_libraries() {
    for b in 1..=6 {
        for d_max in 1..=3 {
            let lib = toy(b);
            let space = enumerate(&lib, &program_type(), d_max).unwrap();
            let oracle: Vec<HashSet<Expr>> = oracle_space(&lib, d_max as usize)
                .into_iter()
                .map(|v| v.into_iter().collect())
                .collect();
            assert_eq!(space_set(&space), oracle, "b={b} d_max={d_max}");
            assert_eq!(space.counts(), oracle_counts(&lib, d_max as usize));
        }
    }
}

#[test]
fn three_prim_toy_counts_are_frozen() {
    let lib = toy_library(&["reverse", "toUpper", "dash"]);
    let space = enumerate(&lib, &program_type(), 2).unwrap();
    assert_eq!(space.counts(), oracle_counts(&lib, 2));
    assert_eq!(space.counts(), vec![1, 3, 6]);
    let rendered: Vec<String> = space.iter_exprs().map(|(_, e)| e.render()).collect();
    assert_eq!(
        rendered,
        [
            "\\x -> x",
            "\\x -> reverse x",
            "\\x -> toUpper x",
            "\\x -> dash",
            "\\x -> reverse (reverse x)",
            "\\x -> reverse (toUpper x)",
            "\\x -> reverse dash",
            "\\x -> toUpper (reverse x)",
            "\\x -> toUpper (toUpper x)",
            "\\x -> toUpper dash",
        ]
    );
}

/// Per-depth counts of the toy family, b = 1..=6, as computed by the
/// brute-force generator.
const FAMILY_COUNTS: [[u64; 4]; 6] = [
    [1, 1, 1, 1],
    [1, 2, 4, 8],
    [1, 3, 6, 12],
    [1, 3, 6, 12],
    [1, 3, 7, 17],
    [1, 4, 17, 88],
];

#[test]
fn family_counts_are_frozen() {
    for b in 1..=6 {
        let lib = toy(b);
        assert_eq!(oracle_counts(&lib, 3), FAMILY_COUNTS[b - 1], "oracle b={b}");
        let space = enumerate(&lib, &program_type(), 3).unwrap();
        assert_eq!(space.counts(), FAMILY_COUNTS[b - 1], "enumerate b={b}");
    }
}

#[test]
fn counts_grow_with_breadth_and_depth() {
    let mut prev_b: Option<Vec<u64>> = None;
    for b in 1..=8 {
        let lib = toy(b);
        let mut prev_total = 0;
        let mut totals = Vec::new();
        for d_max in 1..=3 {
            let total = enumerate(&lib, &program_type(), d_max).unwrap().total();
            assert!(total >= prev_total, "b={b} d_max={d_max}");
            prev_total = total;
            totals.push(total);
        }
        if let Some(p) = &prev_b {
            assert!(totals.iter().zip(p).all(|(a, b)| a >= b), "b={b}");
        }
        prev_b = Some(totals);
    }
}

#[test]
fn depth_one_is_the_unary_prims_and_constants() {
    let lib = toy(4);
    let space = enumerate(&lib, &program_type(), 1).unwrap();
    let d1: Vec<String> = space
        .iter_exprs()
        .filter(|(d, _)| *d == 1)
        .map(|(_, e)| e.render())
        .collect();
    assert_eq!(d1, ["\\x -> reverse x", "\\x -> toUpper x", "\\x -> dash"]);
}

#[test]
fn selection_matches_brute_force_filtering() {
    let cases: [&[(&str, &str)]; 4] = [
        &[("ab1", "1ba")],
        &[("a1b2", "12")],
        &[("x-y", "X-Y")],
        &[("abc", "-"), ("", "-")],
    ];
    let opts = SelectOptions {
        max_returned: usize::MAX,
        ..SelectOptions::default()
    };
    for b in 1..=6 {
        for d_max in 1..=3 {
            let lib = toy(b);
            let space = enumerate(&lib, &program_type(), d_max).unwrap();
            for examples in cases {
                let owned: Vec<(String, String)> = examples
                    .iter()
                    .map(|(x, y)| (x.to_string(), y.to_string()))
                    .collect();
                let got = select(&space, &owned, &opts);
                assert!(!got.stats.timed_out);
                let got_set: HashSet<Expr> =
                    got.programs.iter().map(|p| p.expr().clone()).collect();
                assert_eq!(got_set.len(), got.programs.len());
                assert_eq!(
                    got_set,
                    oracle_select(&lib, d_max as usize, examples),
                    "b={b} d_max={d_max} {examples:?}"
                );
                let mut sorted = got.found.clone();
                sorted.sort();
                assert_eq!(sorted, got.found, "results leave canonical order");
            }
        }
    }
}
