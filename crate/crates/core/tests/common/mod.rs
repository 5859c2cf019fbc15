#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use dsi_core::catalog::Catalog;
use dsi_core::dsbk::Library;
use dsi_core::term::{run_program, type_check, EvalBudget, Expr, FillResult, Program, Ty};

/// Prims of the toy family, in the order they join it.
pub const TOY_FAMILY: [&str; 8] = [
    "reverse", "toUpper", "dash", "isDigit", "filter", "append", "take", "one",
];

pub fn toy_library(ids: &[&str]) -> Library {
    let cat = Catalog::builtin();
    let prims: Vec<_> = ids
        .iter()
        .map(|id| cat.lookup(id).unwrap().clone())
        .collect();
    Library::from_prims("toy", prims)
}

pub fn toy(b: usize) -> Library {
    toy_library(&TOY_FAMILY[..b])
}

fn param_universe(lib: &Library) -> Vec<Ty> {
    let mut out = BTreeSet::new();
    for p in lib.prims() {
        let (args, _) = p.ty.uncurry();
        for a in args {
            let (params, _) = a.uncurry();
            for t in params {
                out.insert(t.clone());
            }
        }
    }
    out.into_iter().collect()
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Every syntactic term with exactly `d` primitive occurrences over `scope`
/// variables: variables, saturated primitive applications, and arguments
/// that are either terms or one-parameter lambdas. No typing is applied.
fn raw_terms(lib: &Library, universe: &[Ty], d: usize, scope: usize) -> Vec<Expr> {
    if d == 0 {
        return (0..scope).map(Expr::var).collect();
    }
    let mut out = Vec::new();
    for p in lib.prims() {
        let k = p.arity();
        for comp in compositions(d - 1, k) {
            let choices: Vec<Vec<Expr>> = comp
                .iter()
                .map(|&dj| {
                    let mut c = raw_terms(lib, universe, dj, scope);
                    for t in universe {
                        for body in raw_terms(lib, universe, dj, scope + 1) {
                            c.push(Expr::lam(t.clone(), body));
                        }
                    }
                    c
                })
                .collect();
            let mut acc = vec![Expr::prim(p)];
            for c in &choices {
                let mut next = Vec::with_capacity(acc.len() * c.len());
                for f in &acc {
                    for a in c {
                        next.push(Expr::app(f.clone(), a.clone()));
                    }
                }
                acc = next;
            }
            out.extend(acc);
        }
    }
    out
}

/// Brute-force candidates `\x -> body` of type Text -> Text, per depth.
pub fn oracle_space(lib: &Library, d_max: usize) -> Vec<Vec<Expr>> {
    let universe = param_universe(lib);
    let target = Ty::func(Ty::Text, Ty::Text);
    (0..=d_max)
        .map(|d| {
            raw_terms(lib, &universe, d, 1)
                .into_iter()
                .map(|body| Expr::lam(Ty::Text, body))
                .filter(|e| type_check(e, &[]).ok().as_ref() == Some(&target))
                .collect()
        })
        .collect()
}

pub fn oracle_counts(lib: &Library, d_max: usize) -> Vec<u64> {
    oracle_space(lib, d_max)
        .iter()
        .map(|v| v.len() as u64)
        .collect()
}

/// Oracle candidates consistent with every example under the plain
/// interpreter.
pub fn oracle_select(lib: &Library, d_max: usize, examples: &[(&str, &str)]) -> HashSet<Expr> {
    oracle_space(lib, d_max)
        .into_iter()
        .flatten()
        .map(|e| Program::new(e).unwrap())
        .filter(|p| {
            examples.iter().all(|(x, y)| {
                matches!(run_program(p, x, EvalBudget::default()), FillResult::Ok(s) if s == *y)
            })
        })
        .map(|p| p.expr().clone())
        .collect()
}
