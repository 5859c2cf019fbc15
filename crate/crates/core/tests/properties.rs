mod common;

use std::collections::HashSet;
use std::sync::OnceLock;

use proptest::prelude::*;

use common::toy;
use dsi_core::catalog::{convert_value, Catalog};
use dsi_core::dsbk::{build_library, builtin_domain, parse_manifest, Library};
use dsi_core::synth::{
    decode_space, encode_space, enumerate, enumerate_with, program_type, select, CandidateSpace,
    EnumOptions, SelectOptions,
};
use dsi_core::term::{
    run_program, type_check, EvalBudget, EvalError, Evaluator, Expr, FillResult, Program, Ty, Value,
};

fn freetext_space() -> &'static CandidateSpace {
    static S: OnceLock<CandidateSpace> = OnceLock::new();
    S.get_or_init(|| enumerate(&builtin_domain("freetext").unwrap(), &program_type(), 2).unwrap())
}

fn toy_space() -> &'static CandidateSpace {
    static S: OnceLock<CandidateSpace> = OnceLock::new();
    S.get_or_init(|| enumerate(&toy(8), &program_type(), 3).unwrap())
}

fn pick(space: &CandidateSpace, seed: u64) -> (usize, u64) {
    let counts = space.counts();
    let mut k = seed % space.total();
    for (d, &n) in counts.iter().enumerate() {
        if k < n {
            return (d, k);
        }
        k -= n;
    }
    unreachable!()
}

fn input() -> impl Strategy<Value = String> {
    prop_oneof![
        "[a-zA-Z0-9 ./&:@()-]{0,16}",
        Just("25-03-74".to_string()),
        Just("Dr. B. Schdur".to_string()),
        Just("235-7654 & Taiwan".to_string()),
        Just("08:55 PM CET".to_string()),
    ]
}

fn call(id: &str, args: &[Value]) -> Result<Value, EvalError> {
    let cat = Catalog::builtin();
    let p = cat.lookup(id).unwrap();
    p.call(args, &mut Evaluator::new(EvalBudget::default()))
}

fn text(v: Value) -> String {
    v.as_text().unwrap().to_string()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn candidates_type_check_and_respect_depth(seed in any::<u64>()) {
        for space in [freetext_space(), toy_space()] {
            let (d, i) = pick(space, seed);
            let e = space.expr(d, i);
            prop_assert_eq!(type_check(&e, &[]).unwrap(), program_type());
            prop_assert_eq!(e.depth(), d);
            prop_assert!(d <= space.d_max() as usize);
        }
    }

    #[test]
    fn evaluation_yields_text_or_a_prim_failure(seed in any::<u64>(), x in input()) {
        let (d, i) = pick(freetext_space(), seed);
        let p = freetext_space().program(d, i);
        match run_program(&p, &x, EvalBudget::default()) {
            FillResult::Ok(_) => {}
            FillResult::Failed(e) => prop_assert!(
                !matches!(e, EvalError::IllTyped(_)),
                "{} on {:?}: {}", p.rendering(), x, e
            ),
        }
    }

    #[test]
    fn evaluation_is_deterministic(seed in any::<u64>(), x in input()) {
        let (d, i) = pick(freetext_space(), seed);
        let p = freetext_space().program(d, i);
        prop_assert_eq!(
            run_program(&p, &x, EvalBudget::default()),
            run_program(&p, &x, EvalBudget::default())
        );
    }

    #[test]
    fn more_fuel_never_changes_a_success(seed in any::<u64>(), x in input(), fuel in 1u64..40, extra in 0u64..1000) {
        let (d, i) = pick(toy_space(), seed);
        let p = toy_space().program(d, i);
        if let FillResult::Ok(s) = run_program(&p, &x, EvalBudget::new(fuel)) {
            prop_assert_eq!(run_program(&p, &x, EvalBudget::new(fuel + extra)), FillResult::Ok(s));
        }
    }

    #[test]
    fn prims_are_total_on_well_typed_arguments(s in input(), t in input(), n in -5i64..40, c in any::<char>()) {
        let cat = Catalog::builtin();
        let is_digit = Value::Func(std::sync::Arc::new(dsi_core::term::FuncValue::Partial {
            prim: cat.lookup("isDigit").unwrap().clone(),
            args: Vec::new(),
        }));
        for p in cat.prims() {
            let (params, _) = p.ty.uncurry();
            let mut texts = [s.as_str(), t.as_str(), s.as_str()].into_iter();
            let args: Vec<Value> = params
                .iter()
                .map(|ty| match ty {
                    Ty::Text => Value::text(texts.next().unwrap()),
                    Ty::Int => Value::Int(n),
                    Ty::Char => Value::Char(c),
                    Ty::Bool => Value::Bool(n % 2 == 0),
                    Ty::List(e) => Value::list((**e).clone(), Vec::new()),
                    Ty::Func(..) => is_digit.clone(),
                })
                .collect();
            let got = p.call(&args, &mut Evaluator::new(EvalBudget::default()));
            if let Ok(v) = got {
                let (_, ret) = p.ty.uncurry();
                prop_assert_eq!(&v.ty(), ret, "{}", p.id);
            }
        }
    }

    #[test]
    fn clock_formats_round_trip(h in 0u32..24, m in 0u32..60) {
        let t24 = format!("{h:02}:{m:02}");
        let t12 = text(call("to12h", &[Value::text(t24.as_str())]).unwrap());
        prop_assert_eq!(text(call("to24h", &[Value::text(t12.as_str())]).unwrap()), t24);
    }

    #[test]
    fn month_names_round_trip(m in 1u32..=12) {
        let num = format!("{m:02}");
        let name = text(call("monthName", &[Value::text(num.as_str())]).unwrap());
        prop_assert_eq!(text(call("monthToNumber", &[Value::text(name.as_str())]).unwrap()), num);
    }

    #[test]
    fn unit_conversions_compose(v in -1.0e6f64..1.0e6, a in 0usize..7, b in 0usize..7, c in 0usize..7) {
        let units = ["nm", "um", "mm", "cm", "dm", "m", "km"];
        let cat = Catalog::builtin();
        let tables = cat.tables();
        let ab = convert_value(v, units[a], units[b], tables).unwrap();
        let abc = convert_value(ab, units[b], units[c], tables).unwrap();
        let ac = convert_value(v, units[a], units[c], tables).unwrap();
        prop_assert!((abc - ac).abs() <= 1e-9 * ac.abs().max(1.0), "{} vs {}", abc, ac);
    }

    #[test]
    fn adding_includes_never_removes_prims(mask in 1u16..(1 << 8), extra in 0usize..8) {
        let groups = ["default", "freetext", "dates", "emails", "names", "phones", "times", "units"];
        let mut text = String::from("domain test\n");
        for (i, g) in groups.iter().enumerate() {
            if mask & (1 << i) != 0 {
                text.push_str(&format!("include group:{g}\n"));
            }
        }
        let cat = Catalog::builtin();
        let small = build_library(&parse_manifest(&text).unwrap(), &cat).unwrap();
        text.push_str(&format!("include group:{}\n", groups[extra % groups.len()]));
        let big = build_library(&parse_manifest(&text).unwrap(), &cat).unwrap();
        let big_ids: HashSet<&str> = big.ids().collect();
        prop_assert!(small.ids().all(|id| big_ids.contains(id)));
        prop_assert!(big.breadth() >= small.breadth());
    }

    #[test]
    fn selection_agrees_with_the_interpreter(x in "[a-c0-9-]{0,5}", seed in any::<u64>()) {
        let space = toy_space();
        let (d, i) = pick(space, seed);
        let target = run_program(&space.program(d, i), &x, EvalBudget::default());
        let FillResult::Ok(y) = target else { return Ok(()) };
        let examples = vec![(x.clone(), y.clone())];
        let opts = SelectOptions { max_returned: usize::MAX, ..SelectOptions::default() };
        let got = select(space, &examples, &opts);
        let expected: Vec<Expr> = space
            .iter_exprs()
            .filter(|(_, e)| {
                run_program(&Program::new(e.clone()).unwrap(), &x, EvalBudget::default())
                    == FillResult::Ok(y.clone())
            })
            .map(|(_, e)| e)
            .collect();
        let got_exprs: Vec<Expr> = got.programs.iter().map(|p| p.expr().clone()).collect();
        prop_assert_eq!(got_exprs, expected);
    }

    #[test]
    fn selection_charges_fuel_like_the_interpreter(x in "[a-c0-9-]{0,6}", y in "[a-c0-9-]{0,3}", fuel in 1u64..30) {
        let space = toy_space();
        let examples = vec![(x.clone(), y.clone())];
        let opts = SelectOptions { max_returned: usize::MAX, fuel, ..SelectOptions::default() };
        let got: Vec<Expr> = select(space, &examples, &opts)
            .programs
            .iter()
            .map(|p| p.expr().clone())
            .collect();
        let expected: Vec<Expr> = space
            .iter_exprs()
            .filter(|(_, e)| {
                run_program(&Program::new(e.clone()).unwrap(), &x, EvalBudget::new(fuel))
                    == FillResult::Ok(y.clone())
            })
            .map(|(_, e)| e)
            .collect();
        prop_assert_eq!(got, expected);
    }
}

#[test]
fn adding_a_prim_keeps_every_candidate() {
    for b in 1..8 {
        let small: HashSet<Expr> = enumerate(&toy(b), &program_type(), 3)
            .unwrap()
            .iter_exprs()
            .map(|(_, e)| e)
            .collect();
        let big: HashSet<Expr> = enumerate(&toy(b + 1), &program_type(), 3)
            .unwrap()
            .iter_exprs()
            .map(|(_, e)| e)
            .collect();
        assert!(small.is_subset(&big), "b={b}");
    }
}

#[test]
fn spaces_survive_encoding() {
    let lib = builtin_domain("dates").unwrap();
    let space = enumerate(&lib, &program_type(), 3).unwrap();
    let bytes = encode_space(&space);
    let back = decode_space(&bytes, &lib).unwrap();
    assert_eq!(back, space);
    assert_eq!(back.counts(), space.counts());
    assert_eq!(back.expr(3, 777), space.expr(3, 777));

    let other = builtin_domain("names").unwrap();
    assert!(decode_space(&bytes, &other).is_err());
    assert!(decode_space(&bytes[..bytes.len() - 1], &lib).is_err());
    assert!(decode_space(b"not a space", &lib).is_err());
}

#[test]
fn pruning_keeps_one_program_per_behaviour() {
    let lib: Library = toy(8);
    let probes = vec!["ab1".to_string(), "x-9Y".to_string()];
    let full = enumerate(&lib, &program_type(), 3).unwrap();
    let pruned = enumerate_with(
        &lib,
        &program_type(),
        3,
        &EnumOptions {
            prune_probes: Some(probes.clone()),
            ..EnumOptions::default()
        },
    )
    .unwrap();
    assert!(pruned.total() < full.total());
    let examples = vec![("ab1".to_string(), "1BA".to_string())];
    let opts = SelectOptions::default();
    let a = select(&full, &examples, &opts);
    let b = select(&pruned, &examples, &opts);
    assert_eq!(a.programs.first(), b.programs.first());
    for p in &b.programs {
        assert_eq!(
            run_program(p, "ab1", EvalBudget::default()),
            FillResult::Ok("1BA".into())
        );
    }
}
