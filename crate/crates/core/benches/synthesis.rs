use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dsi_core::dsbk::builtin_domain;
use dsi_core::par::Parallelism;
use dsi_core::synth::{enumerate, program_type, select, SelectOptions};

fn unsatisfiable_scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("select_full_scan");
    group
        .sample_size(10)
        .measurement_time(Duration::from_secs(10));
    for (domain, d) in [("freetext", 4), ("dates", 3), ("names", 3)] {
        let space = enumerate(&builtin_domain(domain).unwrap(), &program_type(), d).unwrap();
        let examples = vec![("25-03-74".to_string(), "no such output".to_string())];
        for mode in [Parallelism::Parallel, Parallelism::Sequential] {
            let opts = SelectOptions {
                parallelism: mode,
                ..SelectOptions::default()
            };
            group.bench_with_input(
                BenchmarkId::new(format!("{mode:?}"), format!("{domain}/d{d}")),
                &space,
                |b, space| b.iter(|| black_box(select(space, &examples, &opts))),
            );
        }
    }
    group.finish();
}

fn enumeration(c: &mut Criterion) {
    let lib = builtin_domain("dates").unwrap();
    c.bench_function("enumerate_dates_d4", |b| {
        b.iter(|| black_box(enumerate(&lib, &program_type(), 4).unwrap()))
    });
}

criterion_group!(benches, unsatisfiable_scan, enumeration);
criterion_main!(benches);
