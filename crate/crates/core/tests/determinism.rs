use dsi_core::dsbk::builtin_domain;
use dsi_core::par::Parallelism;
use dsi_core::synth::{enumerate, program_type, select, SelectOptions, SynthesisResult};

const CASES: [(&str, &str, &str); 5] = [
    ("dates", "25-03-74", "25"),
    ("freetext", "25-03-74", "25/03/74"),
    ("names", "Dr. B. Schdur", "Dr."),
    ("emails", "Sophia & domain", "Sophia@domain.com"),
    ("units", "56.77cl", "zz"),
];

fn run(domain: &str, x: &str, y: &str, mode: Parallelism) -> SynthesisResult {
    let space = enumerate(&builtin_domain(domain).unwrap(), &program_type(), 3).unwrap();
    let opts = SelectOptions {
        max_returned: 25,
        parallelism: mode,
        ..SelectOptions::default()
    };
    select(&space, &[(x.to_string(), y.to_string())], &opts)
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

#[test]
fn worker_count_does_not_change_results() {
    for (domain, x, y) in CASES {
        let one = in_pool(1, || run(domain, x, y, Parallelism::Parallel));
        let four = in_pool(4, || run(domain, x, y, Parallelism::Parallel));
        let seq = run(domain, x, y, Parallelism::Sequential);
        assert_eq!(one.programs, four.programs, "{domain}");
        assert_eq!(one.found, four.found, "{domain}");
        assert_eq!(one.programs, seq.programs, "{domain}");
        assert_eq!(
            one.stats.evaluated_count, four.stats.evaluated_count,
            "{domain}"
        );
    }
}
