use std::ops::Range;
use std::sync::Arc;
use std::time::{Duration, Instant};

use crate::par::{self, Parallelism};
use crate::term::{Env, Value, DEFAULT_FUEL};

use super::memo::{Evaluate, MemoTable, Step, CHUNK};
use super::space::{CandidateSpace, PoolId, ROOT_ENV};
use super::{Found, Stats, SynthesisResult};

/// Knobs for phase two.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectOptions {
    pub budget: Duration,
    pub max_returned: usize,
    pub fuel: u64,
    pub parallelism: Parallelism,
}

impl Default for SelectOptions {
    fn default() -> Self {
        SelectOptions {
            budget: Duration::from_secs(120),
            max_returned: 10,
            fuel: DEFAULT_FUEL,
            parallelism: Parallelism::Parallel,
        }
    }
}

/// Entries scanned between budget checks.
const BATCH: u64 = 1 << 16;

struct Run<'a> {
    space: &'a CandidateSpace,
    inputs: Vec<Vec<Value>>,
    expected: Vec<Arc<str>>,
    opts: &'a SelectOptions,
    deadline: Instant,
    memo: MemoTable,
    evaluated: u64,
    timed_out: bool,
}

impl Run<'_> {
    fn out_of_time(&mut self) -> bool {
        if Instant::now() >= self.deadline {
            self.timed_out = true;
        }
        self.timed_out
    }

    fn prepare(&mut self, id: PoolId) {
        let space = self.space;
        let envs: Vec<Env> = self.inputs.iter().map(|v| Env::from_slice(v)).collect();
        self.memo
            .ensure_closures(&space.view(), id, &envs, &mut |p| space.bodies(p));
    }

    /// Memoizes every root-scope pool of depth `d`. Returns false on timeout.
    fn memoize_level(&mut self, d: u32) -> bool {
        let ids: Vec<PoolId> = (0..self.space.pools.len() as PoolId)
            .filter(|&id| {
                let p = self.space.pool(id);
                p.env == ROOT_ENV && p.depth == d && !self.memo.has(id)
            })
            .collect();
        for id in ids {
            let space = self.space;
            self.prepare(id);
            let count = space.pool(id).count();
            let mut cells = Vec::with_capacity(count as usize * self.inputs.len());
            let view = space.view();
            let mut lo = 0;
            while lo < count {
                let hi = (lo + BATCH).min(count);
                let ev = Evaluate {
                    view: &view,
                    memo: &self.memo,
                    inputs: &self.inputs,
                    fuel: self.opts.fuel,
                };
                let parts =
                    par::map_chunks(self.opts.parallelism, lo..hi, CHUNK, |r| ev.cells(id, r));
                for p in parts {
                    cells.extend(p);
                }
                lo = hi;
                if self.out_of_time() {
                    return false;
                }
            }
            self.memo.insert(id, cells);
        }
        true
    }

    fn matches_memo(&self, pool: PoolId) -> Vec<u64> {
        let n = self.inputs.len();
        let cells = self.memo.cells(pool);
        (0..self.space.pool(pool).count())
            .filter(|&i| {
                (0..n).all(|e| {
                    let c = &cells[i as usize * n + e];
                    c.steps < self.opts.fuel
                        && matches!(&c.value, Some(Value::Text(s)) if **s == *self.expected[e])
                })
            })
            .collect()
    }

    /// Scans `range` of `pool` without memoizing, skipping argument
    /// subtrees that fail.
    fn scan(&self, ev: &Evaluate, pool: PoolId, range: Range<u64>) -> (Vec<u64>, u64) {
        let p = self.space.pool(pool);
        let mut found = Vec::new();
        let mut tuple = Vec::new();
        let mut buf = Vec::new();
        let mut idx = range.start;
        while idx < range.end {
            let (b, off) = p.locate(p.raw_index(idx));
            let block = &p.blocks[b];
            self.space.view().decode(block, off, &mut tuple);
            let mut ok = true;
            let mut skip = 1;
            for e in 0..ev.n() {
                match ev.step(block, &tuple, e, &mut buf) {
                    Step::Done(Value::Text(s), steps)
                        if steps < self.opts.fuel && *s == *self.expected[e] => {}
                    Step::ArgFailed(j) => {
                        ok = false;
                        if p.kept.is_none() {
                            let stride: u64 = block.args[j + 1..]
                                .iter()
                                .map(|a| self.space.pool(a.pool).count())
                                .product();
                            skip = stride - off % stride;
                        }
                        break;
                    }
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                found.push(idx);
            }
            idx += skip;
        }
        let end = idx.min(range.end).max(range.start);
        (found, end - range.start)
    }

    fn stream(&mut self, pool: PoolId, want: usize) -> Vec<u64> {
        let count = self.space.pool(pool).count();
        let mut found = Vec::new();
        let mut lo = 0;
        let view = self.space.view();
        while lo < count && found.len() < want {
            let hi = (lo + BATCH).min(count);
            let ev = Evaluate {
                view: &view,
                memo: &self.memo,
                inputs: &self.inputs,
                fuel: self.opts.fuel,
            };
            let parts = par::map_chunks(self.opts.parallelism, lo..hi, CHUNK, |r| {
                let start = r.start;
                let (f, _) = self.scan(&ev, pool, r.clone());
                (f, r.end - start)
            });
            for (f, visited) in parts {
                found.extend(f);
                self.evaluated += visited;
            }
            lo = hi;
            if found.len() >= want {
                break;
            }
            if self.out_of_time() {
                break;
            }
        }
        found.truncate(want);
        found
    }
}

/// Keeps the candidates that map every example input to its output, in
/// canonical order, until `max_returned` are found or the budget runs out.
pub fn select(
    space: &CandidateSpace,
    examples: &[(String, String)],
    opts: &SelectOptions,
) -> SynthesisResult {
    let start = Instant::now();
    let mut result = SynthesisResult {
        programs: Vec::new(),
        found: Vec::new(),
        stats: Stats {
            enumerated_count: space.total(),
            ..Stats::default()
        },
    };
    if !space.is_text_fn() || examples.is_empty() || opts.max_returned == 0 {
        result.stats.elapsed_ms = start.elapsed().as_millis() as u64;
        return result;
    }
    debug_assert_eq!(space.root_env_values(), 1);
    let mut run = Run {
        space,
        inputs: examples
            .iter()
            .map(|(x, _)| vec![Value::text(x.as_str())])
            .collect(),
        expected: examples
            .iter()
            .map(|(_, y)| Arc::from(y.as_str()))
            .collect(),
        opts,
        deadline: start + opts.budget,
        memo: MemoTable::new(examples.len()),
        evaluated: 0,
        timed_out: false,
    };
    let last = space.roots.len().saturating_sub(1);
    let mut hits: Vec<(usize, u64)> = Vec::new();
    for (d, &root) in space.roots.iter().enumerate() {
        let want = opts.max_returned - hits.len();
        if d < last {
            if !run.memoize_level(d as u32) {
                break;
            }
            let m = run.matches_memo(root);
            run.evaluated += space.pool(root).count();
            hits.extend(m.into_iter().take(want).map(|i| (d, i)));
        } else {
            run.prepare(root);
            let m = run.stream(root, want);
            hits.extend(m.into_iter().map(|i| (d, i)));
        }
        if hits.len() >= opts.max_returned || run.timed_out {
            break;
        }
    }
    for (d, i) in hits {
        result.programs.push(space.program(d, i));
        result.found.push(Found { depth: d, index: i });
    }
    result.stats.evaluated_count = run.evaluated;
    result.stats.timed_out = run.timed_out;
    result.stats.elapsed_ms = start.elapsed().as_millis() as u64;
    result
}
