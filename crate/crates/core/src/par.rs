//! Data-parallel helpers with a sequential fallback. Without the `parallel`
//! feature every call runs on the calling thread.

use std::ops::Range;

/// How chunked work is scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Parallelism {
    /// Use the current rayon pool when the `parallel` feature is enabled.
    #[default]
    Parallel,
    Sequential,
}

impl Parallelism {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Parallelism::Parallel
    }
}

/// Worker threads available to parallel calls.
pub fn workers() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

fn chunks(range: Range<u64>, chunk: u64) -> Vec<Range<u64>> {
    let chunk = chunk.max(1);
    let mut out = Vec::new();
    let mut lo = range.start;
    while lo < range.end {
        let hi = (lo + chunk).min(range.end);
        out.push(lo..hi);
        lo = hi;
    }
    out
}

/// Applies `f` to consecutive sub-ranges of `range` and returns the results
/// in range order, whatever the scheduling.
pub fn map_chunks<T, F>(mode: Parallelism, range: Range<u64>, chunk: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(Range<u64>) -> T + Sync + Send,
{
    let parts = chunks(range, chunk);
    #[cfg(feature = "parallel")]
    if mode.is_parallel() && parts.len() > 1 {
        use rayon::prelude::*;
        return parts.into_par_iter().map(f).collect();
    }
    let _ = mode;
    parts.into_iter().map(f).collect()
}

/// Applies `f` to every item, preserving order.
pub fn map_items<I, T, F>(mode: Parallelism, items: Vec<I>, f: F) -> Vec<T>
where
    I: Send,
    T: Send,
    F: Fn(I) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() && items.len() > 1 {
        use rayon::prelude::*;
        return items.into_par_iter().map(f).collect();
    }
    let _ = mode;
    items.into_iter().map(f).collect()
}
