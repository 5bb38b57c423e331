//! Execution strategy for the data-parallel inner loops.
//!
//! Window enumeration, preimage counting, charge checks and wall searches all
//! fan out over independent work items. With the `parallel` feature these run
//! on the rayon pool; without it (or with [`Execution::Sequential`]) they run
//! on the calling thread. Results are always collected in input order, so both
//! strategies produce identical output.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How to run an embarrassingly parallel loop.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Uses rayon when the `parallel` feature is enabled, otherwise falls back
    /// to sequential execution.
    #[default]
    Parallel,
}

impl Execution {
    /// True when work will actually be spread over the rayon pool.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

pub(crate) fn map_range<R, F>(exec: Execution, range: Range<u64>, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return range.into_par_iter().map(f).collect();
    }
    let _ = exec;
    range.map(f).collect()
}

pub(crate) fn map_slice<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// First `Some` in index order, as rayon's `find_map_first` would return.
pub(crate) fn find_first<R, F>(exec: Execution, range: Range<u64>, f: F) -> Option<R>
where
    R: Send,
    F: Fn(u64) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return range.into_par_iter().find_map_first(f);
    }
    let _ = exec;
    range.into_iter().find_map(f)
}
