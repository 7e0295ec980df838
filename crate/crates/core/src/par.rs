//! Data-parallel driver with a sequential fallback.
//!
//! The exhaustive searches fan out over independent chunks (pivot profiles,
//! coefficient prefixes, group-stream slices) and merge with associative,
//! commutative folds, so censuses are identical for any worker count. With the
//! `parallel` feature disabled everything runs on the calling thread through
//! the same entry points; the benches compare the two paths directly.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Sequential reference path, always available.
pub fn run_seq<I, R>(
    items: Vec<I>,
    map: impl Fn(I) -> R,
    identity: impl Fn() -> R,
    merge: impl Fn(R, R) -> R,
) -> R {
    items
        .into_iter()
        .map(map)
        .fold(identity(), merge)
}

/// Parallel when the feature is on, sequential otherwise.
#[cfg(feature = "parallel")]
pub fn run<I, R>(
    items: Vec<I>,
    map: impl Fn(I) -> R + Sync + Send,
    identity: impl Fn() -> R + Sync + Send,
    merge: impl Fn(R, R) -> R + Sync + Send,
) -> R
where
    I: Send,
    R: Send,
{
    items
        .into_par_iter()
        .map(map)
        .reduce(&identity, &merge)
}

#[cfg(not(feature = "parallel"))]
pub fn run<I, R>(
    items: Vec<I>,
    map: impl Fn(I) -> R,
    identity: impl Fn() -> R,
    merge: impl Fn(R, R) -> R,
) -> R {
    run_seq(items, map, identity, merge)
}

/// First item (in stream order) whose image is Some. Deterministic: the least
/// index wins regardless of scheduling.
#[cfg(feature = "parallel")]
pub fn find_first<I, R>(items: Vec<I>, test: impl Fn(I) -> Option<R> + Sync + Send) -> Option<R>
where
    I: Send,
    R: Send,
{
    items.into_par_iter().filter_map(test).find_first(|_| true)
}

#[cfg(not(feature = "parallel"))]
pub fn find_first<I, R>(items: Vec<I>, test: impl Fn(I) -> Option<R>) -> Option<R> {
    items.into_iter().find_map(test)
}

/// Effective worker count for reporting.
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
