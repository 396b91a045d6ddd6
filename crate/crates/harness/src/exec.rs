//! Index-keyed map helpers: parallel when the `parallel` feature is on,
//! sequential otherwise. Ordering of results is by index either way, so the
//! execution strategy never changes output content.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map over `0..n` with the default execution strategy.
#[cfg(feature = "parallel")]
pub fn map_indexed<T, F>(n: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F>(n: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    map_indexed_seq(n, f)
}

/// Always-sequential variant, used by benches and determinism tests.
pub fn map_indexed_seq<T, F>(n: u64, f: F) -> Vec<T>
where
    F: Fn(u64) -> T,
{
    (0..n).map(f).collect()
}
