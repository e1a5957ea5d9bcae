//! Index-range data parallelism. With the `parallel` feature the work runs on the rayon
//! pool; without it the same functions run sequentially and produce identical results.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// `f` applied to every index, results in index order.
pub fn map_range<T, F>(range: Range<u64>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        range.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        range.map(f).collect()
    }
}

/// Folds every index into an accumulator; partial accumulators are merged in index order,
/// so `merge` only needs to be associative.
pub fn fold_range<A, I, F, M>(range: Range<u64>, identity: I, fold: F, merge: M) -> A
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    F: Fn(A, u64) -> A + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        range.into_par_iter().fold(&identity, fold).reduce(&identity, merge)
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = &merge;
        range.fold(identity(), fold)
    }
}

/// True when this build fans work out over threads.
pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
