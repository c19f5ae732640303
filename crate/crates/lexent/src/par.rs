//! Thin switch between rayon and sequential execution.
//!
//! With the default `parallel` feature the helpers fan work out over rayon;
//! without it they run the same closures sequentially. Bounds are identical
//! in both builds so callers compile unchanged.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `items`, preserving input order in the output.
pub(crate) fn map_slice<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Map `f` over indices `0..n`, preserving index order in the output.
pub(crate) fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Fold chunks of `items` with `fold` and merge the partial results with
/// `merge`. `merge` must be associative and commutative.
pub(crate) fn fold_chunks<T, A, FF, FM, FI>(
    items: &[T],
    chunk: usize,
    init: FI,
    fold: FF,
    merge: FM,
) -> A
where
    T: Sync,
    A: Send,
    FI: Fn() -> A + Sync + Send,
    FF: Fn(A, &T) -> A + Sync + Send,
    FM: Fn(A, A) -> A + Sync + Send,
{
    let chunk = chunk.max(1);
    #[cfg(feature = "parallel")]
    {
        items
            .par_chunks(chunk)
            .map(|part| part.iter().fold(init(), &fold))
            .reduce(&init, &merge)
    }
    #[cfg(not(feature = "parallel"))]
    {
        items
            .chunks(chunk)
            .map(|part| part.iter().fold(init(), |acc, t| fold(acc, t)))
            .fold(init(), merge)
    }
}
