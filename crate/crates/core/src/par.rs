//! Thin wrapper so the crate builds with and without rayon.

/// Maps `f` over `0..n` and returns results in index order.
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Folds `range` in contiguous chunks (one per worker thread) and merges the
/// chunk results left to right. `merge` must be associative and commutative
/// for the result to be independent of the thread count.
pub fn fold_range<S, T, I, F, Fin, M>(
    range: std::ops::Range<usize>,
    init: I,
    body: F,
    finish: Fin,
    merge: M,
) -> Option<T>
where
    S: Send,
    T: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, usize) + Sync + Send,
    Fin: Fn(S) -> T + Sync + Send,
    M: Fn(T, T) -> T + Sync + Send,
{
    let len = range.len();
    if len == 0 {
        return None;
    }
    let chunks = threads().clamp(1, len);
    let per = len.div_ceil(chunks);
    let parts = map_indexed(chunks, |c| {
        let lo = range.start + c * per;
        let hi = (lo + per).min(range.end);
        let mut state = init();
        for i in lo..hi {
            body(&mut state, i);
        }
        finish(state)
    });
    parts.into_iter().reduce(merge)
}

/// Worker threads available to the parallel helpers.
pub fn threads() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}
