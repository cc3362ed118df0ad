//! Execution strategy for the data-parallel loops (period counting, codeword
//! enumeration). With the `parallel` feature disabled only the sequential
//! strategy exists and every entry point falls back to it.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

/// Splits `0..len` into contiguous chunks, folds each chunk with `fold`
/// starting from `init()`, then merges the partial results with `merge`.
pub(crate) fn fold_chunks<T, I, F, M>(
    strategy: Strategy,
    len: u64,
    chunk: u64,
    init: I,
    fold: F,
    merge: M,
) -> T
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    F: Fn(T, std::ops::Range<u64>) -> T + Sync + Send,
    M: Fn(T, T) -> T + Sync + Send,
{
    let chunk = chunk.max(1);
    let n_chunks = len.div_ceil(chunk);
    let range_of = |c: u64| (c * chunk)..((c + 1) * chunk).min(len);
    match strategy {
        Strategy::Sequential => {
            let _ = &merge;
            (0..n_chunks).fold(init(), |acc, c| fold(acc, range_of(c)))
        }
        #[cfg(feature = "parallel")]
        Strategy::Parallel => {
            use rayon::prelude::*;
            (0..n_chunks)
                .into_par_iter()
                .fold(&init, |acc, c| fold(acc, range_of(c)))
                .reduce(&init, &merge)
        }
    }
}
