//! Data-parallel execution helpers.
//!
//! With the `parallel` feature (default) the indexed map runs on rayon;
//! without it the same call is a plain sequential loop. Callers must keep
//! per-index work independent; results come back in index order, so any
//! later reduction is schedule-independent and bit-reproducible.

/// Map `f` over `0..n`, collecting results in index order.
#[cfg(feature = "parallel")]
pub fn par_map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

/// Map `f` over `0..n`, collecting results in index order.
#[cfg(not(feature = "parallel"))]
pub fn par_map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}

/// Sequential reference implementation, always available for benchmarks.
pub fn seq_map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

/// Cap the worker pool size. Results never depend on the count; this
/// only limits concurrency. Fails if a pool was already initialized.
#[cfg(feature = "parallel")]
pub fn set_worker_count(n: usize) -> std::result::Result<(), String> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

/// Without the `parallel` feature execution is sequential; the requested
/// count is irrelevant.
#[cfg(not(feature = "parallel"))]
pub fn set_worker_count(_n: usize) -> std::result::Result<(), String> {
    Ok(())
}

/// Sum `f(i)` for `i` in `0..n` in chunks of fixed size.
///
/// Chunk boundaries depend only on `n`, never on the worker count, so the
/// result is identical for any number of threads: chunks are summed
/// sequentially inside, then combined in chunk order.
pub fn chunked_sum<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    const CHUNK: usize = 4096;
    let chunks = n.div_ceil(CHUNK);
    let partials = par_map_indexed(chunks, |c| {
        let lo = c * CHUNK;
        let hi = usize::min(lo + CHUNK, n);
        let mut acc = 0.0;
        for i in lo..hi {
            acc += f(i);
        }
        acc
    });
    partials.into_iter().sum()
}
