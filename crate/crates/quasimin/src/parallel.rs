//! Data-parallel plumbing. Batch computations (verification trials, table
//! cells) go through `map_indexed`, which fans out over a rayon pool when the
//! `parallel` feature is on and falls back to a plain loop otherwise. Results
//! are always assembled in index order, so both paths produce identical
//! output.

/// Apply `f` to every index in `0..count`, returning results in index order.
#[cfg(feature = "parallel")]
pub fn map_indexed<T: Send, F: Fn(usize) -> T + Sync + Send>(count: usize, f: F) -> Vec<T> {
    use rayon::prelude::*;
    (0..count).into_par_iter().map(f).collect()
}

/// Apply `f` to every index in `0..count`, returning results in index order.
#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T: Send, F: Fn(usize) -> T + Sync + Send>(count: usize, f: F) -> Vec<T> {
    (0..count).map(f).collect()
}

/// Run `body` with a bounded worker pool (`jobs` threads). `None` keeps the
/// global default; sequential builds run `body` directly either way.
#[cfg(feature = "parallel")]
pub fn run_with_threads<R: Send>(jobs: Option<usize>, body: impl FnOnce() -> R + Send) -> R {
    match jobs {
        Some(j) if j > 0 => match rayon::ThreadPoolBuilder::new().num_threads(j).build() {
            Ok(pool) => pool.install(body),
            Err(_) => body(),
        },
        _ => body(),
    }
}

/// Run `body` with a bounded worker pool (`jobs` threads). `None` keeps the
/// global default; sequential builds run `body` directly either way.
#[cfg(not(feature = "parallel"))]
pub fn run_with_threads<R: Send>(jobs: Option<usize>, body: impl FnOnce() -> R + Send) -> R {
    let _ = jobs;
    body()
}
