//! Index-preserving parallel map.
//!
//! With the `parallel` feature the work runs on a rayon pool of the
//! requested size; without it, or with one worker, it runs sequentially.
//! Either way the output order is the input order.

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "LAMBDA_OB_WORKERS";

/// Worker count from `LAMBDA_OB_WORKERS`, falling back to the number of
/// available cores.
pub fn default_workers() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

/// Applies `f` to every item, returning results in input order.
pub fn map<T, R, F>(items: &[T], workers: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if workers > 1 && items.len() > 1 {
        use rayon::prelude::*;
        if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
            return pool.install(|| items.par_iter().map(&f).collect());
        }
    }
    let _ = workers;
    items.iter().map(f).collect()
}
