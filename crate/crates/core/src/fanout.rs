//! Independent-evaluation fan-out.
//!
//! With the `parallel` feature the work is spread over a rayon pool sized by
//! the caller; without it (or with `jobs == 1`) items run in order on the
//! calling thread. Results always come back in input order, so output does
//! not depend on the worker count.

/// Maps `f` over `items` using at most `jobs` workers (`0` means all cores).
pub fn map<T, R, F>(items: &[T], jobs: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if jobs != 1 && items.len() > 1 {
            return parallel_map(items, jobs, f);
        }
    }
    #[cfg(not(feature = "parallel"))]
    let _ = jobs;
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
fn parallel_map<T, R, F>(items: &[T], jobs: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;

    let run = || items.par_iter().map(&f).collect();
    if jobs == 0 {
        return run();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(run),
        Err(_) => items.iter().map(&f).collect(),
    }
}

/// Whether this build can fan out across threads.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
