//! Rayon-backed trial runner. `SRD_THREADS` caps the worker count.

use rayon::prelude::*;
use rayon::ThreadPool;
use srd_core::runner::TrialRunner;

pub struct Pool(ThreadPool);

impl Pool {
    pub fn from_env() -> Self {
        let threads =
            std::env::var("SRD_THREADS").ok().and_then(|s| s.trim().parse::<usize>().ok()).unwrap_or(0);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool");
        Pool(pool)
    }

    /// Maps `f` over `items` in parallel, keeping input order.
    pub fn map<T: Sync, U: Send>(&self, items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
        self.0.install(|| items.par_iter().map(f).collect())
    }
}

impl TrialRunner for Pool {
    fn run<T, F>(&self, trials: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        self.0.install(|| (0..trials).into_par_iter().map(f).collect())
    }
}
