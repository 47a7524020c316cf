//! Data-parallel execution with a sequential fallback.
//!
//! With the `parallel` feature (default) an [`Executor`] may own a rayon
//! pool; without it every executor runs sequentially. Results are always
//! returned in index order, so callers that reduce them in order get
//! bit-identical output for any worker count.

#[derive(Debug)]
pub struct Executor {
    #[cfg(feature = "parallel")]
    pool: Option<rayon::ThreadPool>,
}

impl Executor {
    pub fn sequential() -> Self {
        Executor {
            #[cfg(feature = "parallel")]
            pool: None,
        }
    }

    /// A pool with `threads` workers; `0` picks the number of CPUs, `1` is
    /// sequential. Falls back to sequential when built without `parallel`.
    pub fn with_threads(threads: usize) -> Self {
        #[cfg(feature = "parallel")]
        {
            if threads == 1 {
                return Self::sequential();
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .ok();
            Executor { pool }
        }
        #[cfg(not(feature = "parallel"))]
        {
            let _ = threads;
            Self::sequential()
        }
    }

    pub fn is_parallel(&self) -> bool {
        #[cfg(feature = "parallel")]
        {
            self.pool.is_some()
        }
        #[cfg(not(feature = "parallel"))]
        {
            false
        }
    }

    /// Evaluates `f(0..count)` and returns the results in index order.
    pub fn map<T, F>(&self, count: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if let Some(pool) = &self.pool {
            use rayon::prelude::*;
            return pool.install(|| (0..count).into_par_iter().map(&f).collect());
        }
        (0..count).map(f).collect()
    }
}

impl Default for Executor {
    fn default() -> Self {
        Self::with_threads(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordered_results_match_sequential() {
        let f = |i: usize| (i as f64).sqrt().sin();
        let seq = Executor::sequential().map(1000, f);
        let par = Executor::with_threads(4).map(1000, f);
        assert_eq!(seq, par);
    }
}
