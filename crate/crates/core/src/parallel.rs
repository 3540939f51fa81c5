//! Worker pool used by the batch pipelines. Results always come back in input
//! order, so output never depends on the worker count.

use crate::error::{Error, Result};

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "FROB_WORKERS";

pub struct Workers {
    count: usize,
    #[cfg(feature = "parallel")]
    pool: Option<rayon::ThreadPool>,
}

impl Workers {
    pub fn new(count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::Config("worker count must be at least 1".into()));
        }
        #[cfg(feature = "parallel")]
        {
            let pool = if count > 1 {
                Some(
                    rayon::ThreadPoolBuilder::new()
                        .num_threads(count)
                        .build()
                        .map_err(|e| Error::Config(e.to_string()))?,
                )
            } else {
                None
            };
            Ok(Self { count, pool })
        }
        #[cfg(not(feature = "parallel"))]
        Ok(Self { count })
    }

    /// Worker count from `FROB_WORKERS`, defaulting to 1.
    pub fn from_env() -> Result<Self> {
        let count = match std::env::var(WORKERS_ENV) {
            Ok(v) => v.trim().parse().map_err(|_| Error::Config(format!("{WORKERS_ENV}={v:?} is not a count")))?,
            Err(_) => 1,
        };
        Self::new(count)
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn map<T, U, F>(&self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if let Some(pool) = &self.pool {
            use rayon::prelude::*;
            return pool.install(|| items.par_iter().map(&f).collect());
        }
        items.iter().map(f).collect()
    }
}
