//! Sequential or data-parallel evaluation of independent work items.
//!
//! Results always come back in input order, so output is identical for
//! every thread count. Without the `parallel` feature every mode runs on
//! the calling thread.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// `jobs: None` uses the global rayon pool.
    Parallel {
        jobs: Option<usize>,
    },
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel { jobs: None }
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    /// `--jobs` semantics: 1 means sequential, anything else parallel.
    pub fn from_jobs(jobs: Option<usize>) -> Self {
        match jobs {
            Some(1) => Execution::Sequential,
            Some(0) | None => Execution::default(),
            Some(k) => Execution::Parallel { jobs: Some(k) },
        }
    }

    pub fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            Execution::Sequential => items.iter().map(f).collect(),
            #[cfg(feature = "parallel")]
            Execution::Parallel { jobs } => {
                use rayon::prelude::*;
                match jobs {
                    Some(k) => match rayon::ThreadPoolBuilder::new().num_threads(*k).build() {
                        Ok(pool) => pool.install(|| items.par_iter().map(f).collect()),
                        Err(_) => items.iter().map(f).collect(),
                    },
                    None => items.par_iter().map(f).collect(),
                }
            }
            #[cfg(not(feature = "parallel"))]
            Execution::Parallel { .. } => items.iter().map(f).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let items: Vec<u64> = (0..1000).collect();
        let seq = Execution::Sequential.map(&items, |x| x * x);
        for exec in [
            Execution::Parallel { jobs: None },
            Execution::Parallel { jobs: Some(3) },
        ] {
            assert_eq!(exec.map(&items, |x| x * x), seq);
        }
    }

    #[test]
    fn jobs_flag() {
        assert_eq!(Execution::from_jobs(Some(1)), Execution::Sequential);
        assert_eq!(
            Execution::from_jobs(Some(4)),
            Execution::Parallel { jobs: Some(4) }
        );
    }
}
