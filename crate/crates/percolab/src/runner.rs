//! Thread-pool runner and wall-clock helpers.

use std::time::Instant;

use percolab_core::estimator::{Estimate, Experiment, Runner};
use percolab_core::Error;
use rayon::prelude::*;

/// Runs trials on a rayon pool. Counters are integer sums over trials, so
/// the totals do not depend on the number of workers.
pub struct Parallel {
    pool: rayon::ThreadPool,
}

impl Parallel {
    /// `workers == 0` uses one worker per available core.
    pub fn new(workers: usize) -> Result<Self, rayon::ThreadPoolBuildError> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build()?;
        Ok(Parallel { pool })
    }

    pub fn workers(&self) -> usize {
        self.pool.current_num_threads()
    }

    /// Runs `f` inside the pool, so rayon iterators in it use these workers.
    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        self.pool.install(f)
    }
}

/// Trials handed to a worker at a time.
const BLOCK: u64 = 16;

fn add(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

impl Runner for Parallel {
    fn run(&self, exp: &dyn Experiment, trials: u64) -> Result<Vec<u64>, Error> {
        let k = exp.counters();
        let blocks = trials.div_ceil(BLOCK);
        self.pool.install(|| {
            (0..blocks)
                .into_par_iter()
                .try_fold(
                    || vec![0u64; k],
                    |mut acc, b| {
                        for t in b * BLOCK..trials.min((b + 1) * BLOCK) {
                            exp.trial(t, &mut acc)?;
                        }
                        Ok::<_, Error>(acc)
                    },
                )
                .try_reduce(|| vec![0u64; k], |a, b| Ok(add(a, b)))
        })
    }
}

/// Runs `f` and returns its value with the elapsed seconds.
pub fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64())
}

/// Shares `secs` among estimates that came out of one run.
pub fn stamp(estimates: &mut [Estimate], secs: f64) {
    for e in estimates {
        e.wall_time = secs;
    }
}

/// Optional wall-clock limit.
#[derive(Clone, Copy, Debug)]
pub struct Deadline {
    end: Option<Instant>,
}

impl Deadline {
    pub fn none() -> Self {
        Deadline { end: None }
    }

    pub fn after_secs(secs: f64) -> Self {
        Deadline { end: Some(Instant::now() + std::time::Duration::from_secs_f64(secs.max(0.0))) }
    }

    pub fn expired(&self) -> bool {
        self.end.is_some_and(|e| Instant::now() >= e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use percolab_core::estimator::Sequential;

    struct Parity;

    impl Experiment for Parity {
        fn counters(&self) -> usize {
            2
        }

        fn trial(&self, stream: u64, out: &mut [u64]) -> Result<(), Error> {
            out[(stream % 2) as usize] += stream;
            Ok(())
        }
    }

    struct Failing;

    impl Experiment for Failing {
        fn counters(&self) -> usize {
            1
        }

        fn trial(&self, stream: u64, _out: &mut [u64]) -> Result<(), Error> {
            if stream == 77 {
                Err(Error::SearchBudget)
            } else {
                Ok(())
            }
        }
    }

    #[test]
    fn totals_match_sequential() {
        let want = Sequential.run(&Parity, 1001).unwrap();
        for w in [1, 2, 3] {
            assert_eq!(Parallel::new(w).unwrap().run(&Parity, 1001).unwrap(), want);
        }
    }

    #[test]
    fn errors_propagate() {
        assert_eq!(Parallel::new(2).unwrap().run(&Failing, 200), Err(Error::SearchBudget));
    }

    #[test]
    fn deadline() {
        assert!(!Deadline::none().expired());
        assert!(Deadline::after_secs(0.0).expired());
    }
}
