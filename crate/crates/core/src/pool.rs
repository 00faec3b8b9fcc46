use rayon::ThreadPoolBuilder;

use crate::error::{Error, Result};

/// Runs `op` inside a dedicated rayon pool with `workers` threads.
pub(crate) fn install<T, F>(workers: usize, op: F) -> Result<T>
where
    F: FnOnce() -> T + Send,
    T: Send,
{
    if workers == 0 {
        return Err(Error::Config("worker count must be at least 1".into()));
    }
    let pool = ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(op))
}
