//! File formats, random ensembles, parameter scans and the verification
//! suite for [`wgs_core`], plus the `wgs` command-line front end.

pub mod error;
pub mod io;
pub mod oracle;
pub mod random;
pub mod scan;
pub mod verify;

pub use error::{WgsError, WgsResult};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "WGS_THREADS";

/// Thread pool sized by `WGS_THREADS` when set to a positive integer, else
/// rayon's default.
pub fn thread_pool() -> WgsResult<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => builder = builder.num_threads(n),
            _ => return Err(WgsError::Invalid(format!("{THREADS_ENV}={v:?} is not a positive integer"))),
        }
    }
    builder.build().map_err(|e| WgsError::Numerical(e.to_string()))
}
