//! Multi-threaded region verification. Results do not depend on the number
//! of workers: every sample has its own random stream and outcomes are
//! merged in index order.

use ford_rank1_core::ford::{enumerate, FordRegion, GroupSpec, Tolerances, VerificationReport, Verifier, VerifyOptions};
use rayon::prelude::*;

use crate::error::CliError;

/// Environment variable capping the number of worker threads.
pub const THREADS_VAR: &str = "FORD_RANK1_THREADS";

/// Worker count from [`THREADS_VAR`]; `None` leaves the choice to rayon.
pub fn thread_cap() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_VAR) {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::input("config", format!("{THREADS_VAR} must be a positive integer, got '{s}'"))),
        },
    }
}

pub fn pool(threads: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        b = b.num_threads(n);
    }
    b.build().map_err(|e| CliError::input("config", format!("cannot start worker threads: {e}")))
}

pub fn verify_parallel(
    spec: &GroupSpec,
    region: &FordRegion,
    tol: &Tolerances,
    opts: &VerifyOptions,
    threads: Option<usize>,
) -> Result<VerificationReport, CliError> {
    let pool = pool(threads)?;
    pool.install(|| {
        let en = enumerate(spec, tol);
        let verifier = Verifier::with_enumeration(spec, region, &en, tol, opts)?;
        let outcomes = (0..opts.samples as u64).into_par_iter().map(|i| verifier.check(i)).collect::<Result<Vec<_>, _>>()?;
        Ok(verifier.report(outcomes))
    })
}
