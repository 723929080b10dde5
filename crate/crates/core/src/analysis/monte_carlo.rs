use rayon::prelude::*;
use serde::Serialize;

use crate::config::address_len;
use crate::error::{Error, Result};
use crate::protocol::referee_sample;
use crate::rng::derive_stream;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonteCarloEstimate {
    pub trials: u64,
    pub avoided: u64,
    pub estimate: f64,
    /// `sqrt(p(1-p)/trials)` at the estimate.
    pub stderr: f64,
}

/// Estimates `p(n, k)` by drawing referee samples against biased agents `A_1..A_k`.
///
/// Trial `i` uses substream `mc-i` of `master_seed`, so the result does not
/// depend on how trials are scheduled across threads.
pub fn monte_carlo_avoidance(
    n: u64,
    k: u64,
    trials: u64,
    master_seed: u64,
) -> Result<MonteCarloEstimate> {
    let len = address_len(n)?;
    if k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    let avoided = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = derive_stream(master_seed, &format!("mc-{i}"));
            let selection = referee_sample(n as usize, len, &mut rng)?;
            Ok(selection.positions.iter().all(|p| u64::from(p.index()) > k))
        })
        .try_fold(|| 0u64, |acc, hit: Result<bool>| Ok::<_, Error>(acc + u64::from(hit?)))
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    let estimate = avoided as f64 / trials as f64;
    Ok(MonteCarloEstimate {
        trials,
        avoided,
        estimate,
        stderr: (estimate * (1.0 - estimate) / trials as f64).sqrt(),
    })
}
