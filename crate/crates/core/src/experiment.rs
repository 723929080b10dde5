//! Many independent, seeded election runs.

use rayon::prelude::*;
use serde::Serialize;

use crate::config::{AgentId, ElectionConfig};
use crate::error::Result;
use crate::protocol::{avoided_bias, run_protocol_one, run_protocol_two, ElectionOutcome, ProtocolKind};
use crate::rng::trial_seed;

/// What a single run contributes to an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RunSummary {
    pub seed: u64,
    pub leader: AgentId,
    pub leader_is_referee: bool,
    pub total_cbits: u64,
    /// Protocol II only.
    pub avoided_bias: Option<bool>,
}

impl RunSummary {
    fn of(seed: u64, outcome: &ElectionOutcome, referee: AgentId) -> Self {
        Self {
            seed,
            leader: outcome.leader,
            leader_is_referee: outcome.leader == referee,
            total_cbits: outcome.total_cbits(),
            avoided_bias: avoided_bias(outcome).ok(),
        }
    }
}

pub fn run_once(config: &ElectionConfig, protocol: ProtocolKind) -> Result<ElectionOutcome> {
    match protocol {
        ProtocolKind::Quantum => run_protocol_one(config),
        ProtocolKind::Randomized => run_protocol_two(config),
    }
}

/// Runs `trials` elections; run `i` uses `trial_seed(config.master_seed(), i)`.
///
/// Results come back in trial order whatever the thread schedule.
pub fn run_trials(
    config: &ElectionConfig,
    protocol: ProtocolKind,
    trials: u64,
) -> Result<Vec<RunSummary>> {
    (0..trials)
        .into_par_iter()
        .map(|i| {
            let seed = trial_seed(config.master_seed(), i);
            let run = config.clone().with_seed(seed);
            let outcome = run_once(&run, protocol)?;
            Ok(RunSummary::of(seed, &outcome, config.referee()))
        })
        .collect()
}

/// Leader counts per agent, `A_1` first.
pub fn leader_histogram(runs: &[RunSummary], n: u32) -> Vec<u64> {
    crate::analysis::histogram(runs.iter().map(|r| r.leader.index()), n as usize)
}

/// Exact cbit count of a run under the 1-cbit control-signal model.
pub fn expected_cbits(protocol: ProtocolKind, n: u32, leader_is_referee: bool) -> u64 {
    let n = u64::from(n);
    let away = u64::from(!leader_is_referee);
    match protocol {
        ProtocolKind::Quantum => 3 * n - 3 + away,
        ProtocolKind::Randomized => 4 * n - 4 + away,
    }
}
