//! Distributional checks on the randomized protocol.

use std::collections::HashMap;

use fair_election::analysis::{chi_square_uniform, DEFAULT_ALPHA};
use fair_election::experiment::{leader_histogram, run_trials, RunSummary};
use fair_election::protocol::{referee_sample, ProtocolKind};
use fair_election::rng::derive_stream;
use fair_election::{AgentBehavior, AgentId, ElectionConfig};

fn subset_mask(positions: &[AgentId]) -> u32 {
    positions.iter().fold(0, |m, p| m | 1 << p.slot())
}

#[test]
fn referee_subsets_are_uniform() {
    let mut rng = derive_stream(99, "subsets");
    let mut cells: HashMap<u32, u64> = HashMap::new();
    for _ in 0..1_000_000 {
        let selection = referee_sample(8, 3, &mut rng).unwrap();
        *cells.entry(subset_mask(&selection.positions)).or_default() += 1;
    }
    assert_eq!(cells.len(), 56);
    let counts: Vec<u64> = cells.values().copied().collect();
    let report = chi_square_uniform(&counts, DEFAULT_ALPHA).unwrap();
    assert!(!report.reject_uniform, "{report:?}");
}

#[test]
fn all_honest_protocol_two_is_uniform() {
    let config = ElectionConfig::all_honest(16, 5150).unwrap();
    let runs = run_trials(&config, ProtocolKind::Randomized, 100_000).unwrap();
    let report = chi_square_uniform(&leader_histogram(&runs, 16), DEFAULT_ALPHA).unwrap();
    assert!(!report.reject_uniform, "{report:?}");
}

#[test]
fn uniform_when_the_sample_avoids_biased_votes() {
    let behaviors = (1..=16)
        .map(|i| if i == 2 || i == 9 { AgentBehavior::Biased(1.0) } else { AgentBehavior::Honest })
        .collect();
    let config = ElectionConfig::new(16, AgentId::new(1), behaviors, 77).unwrap();
    let runs = run_trials(&config, ProtocolKind::Randomized, 100_000).unwrap();
    let (clean, touched): (Vec<RunSummary>, Vec<RunSummary>) =
        runs.into_iter().partition(|r| r.avoided_bias == Some(true));
    let report = chi_square_uniform(&leader_histogram(&clean, 16), DEFAULT_ALPHA).unwrap();
    assert!(!report.reject_uniform, "{report:?}");
    // A sampled vote stuck at 1 forces a 1 bit into the address.
    let skewed = chi_square_uniform(&leader_histogram(&touched, 16), DEFAULT_ALPHA).unwrap();
    assert!(skewed.reject_uniform);
}

#[test]
fn protocol_one_ignores_biased_agents() {
    let behaviors = (0..16)
        .map(|i| if i < 8 { AgentBehavior::Biased(1.0) } else { AgentBehavior::Honest })
        .collect();
    let config = ElectionConfig::new(16, AgentId::new(1), behaviors, 31).unwrap();
    let runs = run_trials(&config, ProtocolKind::Quantum, 50_000).unwrap();
    let report = chi_square_uniform(&leader_histogram(&runs, 16), DEFAULT_ALPHA).unwrap();
    assert!(!report.reject_uniform, "{report:?}");
}
