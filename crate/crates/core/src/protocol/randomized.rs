//! Protocol II: election from one vote bit per agent.
//!
//! Every agent sends one vote to the referee. The referee picks `L` of the `n`
//! votes uniformly without replacement, in uniformly random order, and reads
//! them as the leader address. A biased vote in the sample skews the leader.

use std::collections::HashMap;

use serde::Serialize;

use crate::bits::BitString;
use crate::config::{AgentBehavior, AgentId, ElectionConfig};
use crate::error::{Error, Result};
use crate::netsim::{phase, Transcript};
use crate::rng::RandomSource;

use super::{conclude, AgreementPolicy, ElectionOutcome, ProtocolKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VoteRecord {
    pub agent: AgentId,
    pub bit: bool,
    pub biased: bool,
}

/// Draws `agent`'s vote: a fair bit if honest, 1 with probability `q` if `Biased(q)`.
pub fn cast_vote(agent: AgentId, behavior: AgentBehavior, rng: &mut RandomSource) -> VoteRecord {
    let bit = match behavior {
        AgentBehavior::Honest => rng.fair_bit(),
        AgentBehavior::Biased(q) => rng.bernoulli(q),
    };
    VoteRecord {
        agent,
        bit,
        biased: behavior.is_biased(),
    }
}

/// The referee's ordered sample of vote positions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SampleSelection {
    pub positions: Vec<AgentId>,
    pub touched_biased: bool,
}

impl SampleSelection {
    /// Marks whether any sampled position belongs to a biased agent.
    pub fn classify(mut self, behaviors: &[AgentBehavior]) -> Self {
        self.touched_biased = self
            .positions
            .iter()
            .any(|p| behaviors[p.slot()].is_biased());
        self
    }
}

/// `len` distinct positions from `[1, n]`, uniform over ordered selections.
///
/// Partial Fisher-Yates over a lazily materialized permutation, so the cost is
/// `O(len)` regardless of `n`.
pub fn referee_sample(n: usize, len: usize, rng: &mut RandomSource) -> Result<SampleSelection> {
    if len > n {
        return Err(Error::SampleTooLarge { len, n });
    }
    let mut swapped: HashMap<usize, usize> = HashMap::with_capacity(2 * len);
    let mut positions = Vec::with_capacity(len);
    for i in 0..len {
        let j = i + rng.below(n - i);
        let at_j = swapped.get(&j).copied().unwrap_or(j);
        let at_i = swapped.get(&i).copied().unwrap_or(i);
        swapped.insert(j, at_i);
        positions.push(AgentId::from_slot(at_j));
    }
    Ok(SampleSelection {
        positions,
        touched_biased: false,
    })
}

/// Runs Protocol II with every agent agreeing.
pub fn run_protocol_two(config: &ElectionConfig) -> Result<ElectionOutcome> {
    run_protocol_two_with(config, &AgreementPolicy::all_agree())
}

pub fn run_protocol_two_with(
    config: &ElectionConfig,
    policy: &AgreementPolicy,
) -> Result<ElectionOutcome> {
    let root = RandomSource::new(config.master_seed());
    let referee = config.referee();
    let mut transcript = Transcript::new();
    transcript.broadcast_start(referee, config.n());

    // The sample is drawn from its own stream, independent of every vote.
    let selection = referee_sample(
        config.n() as usize,
        config.address_len(),
        &mut root.derive("referee-sample"),
    )?
    .classify(config.behaviors());

    let votes: Vec<VoteRecord> = config
        .agents()
        .map(|agent| {
            let mut stream = root.derive(&format!("vote-{}", agent.index()));
            cast_vote(agent, config.behavior(agent), &mut stream)
        })
        .collect();
    for vote in &votes {
        transcript.send(vote.agent, referee, BitString::single(vote.bit), phase::VOTE);
    }

    let address_bits: BitString = selection
        .positions
        .iter()
        .map(|p| votes[p.slot()].bit)
        .collect();
    let agreement = conclude(config, &mut transcript, &address_bits, policy)?;
    Ok(ElectionOutcome {
        protocol: ProtocolKind::Randomized,
        leader: agreement.leader,
        address_bits,
        agreements: agreement.agreements,
        discarded: agreement.discarded,
        transcript,
        votes,
        selection: Some(selection),
        audits: Vec::new(),
    })
}

/// Whether the referee's sample missed every biased vote.
pub fn avoided_bias(outcome: &ElectionOutcome) -> Result<bool> {
    match (&outcome.protocol, &outcome.selection) {
        (ProtocolKind::Randomized, Some(selection)) => Ok(!selection.touched_biased),
        _ => Err(Error::WrongProtocol {
            expected: ProtocolKind::Randomized.name(),
            found: outcome.protocol.name(),
        }),
    }
}
