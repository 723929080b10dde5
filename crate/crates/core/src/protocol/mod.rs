//! Leader election protocols and their shared agreement phase.
//!
//! Both protocols start with a one-cbit signal from the referee, produce an
//! `L`-bit leader address, and finish the same way: the referee informs the
//! leader, the leader asks every other agent for agreement, and every agent
//! answers the referee with one agreement cbit.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::bits::BitString;
use crate::config::{AgentId, ElectionConfig};
use crate::error::{Error, Result};
use crate::netsim::{phase, Transcript};

pub mod quantum;
pub mod randomized;

pub use quantum::{audit_report, run_protocol_one, run_protocol_one_with, AuditVerdict};
pub use randomized::{
    avoided_bias, cast_vote, referee_sample, run_protocol_two, run_protocol_two_with,
    SampleSelection, VoteRecord,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ProtocolKind {
    Quantum,
    Randomized,
}

impl ProtocolKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Quantum => "quantum",
            Self::Randomized => "randomized",
        }
    }
}

/// Agent `1 + value(bits)`, reading the first bit as most significant.
pub fn index_from_bits(bits: &BitString, address_len: usize) -> Result<AgentId> {
    if bits.len() != address_len {
        return Err(Error::WrongLength {
            expected: address_len,
            got: bits.len(),
        });
    }
    Ok(AgentId::new(bits.value() as u32 + 1))
}

/// Per-agent overrides of the agreement bit. Agents absent from the set agree.
///
/// The elected leader is committed to its election and cannot refuse.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AgreementPolicy {
    refusing: BTreeSet<AgentId>,
}

impl AgreementPolicy {
    pub fn all_agree() -> Self {
        Self::default()
    }

    pub fn refusing(agents: impl IntoIterator<Item = AgentId>) -> Self {
        Self {
            refusing: agents.into_iter().collect(),
        }
    }

    fn agrees(&self, agent: AgentId, leader: AgentId) -> bool {
        agent == leader || !self.refusing.contains(&agent)
    }
}

/// Result of one election run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ElectionOutcome {
    pub protocol: ProtocolKind,
    pub leader: AgentId,
    pub address_bits: BitString,
    /// Agreement bit of agent `A_i` at position `i - 1`.
    pub agreements: Vec<bool>,
    pub discarded: BTreeSet<AgentId>,
    pub transcript: Transcript,
    /// Populated by Protocol II only.
    pub votes: Vec<VoteRecord>,
    pub selection: Option<SampleSelection>,
    /// Populated by Protocol I when audits are enabled.
    pub audits: Vec<AuditVerdict>,
}

impl ElectionOutcome {
    pub fn total_cbits(&self) -> u64 {
        self.transcript.total_cbits()
    }

    /// Agents who stay in the computation after the election.
    pub fn participants(&self) -> impl Iterator<Item = AgentId> + '_ {
        self.agreements
            .iter()
            .enumerate()
            .filter(|(_, &agreed)| agreed)
            .map(|(slot, _)| AgentId::from_slot(slot))
    }
}

struct Agreement {
    leader: AgentId,
    agreements: Vec<bool>,
    discarded: BTreeSet<AgentId>,
}

/// Inform-leader, agreement-request and agreement phases.
fn conclude(
    config: &ElectionConfig,
    transcript: &mut Transcript,
    address_bits: &BitString,
    policy: &AgreementPolicy,
) -> Result<Agreement> {
    let referee = config.referee();
    let leader = index_from_bits(address_bits, config.address_len())?;
    transcript.send(referee, leader, BitString::single(true), phase::INFORM_LEADER);
    for agent in config.agents().filter(|&a| a != leader) {
        transcript.send(leader, agent, BitString::single(true), phase::AGREEMENT_REQUEST);
    }
    let mut agreements = Vec::with_capacity(config.n() as usize);
    let mut discarded = BTreeSet::new();
    for agent in config.agents() {
        let agreed = policy.agrees(agent, leader);
        transcript.send(agent, referee, BitString::single(agreed), phase::AGREEMENT);
        agreements.push(agreed);
        if !agreed {
            discarded.insert(agent);
        }
    }
    Ok(Agreement {
        leader,
        agreements,
        discarded,
    })
}
