//! Uniform-cost message passing with an exact cbit ledger.
//!
//! Delivery is synchronous and lossless. Sending a payload between two distinct
//! agents costs one cbit per payload bit regardless of topology; a message an
//! agent addresses to itself is local and costs nothing. The sender address
//! travels as free metadata.

use std::fmt;

use serde::Serialize;

use crate::bits::BitString;
use crate::config::AgentId;

/// Protocol phases that emit messages.
pub mod phase {
    pub const START: &str = "start";
    pub const VOTE: &str = "vote";
    pub const AUDIT: &str = "audit";
    pub const INFORM_LEADER: &str = "inform-leader";
    pub const AGREEMENT_REQUEST: &str = "agreement-request";
    pub const AGREEMENT: &str = "agreement";
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MessageRecord {
    pub from: AgentId,
    pub to: AgentId,
    pub payload: BitString,
    pub cost_cbits: u64,
    pub phase_label: &'static str,
}

/// Cost of moving `payload` from `from` to `to`.
pub fn message_cost(from: AgentId, to: AgentId, payload: &BitString) -> u64 {
    if from == to {
        0
    } else {
        payload.len() as u64
    }
}

/// Ordered log of every message in one run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Transcript {
    records: Vec<MessageRecord>,
    total_cbits: u64,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    /// Delivers one message and charges the ledger.
    pub fn send(
        &mut self,
        from: AgentId,
        to: AgentId,
        payload: BitString,
        phase_label: &'static str,
    ) -> &MessageRecord {
        let cost_cbits = message_cost(from, to, &payload);
        self.total_cbits += cost_cbits;
        self.records.push(MessageRecord {
            from,
            to,
            payload,
            cost_cbits,
            phase_label,
        });
        self.records.last().expect("just pushed")
    }

    /// One-bit start signal from the referee to each of the other `n - 1` agents.
    pub fn broadcast_start(&mut self, referee: AgentId, n: u32) {
        for agent in (1..=n).map(AgentId::new).filter(|&a| a != referee) {
            self.send(referee, agent, BitString::single(true), phase::START);
        }
    }

    pub fn total_cbits(&self) -> u64 {
        self.total_cbits
    }

    pub fn records(&self) -> &[MessageRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// cbits charged to messages carrying `phase_label`.
    pub fn phase_cbits(&self, phase_label: &str) -> u64 {
        self.records
            .iter()
            .filter(|r| r.phase_label == phase_label)
            .map(|r| r.cost_cbits)
            .sum()
    }
}

/// One `from,to,bits,cost,phase` line per message.
impl fmt::Display for Transcript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.records {
            writeln!(
                f,
                "{},{},{},{},{}",
                r.from.index(),
                r.to.index(),
                r.payload,
                r.cost_cbits,
                r.phase_label
            )?;
        }
        Ok(())
    }
}
