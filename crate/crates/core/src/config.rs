//! Agents, their voting behavior, and validated election configurations.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// One-based agent identifier `A_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct AgentId(u32);

impl AgentId {
    /// Unchecked constructor; range is validated against a configuration.
    pub const fn new(index: u32) -> Self {
        Self(index)
    }

    /// Agent `index` if it lies in `[1, n]`.
    pub fn checked(index: u32, n: u32) -> Result<Self> {
        if (1..=n).contains(&index) {
            Ok(Self(index))
        } else {
            Err(Error::AgentOutOfRange { agent: index, n })
        }
    }

    pub const fn index(self) -> u32 {
        self.0
    }

    /// Position in zero-based per-agent arrays.
    pub const fn slot(self) -> usize {
        self.0 as usize - 1
    }

    pub(crate) const fn from_slot(slot: usize) -> Self {
        Self(slot as u32 + 1)
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A{}", self.0)
    }
}

/// How an agent produces its vote and reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum AgentBehavior {
    /// Uses a fair coin.
    Honest,
    /// Emits 1 with the given probability, which is never 1/2.
    Biased(f64),
}

impl AgentBehavior {
    /// Probability that a vote or report from this agent is 1.
    pub fn bias(self) -> f64 {
        match self {
            Self::Honest => 0.5,
            Self::Biased(q) => q,
        }
    }

    pub fn is_biased(self) -> bool {
        matches!(self, Self::Biased(_))
    }

    fn validate(self, agent: u32) -> Result<()> {
        match self {
            Self::Honest => Ok(()),
            Self::Biased(q) if !(0.0..=1.0).contains(&q) => {
                Err(Error::BiasOutOfRange { agent, bias: q })
            }
            Self::Biased(0.5) => Err(Error::HalfBias { agent }),
            Self::Biased(_) => Ok(()),
        }
    }
}

/// Number of address bits for `n` agents, if `n` is a power of two >= 2.
pub fn address_len(n: u64) -> Result<usize> {
    if n >= 2 && n.is_power_of_two() {
        Ok(n.trailing_zeros() as usize)
    } else {
        Err(Error::NotPowerOfTwo { n })
    }
}

/// A validated election setup.
#[derive(Debug, Clone, PartialEq)]
pub struct ElectionConfig {
    n: u32,
    referee: AgentId,
    behaviors: Vec<AgentBehavior>,
    master_seed: u64,
    audit_enabled: bool,
    address_len: usize,
    biased_count: usize,
}

impl ElectionConfig {
    pub fn new(
        n: u32,
        referee: AgentId,
        behaviors: Vec<AgentBehavior>,
        master_seed: u64,
    ) -> Result<Self> {
        let address_len = address_len(u64::from(n))?;
        if behaviors.len() != n as usize {
            return Err(Error::BehaviorCountMismatch {
                expected: n as usize,
                got: behaviors.len(),
            });
        }
        if !(1..=n).contains(&referee.index()) {
            return Err(Error::RefereeOutOfRange {
                referee: referee.index(),
                n,
            });
        }
        for (slot, behavior) in behaviors.iter().enumerate() {
            behavior.validate(slot as u32 + 1)?;
        }
        let biased_count = behaviors.iter().filter(|b| b.is_biased()).count();
        Ok(Self {
            n,
            referee,
            behaviors,
            master_seed,
            audit_enabled: false,
            address_len,
            biased_count,
        })
    }

    /// `n` honest agents refereed by `A_1`.
    pub fn all_honest(n: u32, master_seed: u64) -> Result<Self> {
        Self::new(
            n,
            AgentId::new(1),
            vec![AgentBehavior::Honest; n as usize],
            master_seed,
        )
    }

    /// Turns on referee audits of agents' measurement reports (Protocol I).
    pub fn with_audit(mut self, enabled: bool) -> Self {
        self.audit_enabled = enabled;
        self
    }

    /// Same setup under a different seed.
    pub fn with_seed(mut self, master_seed: u64) -> Self {
        self.master_seed = master_seed;
        self
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn referee(&self) -> AgentId {
        self.referee
    }

    pub fn behaviors(&self) -> &[AgentBehavior] {
        &self.behaviors
    }

    pub fn behavior(&self, agent: AgentId) -> AgentBehavior {
        self.behaviors[agent.slot()]
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn audit_enabled(&self) -> bool {
        self.audit_enabled
    }

    /// `L = log2(n)`.
    pub fn address_len(&self) -> usize {
        self.address_len
    }

    /// Number of biased agents `k`.
    pub fn biased_count(&self) -> usize {
        self.biased_count
    }

    pub fn honest_count(&self) -> usize {
        self.n as usize - self.biased_count
    }

    pub fn agents(&self) -> impl Iterator<Item = AgentId> {
        (1..=self.n).map(AgentId::new)
    }
}

/// Validating constructor; see [`ElectionConfig::new`].
pub fn make_config(
    n: u32,
    referee: AgentId,
    behaviors: Vec<AgentBehavior>,
    master_seed: u64,
) -> Result<ElectionConfig> {
    ElectionConfig::new(n, referee, behaviors, master_seed)
}
