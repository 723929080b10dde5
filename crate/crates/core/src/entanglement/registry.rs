use std::collections::BTreeSet;

use crate::bits::BitString;
use crate::config::{address_len, AgentId};
use crate::error::{Error, Result};
use crate::rng::RandomSource;

/// One GHZ state `(|0...0> + |1...1>)/sqrt(2)` with one qubit per agent.
///
/// The shared outcome is drawn from the state's own stream on first
/// measurement and returned to every later measurement.
#[derive(Debug, Clone)]
pub struct GhzState {
    index: usize,
    outcome: Option<bool>,
    measured_by: BTreeSet<AgentId>,
    stream: RandomSource,
}

impl GhzState {
    fn new(index: usize, stream: RandomSource) -> Self {
        Self {
            index,
            outcome: None,
            measured_by: BTreeSet::new(),
            stream,
        }
    }

    /// One-based position among the registry's states.
    pub fn index(&self) -> usize {
        self.index
    }

    /// `None` until someone measures.
    pub fn outcome(&self) -> Option<bool> {
        self.outcome
    }

    pub fn measured_by(&self) -> &BTreeSet<AgentId> {
        &self.measured_by
    }

    fn measure(&mut self, agent: AgentId) -> bool {
        self.measured_by.insert(agent);
        let stream = &mut self.stream;
        *self.outcome.get_or_insert_with(|| stream.fair_bit())
    }
}

/// The `log2(n)` GHZ states shared by `n` agents.
#[derive(Debug, Clone)]
pub struct EbitRegistry {
    n: u32,
    states: Vec<GhzState>,
}

impl EbitRegistry {
    /// Unmeasured states; state `k` draws from `rng.derive("ghz-k")`.
    pub fn new(n: u32, rng: &RandomSource) -> Result<Self> {
        let len = address_len(u64::from(n))?;
        let states = (1..=len)
            .map(|k| GhzState::new(k, rng.derive(&format!("ghz-{k}"))))
            .collect();
        Ok(Self { n, states })
    }

    /// A registry whose states have already collapsed to `outcomes`, in index order.
    pub fn with_outcomes(n: u32, outcomes: &BitString) -> Result<Self> {
        let len = address_len(u64::from(n))?;
        if outcomes.len() != len {
            return Err(Error::WrongLength {
                expected: len,
                got: outcomes.len(),
            });
        }
        let unused = RandomSource::new(0);
        let states = outcomes
            .bits()
            .iter()
            .enumerate()
            .map(|(i, &bit)| {
                let mut state = GhzState::new(i + 1, unused.clone());
                state.outcome = Some(bit);
                state
            })
            .collect();
        Ok(Self { n, states })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of states, `L`.
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Simulated qubits: one per agent per state.
    pub fn qubit_count(&self) -> usize {
        self.n as usize * self.states.len()
    }

    pub fn states(&self) -> &[GhzState] {
        &self.states
    }

    /// `agent` measures its qubit of state `k` (one-based) in the computational basis.
    pub fn measure(&mut self, agent: AgentId, k: usize) -> Result<bool> {
        AgentId::checked(agent.index(), self.n)?;
        let len = self.states.len();
        let state = k
            .checked_sub(1)
            .and_then(|i| self.states.get_mut(i))
            .ok_or(Error::StateIndexOutOfRange { k, len })?;
        Ok(state.measure(agent))
    }

    /// `agent` measures all of its qubits, yielding the string every agent shares.
    pub fn shared_random_string(&mut self, agent: AgentId) -> Result<BitString> {
        (1..=self.states.len())
            .map(|k| self.measure(agent, k))
            .collect()
    }
}

/// See [`EbitRegistry::new`].
pub fn create_registry(n: u32, rng: &RandomSource) -> Result<EbitRegistry> {
    EbitRegistry::new(n, rng)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::rng::derive_stream;

    #[test]
    fn registry_sizes() {
        let rng = RandomSource::new(1);
        let r8 = create_registry(8, &rng).unwrap();
        assert_eq!((r8.len(), r8.qubit_count()), (3, 24));
        assert_eq!(create_registry(2, &rng).unwrap().len(), 1);
        assert_eq!(create_registry(1024, &rng).unwrap().len(), 10);
        assert_eq!(
            create_registry(12, &rng).unwrap_err(),
            Error::NotPowerOfTwo { n: 12 }
        );
        assert!(r8.states().iter().all(|s| s.outcome().is_none()));
    }

    #[test]
    fn all_agents_see_first_outcome() {
        let mut registry = create_registry(8, &RandomSource::new(5)).unwrap();
        let first = registry.measure(AgentId::new(4), 1).unwrap();
        for agent in 1..=8 {
            assert_eq!(registry.measure(AgentId::new(agent), 1).unwrap(), first);
            assert_eq!(registry.measure(AgentId::new(agent), 1).unwrap(), first);
        }
        assert_eq!(registry.states()[0].measured_by().len(), 8);
        assert_eq!(registry.states()[0].outcome(), Some(first));
    }

    #[test]
    fn out_of_range_state() {
        let mut registry = create_registry(8, &RandomSource::new(5)).unwrap();
        assert_eq!(
            registry.measure(AgentId::new(3), 5),
            Err(Error::StateIndexOutOfRange { k: 5, len: 3 })
        );
        assert_eq!(
            registry.measure(AgentId::new(3), 0),
            Err(Error::StateIndexOutOfRange { k: 0, len: 3 })
        );
        assert!(registry.measure(AgentId::new(9), 1).is_err());
    }

    #[test]
    fn single_state_string() {
        let mut registry = create_registry(2, &RandomSource::new(11)).unwrap();
        let s = registry.shared_random_string(AgentId::new(2)).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.bits()[0], registry.measure(AgentId::new(1), 1).unwrap());
    }

    #[test]
    fn fair_first_outcome() {
        let trials = 100_000;
        let ones = (0..trials)
            .filter(|&t| {
                let mut r = create_registry(4, &derive_stream(t, "ebits")).unwrap();
                r.measure(AgentId::new(1), 1).unwrap()
            })
            .count();
        let freq = ones as f64 / trials as f64;
        assert!((0.494..=0.506).contains(&freq), "{freq}");
    }

    #[test]
    fn prepared_outcomes() {
        let bits: BitString = "101".parse().unwrap();
        let mut registry = EbitRegistry::with_outcomes(8, &bits).unwrap();
        assert_eq!(registry.shared_random_string(AgentId::new(6)).unwrap(), bits);
        assert!(EbitRegistry::with_outcomes(8, &"10".parse().unwrap()).is_err());
    }

    proptest! {
        #[test]
        fn measurement_schedule_is_irrelevant(seed: u64, schedule in Just((1u32..=16).flat_map(|a| (1..=4usize).map(move |k| (a, k))).collect::<Vec<_>>()).prop_shuffle()) {
            let rng = RandomSource::new(seed);
            let mut reference = create_registry(16, &rng).unwrap();
            let expected = reference.shared_random_string(AgentId::new(1)).unwrap();
            let mut shuffled = create_registry(16, &rng).unwrap();
            for (agent, k) in schedule {
                prop_assert_eq!(shuffled.measure(AgentId::new(agent), k).unwrap(), expected.bits()[k - 1]);
            }
        }
    }
}
