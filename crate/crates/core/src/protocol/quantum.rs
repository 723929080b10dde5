//! Protocol I: election from `log2(n)` shared GHZ states.
//!
//! Every agent measures its qubits locally. The referee reads the address off
//! its own qubits, so no measurement report ever influences the leader. When
//! audits are enabled, each non-referee agent also reports its measured bits to
//! the referee, who checks them against its own qubits.

use serde::Serialize;

use crate::bits::BitString;
use crate::config::{AgentBehavior, AgentId, ElectionConfig};
use crate::entanglement::{create_registry, EbitRegistry};
use crate::error::Result;
use crate::netsim::{phase, Transcript};
use crate::rng::RandomSource;

use super::{conclude, AgreementPolicy, ElectionOutcome, ProtocolKind};

/// The referee's check of one reported measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AuditVerdict {
    pub agent: AgentId,
    pub state_index: usize,
    pub reported: bool,
    pub truth: bool,
    pub lied: bool,
}

/// Compares `reported` with the referee's own measurement of state `k`.
pub fn audit_report(
    registry: &mut EbitRegistry,
    referee: AgentId,
    agent: AgentId,
    k: usize,
    reported: bool,
) -> Result<AuditVerdict> {
    let truth = registry.measure(referee, k)?;
    Ok(AuditVerdict {
        agent,
        state_index: k,
        reported,
        truth,
        lied: reported != truth,
    })
}

/// Runs Protocol I with fresh GHZ states and every agent agreeing.
pub fn run_protocol_one(config: &ElectionConfig) -> Result<ElectionOutcome> {
    let root = RandomSource::new(config.master_seed());
    let registry = create_registry(config.n(), &root.derive("ebits"))?;
    run_protocol_one_with(config, registry, &AgreementPolicy::all_agree())
}

/// Runs Protocol I over a caller-supplied registry and agreement policy.
pub fn run_protocol_one_with(
    config: &ElectionConfig,
    mut registry: EbitRegistry,
    policy: &AgreementPolicy,
) -> Result<ElectionOutcome> {
    let referee = config.referee();
    let len = config.address_len();
    let mut transcript = Transcript::new();
    transcript.broadcast_start(referee, config.n());

    let mut measured = Vec::with_capacity(config.n() as usize);
    for agent in config.agents() {
        measured.push(registry.shared_random_string(agent)?);
    }
    let address_bits = measured[referee.slot()].clone();

    let mut audits = Vec::new();
    if config.audit_enabled() {
        let root = RandomSource::new(config.master_seed());
        for agent in config.agents().filter(|&a| a != referee) {
            let report = report_measurements(
                config.behavior(agent),
                &measured[agent.slot()],
                &mut root.derive(&format!("audit-{}", agent.index())),
            );
            transcript.send(agent, referee, report.clone(), phase::AUDIT);
            for k in 1..=len {
                audits.push(audit_report(
                    &mut registry,
                    referee,
                    agent,
                    k,
                    report.bits()[k - 1],
                )?);
            }
        }
    }

    let agreement = conclude(config, &mut transcript, &address_bits, policy)?;
    Ok(ElectionOutcome {
        protocol: ProtocolKind::Quantum,
        leader: agreement.leader,
        address_bits,
        agreements: agreement.agreements,
        discarded: agreement.discarded,
        transcript,
        votes: Vec::new(),
        selection: None,
        audits,
    })
}

/// Honest agents report what they measured; biased agents report bits drawn at their bias.
fn report_measurements(
    behavior: AgentBehavior,
    measured: &BitString,
    rng: &mut RandomSource,
) -> BitString {
    match behavior {
        AgentBehavior::Honest => measured.clone(),
        AgentBehavior::Biased(q) => measured.bits().iter().map(|_| rng.bernoulli(q)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netsim::phase;

    fn biased_config(n: u32, seed: u64) -> ElectionConfig {
        let behaviors = (0..n)
            .map(|i| if i % 2 == 0 { AgentBehavior::Biased(1.0) } else { AgentBehavior::Honest })
            .collect();
        ElectionConfig::new(n, AgentId::new(1), behaviors, seed).unwrap()
    }

    #[test]
    fn ledger_constants_n8() {
        let mut seen = [false; 2];
        for seed in 0..200 {
            let config = ElectionConfig::all_honest(8, seed).unwrap();
            let outcome = run_protocol_one(&config).unwrap();
            let away = outcome.leader != config.referee();
            assert_eq!(outcome.total_cbits(), if away { 22 } else { 21 });
            seen[usize::from(away)] = true;
        }
        assert_eq!(seen, [true, true]);
    }

    #[test]
    fn baseline_agreement() {
        let outcome = run_protocol_one(&ElectionConfig::all_honest(16, 3).unwrap()).unwrap();
        assert!(outcome.discarded.is_empty());
        assert_eq!(outcome.agreements, vec![true; 16]);
        assert_eq!(outcome.participants().count(), 16);
        assert_eq!(outcome.protocol, ProtocolKind::Quantum);
    }

    #[test]
    fn exhaustive_addresses_cover_every_agent_once() {
        let config = ElectionConfig::all_honest(16, 0).unwrap();
        let mut leaders: Vec<_> = (0..16)
            .map(|v| {
                let registry = EbitRegistry::with_outcomes(16, &BitString::from_value(v, 4)).unwrap();
                run_protocol_one_with(&config, registry, &AgreementPolicy::all_agree())
                    .unwrap()
                    .leader
                    .index()
            })
            .collect();
        leaders.sort_unstable();
        assert_eq!(leaders, (1..=16).collect::<Vec<_>>());
    }

    #[test]
    fn refusals_are_discarded() {
        let config = ElectionConfig::all_honest(8, 0).unwrap();
        let registry = EbitRegistry::with_outcomes(8, &"011".parse().unwrap()).unwrap();
        let leader = AgentId::new(4);
        let policy = AgreementPolicy::refusing([AgentId::new(2), AgentId::new(7), leader]);
        let outcome = run_protocol_one_with(&config, registry, &policy).unwrap();
        assert_eq!(outcome.leader, leader);
        assert_eq!(
            outcome.discarded.iter().map(|a| a.index()).collect::<Vec<_>>(),
            vec![2, 7]
        );
        assert!(outcome.agreements[leader.slot()]);
        assert!(outcome.participants().all(|a| !outcome.discarded.contains(&a)));
        assert_eq!(outcome.total_cbits(), 22);
    }

    #[test]
    fn behaviors_do_not_move_the_leader() {
        for seed in 0..50 {
            let honest = run_protocol_one(&ElectionConfig::all_honest(32, seed).unwrap()).unwrap();
            let biased = run_protocol_one(&biased_config(32, seed)).unwrap();
            let other_referee = ElectionConfig::new(
                32,
                AgentId::new(17),
                vec![AgentBehavior::Honest; 32],
                seed,
            )
            .unwrap();
            assert_eq!(honest.leader, biased.leader);
            assert_eq!(honest.leader, run_protocol_one(&other_referee).unwrap().leader);
        }
    }

    #[test]
    fn audit_flags_lies_without_moving_the_leader() {
        let mut lies = 0;
        for seed in 0..50 {
            let plain = run_protocol_one(&biased_config(8, seed)).unwrap();
            let audited = run_protocol_one(&biased_config(8, seed).with_audit(true)).unwrap();
            assert_eq!(plain.leader, audited.leader);
            assert_eq!(plain.address_bits, audited.address_bits);
            assert_eq!(audited.audits.len(), 7 * 3);
            assert_eq!(audited.transcript.phase_cbits(phase::AUDIT), 7 * 3);
            for verdict in &audited.audits {
                assert_eq!(verdict.lied, verdict.reported != verdict.truth);
                assert_eq!(verdict.truth, audited.address_bits.bits()[verdict.state_index - 1]);
                if config_is_honest(verdict.agent) {
                    assert!(!verdict.lied);
                }
                lies += usize::from(verdict.lied);
            }
        }
        assert!(lies > 0);
    }

    fn config_is_honest(agent: AgentId) -> bool {
        agent.slot() % 2 == 1
    }

    #[test]
    fn direct_audits() {
        let mut registry = EbitRegistry::with_outcomes(4, &"10".parse().unwrap()).unwrap();
        let (referee, agent) = (AgentId::new(1), AgentId::new(3));
        assert!(!audit_report(&mut registry, referee, agent, 1, true).unwrap().lied);
        assert!(audit_report(&mut registry, referee, agent, 2, true).unwrap().lied);
        assert!(audit_report(&mut registry, referee, agent, 3, true).is_err());
    }

    #[test]
    fn measurement_is_free() {
        let outcome = run_protocol_one(&ElectionConfig::all_honest(64, 9).unwrap()).unwrap();
        let phases: std::collections::BTreeSet<_> =
            outcome.transcript.records().iter().map(|r| r.phase_label).collect();
        assert_eq!(
            phases.into_iter().collect::<Vec<_>>(),
            vec![phase::AGREEMENT, phase::AGREEMENT_REQUEST, phase::INFORM_LEADER, phase::START]
        );
    }
}
