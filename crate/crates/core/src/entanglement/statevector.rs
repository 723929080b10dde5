//! Sparse amplitude simulator for GHZ preparation and computational-basis
//! measurement with Born-rule collapse.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::rng::RandomSource;

pub const MAX_ORACLE_QUBITS: usize = 16;

/// Branch masses within this distance of 0 or 1 are treated as certain.
const CERTAINTY_EPS: f64 = 1e-12;

/// Nonzero amplitudes keyed by basis label; bit `q` of the label is qubit `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseQuantumState {
    n_qubits: usize,
    amplitudes: BTreeMap<u64, Complex64>,
}

impl SparseQuantumState {
    /// `(|0...0> + |1...1>)/sqrt(2)` on `n_qubits` qubits.
    pub fn ghz(n_qubits: usize) -> Result<Self> {
        if !(2..=MAX_ORACLE_QUBITS).contains(&n_qubits) {
            return Err(Error::TooManyQubits { n_qubits });
        }
        let weight = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let all_ones = (1u64 << n_qubits) - 1;
        Ok(Self {
            n_qubits,
            amplitudes: BTreeMap::from([(0, weight), (all_ones, weight)]),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &BTreeMap<u64, Complex64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, label: u64) -> Complex64 {
        self.amplitudes.get(&label).copied().unwrap_or_default()
    }

    /// `sum |a|^2`.
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    /// Probability of observing basis `label` if every qubit were measured.
    pub fn probability(&self, label: u64) -> f64 {
        self.amplitude(label).norm_sqr()
    }

    fn branch_mass(&self, qubit: usize, bit: bool) -> f64 {
        self.amplitudes
            .iter()
            .filter(|(&label, _)| (label >> qubit & 1 == 1) == bit)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Born probability that measuring `qubit` gives 1, normalized by the state's norm.
    pub fn prob_one(&self, qubit: usize) -> f64 {
        self.branch_mass(qubit, true) / self.norm_sqr()
    }

    /// Born probability that measuring `qubit` gives 0.
    pub fn prob_zero(&self, qubit: usize) -> f64 {
        self.branch_mass(qubit, false) / self.norm_sqr()
    }

    /// Measures `qubit` and collapses the state onto the observed branch.
    ///
    /// Randomness is consumed only when both outcomes have nonzero mass.
    pub fn measure(&mut self, qubit: usize, rng: &mut RandomSource) -> bool {
        let p_one = self.prob_one(qubit);
        let outcome = if p_one <= CERTAINTY_EPS {
            false
        } else if p_one >= 1.0 - CERTAINTY_EPS {
            true
        } else {
            rng.unit() < p_one
        };
        self.collapse(qubit, outcome);
        outcome
    }

    fn collapse(&mut self, qubit: usize, outcome: bool) {
        self.amplitudes
            .retain(|&label, _| (label >> qubit & 1 == 1) == outcome);
        let scale = self.norm_sqr().sqrt();
        for amplitude in self.amplitudes.values_mut() {
            *amplitude /= scale;
        }
    }
}

/// Prepares a GHZ state and measures qubits in `order`; returns outcomes by qubit index.
pub fn statevector_oracle(
    n_qubits: usize,
    order: &[usize],
    rng: &mut RandomSource,
) -> Result<Vec<bool>> {
    let mut state = SparseQuantumState::ghz(n_qubits)?;
    let mut seen = vec![false; n_qubits];
    if order.len() != n_qubits {
        return Err(Error::InvalidMeasurementOrder { n_qubits });
    }
    for &q in order {
        if q >= n_qubits || std::mem::replace(&mut seen[q], true) {
            return Err(Error::InvalidMeasurementOrder { n_qubits });
        }
    }
    let mut outcomes = vec![false; n_qubits];
    for &q in order {
        outcomes[q] = state.measure(q, rng);
    }
    Ok(outcomes)
}
