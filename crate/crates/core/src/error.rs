use thiserror::Error;

/// Errors raised by configuration, simulation and analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("agent count {n} is not a power of two >= 2")]
    NotPowerOfTwo { n: u64 },
    #[error("expected {expected} agent behaviors, got {got}")]
    BehaviorCountMismatch { expected: usize, got: usize },
    #[error("referee A{referee} is outside [1, {n}]")]
    RefereeOutOfRange { referee: u32, n: u32 },
    #[error("agent A{agent} is outside [1, {n}]")]
    AgentOutOfRange { agent: u32, n: u32 },
    #[error("agent A{agent} is marked biased with bias 1/2, which is honest behavior")]
    HalfBias { agent: u32 },
    #[error("bias {bias} of agent A{agent} is not a probability")]
    BiasOutOfRange { agent: u32, bias: f64 },
    #[error("state index {k} is outside [1, {len}]")]
    StateIndexOutOfRange { k: usize, len: usize },
    #[error("statevector oracle supports 2..=16 qubits, got {n_qubits}")]
    TooManyQubits { n_qubits: usize },
    #[error("measurement order is not a permutation of 0..{n_qubits}")]
    InvalidMeasurementOrder { n_qubits: usize },
    #[error("address has {got} bits, expected {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("cannot sample {len} positions out of {n}")]
    SampleTooLarge { len: usize, n: usize },
    #[error("outcome was produced by {found}, expected {expected}")]
    WrongProtocol { expected: &'static str, found: &'static str },
    #[error("biased count {k} must lie in [0, {n}]")]
    KOutOfRange { k: u64, n: u64 },
    #[error("({n}, {k}) is outside the estimate's range k < n - log2(n)")]
    OutOfRange { n: u64, k: u64 },
    #[error("limit constant {c} must be positive and finite")]
    NonPositiveConstant { c: f64 },
    #[error("at least one trial is required")]
    NoTrials,
    #[error("{total} samples over {cells} cells is below the 10-per-cell floor")]
    TooFewSamples { total: u64, cells: usize },
    #[error("significance level {alpha} is not in (0, 1)")]
    InvalidAlpha { alpha: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
