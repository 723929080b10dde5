//! Fair leader election among `n` agents.
//!
//! Two protocols are simulated over an exact cbit ledger:
//!
//! * [`protocol::run_protocol_one`] elects a leader from `log2(n)` shared GHZ
//!   states. The result is uniform no matter how agents behave.
//! * [`protocol::run_protocol_two`] elects a leader from one vote bit per agent.
//!   Biased voters skew the result whenever the referee samples their votes.
//!
//! [`analysis`] evaluates the probability that the referee's sample avoids
//! every biased vote, exactly and through its Stirling-form estimate, and
//! provides the uniformity test used to detect skewed elections.

pub mod analysis;
pub mod bits;
pub mod cli;
pub mod config;
pub mod entanglement;
pub mod error;
pub mod experiment;
pub mod netsim;
pub mod protocol;
pub mod rng;

pub use bits::BitString;
pub use config::{make_config, AgentBehavior, AgentId, ElectionConfig};
pub use error::{Error, Result};
pub use protocol::{run_protocol_one, run_protocol_two, ElectionOutcome, ProtocolKind};
pub use rng::{derive_stream, RandomSource};
