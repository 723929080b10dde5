//! Shared n-partite GHZ states and their measurement semantics.
//!
//! Protocol runs use [`EbitRegistry`], which represents each GHZ state by the
//! single fair bit that every computational-basis measurement of it reveals.
//! [`statevector`] holds a small sparse simulator that derives the same
//! behavior from amplitudes, used to check the identification at desk scale.

mod registry;
pub mod statevector;

pub use registry::{create_registry, EbitRegistry, GhzState};
pub use statevector::{statevector_oracle, SparseQuantumState};
