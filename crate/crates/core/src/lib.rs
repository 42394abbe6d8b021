//! Simulation of a post-selected beam-splitter protocol that concentrates
//! entanglement in two-qubit polarization states.
//!
//! A two-photon state is written as a 4×4 density matrix in the fixed basis
//! `(VV, VH, HV, HH)`. Each of the four polarization modes passes a beam
//! splitter with amplitude transmission `η`, and only coincidence events (one
//! photon surviving on each side) are kept. Tuning the four `η` values acts as
//! a local filter that can raise entanglement, raise purity, or both.
//!
//! Modules, bottom-up:
//!
//! * [`linalg`]: small dense complex matrices and a Jacobi Hermitian eigensolver.
//! * [`states`]: density matrices and the pure, mixed and Werner state families.
//! * [`measures`]: concurrence, entanglement of formation, log-4 entropy, purity.
//! * [`protocol`]: the beam-splitter map, its Fock-space oracle, and distillation settings.
//! * [`optimize`]: η sweeps, EOF maximisation, and concentration search.

pub mod error;
pub mod linalg;
pub mod measures;
pub mod optimize;
pub mod protocol;
pub mod states;
pub mod tolerances;

#[cfg(test)]
pub(crate) mod test_util;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, Eigen};
pub use measures::EntanglementMetrics;
pub use optimize::{Classification, ConcentrationReport, SearchMode, Sweep, SweepPoint};
pub use protocol::{BeamSplitterSettings, ProtocolOutcome};
pub use states::{Bell, DensityMatrix, StateFamilyParams, StateJson, ValidationReport};

pub use num_complex::Complex64;
