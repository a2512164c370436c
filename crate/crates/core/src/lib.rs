//! Receive-antenna partitioning for simultaneous wireless information and power
//! transfer.
//!
//! A multi-antenna receiver assigns each antenna either to information transfer
//! (IT) or to power transfer (PT). The IT capacity is monotone in the IT set and,
//! with equal power per transmit antenna, submodular; the waterfilled capacity can
//! break submodularity once four or more receive antennas are involved. The
//! harvested-power requirement is a downward-closed constraint on the IT set. This crate provides:
//!
//! * [`numerics`]: Hermitian log-det and eigendecomposition, waterfilling, CN(0,1) sampling;
//! * [`model`]: channel instances, CSIR/CSIT capacity objectives, the circuit-power system;
//! * [`algorithms`]: max-weight independent set, greedy partitioning, brute force;
//! * [`continuous`]: multilinear extension, continuous greedy, pipage rounding;
//! * [`oracle`]: property checkers for submodularity, monotonicity and independence axioms.

pub mod algorithms;
pub mod continuous;
pub mod error;
pub mod model;
pub mod numerics;
pub mod oracle;
pub mod rng;
pub mod set_function;

pub use algorithms::{
    brute_force, greedy_partition, max_weight_independent_set, GreedyVariant, SolveResult, SolveStatus,
};
pub use continuous::{
    continuous_greedy, continuous_greedy_solve, multilinear_estimate, multilinear_exact, pipage_round,
    ContinuousGreedyConfig, FractionalPoint,
};
pub use error::{Error, Result};
pub use model::{
    Assignment, Beamformer, CapacityObjective, ChannelInstance, CircuitPowerSystem, CsiMode, ObjectiveSpec,
    Problem,
};
pub use numerics::ComplexMatrix;
pub use oracle::PropertyReport;
pub use set_function::{AntennaSet, SetFunction};
