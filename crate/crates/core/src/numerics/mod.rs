//! Dense complex linear algebra and random sampling used by the capacity objectives.

mod hermitian;
mod matrix;
mod sampling;
mod waterfill;

pub use hermitian::{
    hermitian_eigen, hermitian_eigenvalues, log_det_i_plus, psd_eigenvalues, HermitianEigen, HERMITIAN_TOL,
};
pub use matrix::ComplexMatrix;
pub use sampling::{complex_gaussian, sample_complex_gaussian};
pub use waterfill::{parallel_rate, waterfill, PowerAllocation};

/// Nats to bits.
pub fn nats_to_bits(nats: f64) -> f64 {
    nats / std::f64::consts::LN_2
}
