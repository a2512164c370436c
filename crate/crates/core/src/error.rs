use thiserror::Error;

/// Errors raised by the solver toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |m_ij - conj(m_ji)| = {deviation:.3e}")]
    NonHermitianInput { deviation: f64 },

    #[error("numerical breakdown: {0}")]
    NumericalBreakdown(String),

    #[error("waterfilling needs at least one positive gain")]
    EmptyGains,

    #[error("antenna index {index} out of range for {ground} antennas")]
    IndexOutOfRange { index: usize, ground: usize },

    #[error("CSIT objective requires n_t >= n_r (n_t = {n_t}, n_r = {n_r})")]
    ModeMismatch { n_t: usize, n_r: usize },

    #[error("ground set of {size} elements exceeds the enumeration limit of {limit}")]
    GroundSetTooLarge { size: usize, limit: usize },

    #[error("instance is infeasible: total harvestable power {total:.6} W below p_c = {p_c:.6} W")]
    InfeasibleInstance { total: f64, p_c: f64 },

    #[error("point leaves the working polytope: {0}")]
    PolytopeViolation(String),

    #[error("optimum value {0:.3e} is too close to zero for a ratio")]
    DegenerateOptimum(f64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
