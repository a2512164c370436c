use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::set_function::AntennaSet;

/// Slack that lets exact-equality boundary sets count as feasible.
pub const FEASIBILITY_SLACK: f64 = 1e-12;

/// Circuit-power independence system: an IT set is independent when the antennas
/// left for power transfer still harvest at least `p_c`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitPowerSystem {
    weights: Vec<f64>,
    p_c: f64,
    total: f64,
}

impl CircuitPowerSystem {
    pub fn new(weights: Vec<f64>, p_c: f64) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| !(**w >= 0.0 && w.is_finite())) {
            return Err(Error::InvalidArgument(format!(
                "harvest weight {w} must be finite and >= 0"
            )));
        }
        if !(p_c >= 0.0 && p_c.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "p_c = {p_c} must be finite and >= 0"
            )));
        }
        let total = weights.iter().sum();
        Ok(Self { weights, p_c, total })
    }

    /// No constraint at all: every set is independent.
    pub fn unconstrained(n: usize) -> Self {
        Self::new(vec![0.0; n], 0.0).expect("zero weights are valid")
    }

    pub fn ground_size(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn p_c(&self) -> f64 {
        self.p_c
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    /// Harvest weight an IT set may take away, `total − p_c` (negative when infeasible).
    pub fn budget(&self) -> f64 {
        self.total - self.p_c
    }

    /// Harvest weight of the antennas in `set`.
    pub fn weight_of(&self, set: AntennaSet) -> f64 {
        set.iter().map(|i| self.weights[i]).sum()
    }

    /// Power harvested by the antennas outside `set`.
    pub fn harvested(&self, it_set: AntennaSet) -> f64 {
        self.weights
            .iter()
            .enumerate()
            .filter(|(i, _)| !it_set.contains(*i))
            .map(|(_, w)| w)
            .sum()
    }

    pub fn is_independent(&self, it_set: AntennaSet) -> bool {
        debug_assert!(it_set.max_index().is_none_or(|i| i < self.weights.len()));
        self.harvested(it_set) >= self.p_c - FEASIBILITY_SLACK
    }

    /// Whether even the all-PT assignment meets the threshold.
    pub fn is_feasible(&self) -> bool {
        self.is_independent(AntennaSet::EMPTY)
    }
}
