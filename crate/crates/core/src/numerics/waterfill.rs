use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-channel powers and the water level `μ` that produced them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerAllocation {
    pub powers: Vec<f64>,
    pub water_level: f64,
}

impl PowerAllocation {
    /// `Σ ln(1 + λ_i p_i)` for the gains the allocation was computed on.
    pub fn rate(&self, gains: &[f64]) -> f64 {
        parallel_rate(gains, &self.powers)
    }

    pub fn total_power(&self) -> f64 {
        self.powers.iter().sum()
    }
}

/// Sum rate in nats of parallel Gaussian channels with the given gains and powers.
pub fn parallel_rate(gains: &[f64], powers: &[f64]) -> f64 {
    gains.iter().zip(powers).map(|(l, p)| (l * p).ln_1p()).sum()
}

/// Capacity-optimal split of `budget` over parallel channels,
/// `p_i = max(μ − 1/λ_i, 0)` with `Σ p_i = budget`.
///
/// Sorts gains descending, grows the active set one channel at a time and
/// keeps the largest prefix whose weakest channel still gets positive power.
pub fn waterfill(gains: &[f64], budget: f64) -> Result<PowerAllocation> {
    if gains.is_empty() {
        return Err(Error::EmptyGains);
    }
    if let Some(g) = gains.iter().find(|g| !(**g > 0.0 && g.is_finite())) {
        return Err(Error::InvalidArgument(format!(
            "channel gain {g} is not positive"
        )));
    }
    if !(budget > 0.0 && budget.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "power budget {budget} is not positive"
        )));
    }

    let mut order: Vec<usize> = (0..gains.len()).collect();
    order.sort_by(|&a, &b| gains[b].total_cmp(&gains[a]).then(a.cmp(&b)));

    let mut inv_sum = 0.0;
    let mut level = budget + 1.0 / gains[order[0]];
    for (k, &idx) in order.iter().enumerate() {
        let inv = 1.0 / gains[idx];
        let candidate = (budget + inv_sum + inv) / (k + 1) as f64;
        if candidate - inv <= 0.0 {
            break;
        }
        inv_sum += inv;
        level = candidate;
    }

    let powers = gains.iter().map(|&g| (level - 1.0 / g).max(0.0)).collect();
    Ok(PowerAllocation {
        powers,
        water_level: level,
    })
}
