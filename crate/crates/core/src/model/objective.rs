use serde::{Deserialize, Serialize};

use super::instance::ChannelInstance;
use crate::error::{Error, Result};
use crate::numerics::{log_det_i_plus, psd_eigenvalues, waterfill};
use crate::set_function::{AntennaSet, SetFunction};

/// Which channel knowledge the transmitter has.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CsiMode {
    /// Receiver only: equal power `P/N_t` per transmit antenna.
    Csir,
    /// Transmitter too: waterfilling over the eigenmodes of the selected rows.
    Csit,
}

impl std::str::FromStr for CsiMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "csir" => Ok(CsiMode::Csir),
            "csit" => Ok(CsiMode::Csit),
            other => Err(format!("unknown mode `{other}` (expected csir or csit)")),
        }
    }
}

impl std::fmt::Display for CsiMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CsiMode::Csir => "csir",
            CsiMode::Csit => "csit",
        })
    }
}

/// Transmit power and CSI mode; together with a channel this fixes the set function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveSpec {
    pub total_power: f64,
    pub mode: CsiMode,
    /// Reject CSIT evaluation when `n_t < n_r`.
    pub require_nt_ge_nr: bool,
}

impl ObjectiveSpec {
    pub fn new(total_power: f64, mode: CsiMode) -> Result<Self> {
        if !(total_power > 0.0 && total_power.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "transmit power {total_power} must be > 0"
            )));
        }
        Ok(Self {
            total_power,
            mode,
            require_nt_ge_nr: false,
        })
    }

    #[must_use]
    pub fn strict_dimensions(mut self) -> Self {
        self.require_nt_ge_nr = true;
        self
    }
}

fn check_indices(channel: &ChannelInstance, it_set: AntennaSet) -> Result<()> {
    match it_set.max_index() {
        Some(index) if index >= channel.n_r() => Err(Error::IndexOutOfRange {
            index,
            ground: channel.n_r(),
        }),
        _ => Ok(()),
    }
}

/// `ln det(I + P/N_t · H_S H_S†)` in nats.
pub fn capacity_csir(spec: &ObjectiveSpec, channel: &ChannelInstance, it_set: AntennaSet) -> Result<f64> {
    check_indices(channel, it_set)?;
    if it_set.is_empty() {
        return Ok(0.0);
    }
    let rows = channel.h().select_rows(&it_set.to_vec());
    let scale = spec.total_power / channel.n_t() as f64;
    // det(I + c·A A†) = det(I + c·A† A); factor whichever side is smaller.
    let gram = if rows.rows() <= rows.cols() {
        rows.row_gram()
    } else {
        rows.col_gram()
    };
    log_det_i_plus(scale, &gram)
}

/// Nonzero eigenvalues of `H_S H_S†`, descending.
pub fn selected_eigenvalues(channel: &ChannelInstance, it_set: AntennaSet) -> Result<Vec<f64>> {
    check_indices(channel, it_set)?;
    if it_set.is_empty() {
        return Ok(Vec::new());
    }
    let rows = channel.h().select_rows(&it_set.to_vec());
    let gram = if rows.rows() <= rows.cols() {
        rows.row_gram()
    } else {
        rows.col_gram()
    };
    let values = psd_eigenvalues(&gram)?;
    let floor = 1e-12 * values.first().copied().unwrap_or(0.0).max(1.0);
    Ok(values.into_iter().filter(|&l| l > floor).collect())
}

/// Waterfilled rate `max Σ ln(1 + λ_i p_i)` over `Σ p_i ≤ P`, in nats.
pub fn capacity_csit(spec: &ObjectiveSpec, channel: &ChannelInstance, it_set: AntennaSet) -> Result<f64> {
    if spec.require_nt_ge_nr && channel.n_t() < channel.n_r() {
        return Err(Error::ModeMismatch {
            n_t: channel.n_t(),
            n_r: channel.n_r(),
        });
    }
    let gains = selected_eigenvalues(channel, it_set)?;
    if gains.is_empty() {
        return Ok(0.0);
    }
    Ok(waterfill(&gains, spec.total_power)?.rate(&gains))
}

/// Capacity under `spec.mode`.
pub fn capacity(spec: &ObjectiveSpec, channel: &ChannelInstance, it_set: AntennaSet) -> Result<f64> {
    match spec.mode {
        CsiMode::Csir => capacity_csir(spec, channel, it_set),
        CsiMode::Csit => capacity_csit(spec, channel, it_set),
    }
}

/// Capacity of the IT set as a [`SetFunction`] over the receive antennas.
#[derive(Debug, Clone, Copy)]
pub struct CapacityObjective<'a> {
    spec: ObjectiveSpec,
    channel: &'a ChannelInstance,
}

impl<'a> CapacityObjective<'a> {
    pub fn new(spec: ObjectiveSpec, channel: &'a ChannelInstance) -> Result<Self> {
        if spec.mode == CsiMode::Csit && spec.require_nt_ge_nr && channel.n_t() < channel.n_r() {
            return Err(Error::ModeMismatch {
                n_t: channel.n_t(),
                n_r: channel.n_r(),
            });
        }
        Ok(Self { spec, channel })
    }

    pub fn spec(&self) -> &ObjectiveSpec {
        &self.spec
    }

    pub fn channel(&self) -> &ChannelInstance {
        self.channel
    }
}

impl SetFunction for CapacityObjective<'_> {
    fn ground_size(&self) -> usize {
        self.channel.n_r()
    }

    fn value(&self, set: AntennaSet) -> f64 {
        capacity(&self.spec, self.channel, set)
            .unwrap_or_else(|e| panic!("capacity evaluation failed on {set:?}: {e}"))
    }
}
