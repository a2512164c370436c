//! Problem data for receive-antenna partitioning: the channel, the two capacity
//! objectives, and the circuit-power independence system.

mod constraint;
mod instance;
mod objective;

use serde::{Deserialize, Serialize};

pub use constraint::{CircuitPowerSystem, FEASIBILITY_SLACK};
use instance::ChannelRecord;
pub use instance::{generate_instance, Beamformer, ChannelInstance};
pub use objective::{
    capacity, capacity_csir, capacity_csit, selected_eigenvalues, CapacityObjective, CsiMode, ObjectiveSpec,
};

use crate::error::{Error, Result};
use crate::set_function::AntennaSet;

/// Binary IT/PT split of the receive antennas (`1` = information, `0` = power).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Assignment {
    n: usize,
    it: AntennaSet,
}

impl Assignment {
    /// Everything on power transfer.
    pub fn all_power(n: usize) -> Self {
        Self {
            n,
            it: AntennaSet::EMPTY,
        }
    }

    pub fn from_set(n: usize, it: AntennaSet) -> Result<Self> {
        match it.max_index() {
            Some(index) if index >= n => Err(Error::IndexOutOfRange { index, ground: n }),
            _ => Ok(Self { n, it }),
        }
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let mut it = AntennaSet::EMPTY;
        for (i, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 => it = it.with(i),
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "assignment entry {i} is {other}, not 0/1"
                    )))
                }
            }
        }
        Ok(Self { n: bits.len(), it })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn it_set(&self) -> AntennaSet {
        self.it
    }

    pub fn bits(&self) -> Vec<u8> {
        self.it.indicator(self.n)
    }
}

impl Serialize for Assignment {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.bits().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Assignment {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let bits = Vec::<u8>::deserialize(d)?;
        Assignment::from_bits(&bits).map_err(serde::de::Error::custom)
    }
}

/// A channel plus the circuit-power threshold and transmit power; the on-disk problem file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProblemRecord", into = "ProblemRecord")]
pub struct Problem {
    pub channel: ChannelInstance,
    pub p_c: f64,
    pub power_watts: f64,
}

impl Problem {
    pub fn constraint(&self) -> Result<CircuitPowerSystem> {
        CircuitPowerSystem::new(self.channel.harvest_weights(), self.p_c)
    }

    pub fn objective_spec(&self, mode: CsiMode) -> Result<ObjectiveSpec> {
        ObjectiveSpec::new(self.power_watts, mode)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemRecord {
    n_t: usize,
    n_r: usize,
    h: Vec<Vec<num_complex::Complex64>>,
    g: Vec<num_complex::Complex64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    p_c: f64,
    #[serde(default = "default_power")]
    power_watts: f64,
}

/// Transmit power assumed when a problem file omits `power_watts`.
pub const DEFAULT_POWER_WATTS: f64 = 5.0;

fn default_power() -> f64 {
    DEFAULT_POWER_WATTS
}

impl TryFrom<ProblemRecord> for Problem {
    type Error = String;

    fn try_from(r: ProblemRecord) -> std::result::Result<Self, String> {
        if !(r.p_c >= 0.0 && r.p_c.is_finite()) {
            return Err(format!("field `p_c`: {} must be finite and >= 0", r.p_c));
        }
        if !(r.power_watts > 0.0 && r.power_watts.is_finite()) {
            return Err(format!(
                "field `power_watts`: {} must be finite and > 0",
                r.power_watts
            ));
        }
        let channel = ChannelInstance::try_from(ChannelRecord {
            n_t: r.n_t,
            n_r: r.n_r,
            h: r.h,
            g: r.g,
            seed: r.seed,
        })?;
        Ok(Problem {
            channel,
            p_c: r.p_c,
            power_watts: r.power_watts,
        })
    }
}

impl From<Problem> for ProblemRecord {
    fn from(p: Problem) -> Self {
        let c = ChannelRecord::from(p.channel);
        ProblemRecord {
            n_t: c.n_t,
            n_r: c.n_r,
            h: c.h,
            g: c.g,
            seed: c.seed,
            p_c: p.p_c,
            power_watts: p.power_watts,
        }
    }
}
