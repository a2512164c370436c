use std::fmt;
use std::str::FromStr;

use rand::Rng;
use swipt_core::model::generate_instance;
use swipt_core::oracle::{
    check_downward_closure_sampled, check_exchange_axiom, check_monotone, check_submodular,
    check_waterfilling, PropertyReport,
};
use swipt_core::rng::stream;
use swipt_core::set_function::MemoOracle;
use swipt_core::{
    Beamformer, CapacityObjective, ChannelInstance, CircuitPowerSystem, CsiMode, ObjectiveSpec,
};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Submodularity,
    Monotonicity,
    DownwardClosure,
    Exchange,
    Waterfilling,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Submodularity,
        Suite::Monotonicity,
        Suite::DownwardClosure,
        Suite::Exchange,
        Suite::Waterfilling,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Submodularity => "submodularity",
            Suite::Monotonicity => "monotonicity",
            Suite::DownwardClosure => "downward_closure",
            Suite::Exchange => "exchange",
            Suite::Waterfilling => "waterfilling",
        }
    }

    /// The exchange report is informational and never fails the run.
    pub fn passes(self, report: &PropertyReport) -> bool {
        self == Suite::Exchange || report.passed()
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| CliError::UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    /// Samples per instance (waterfilling: number of random instances).
    pub trials: usize,
    pub seed: u64,
    pub mode: CsiMode,
    pub instances: usize,
    pub n_t: usize,
    pub max_n_r: usize,
    pub power_watts: f64,
    /// Circuit-power threshold per receive antenna.
    pub pc_coefficient: f64,
}

impl VerifyOptions {
    pub fn new(trials: usize, seed: u64, mode: CsiMode) -> Self {
        Self {
            trials,
            seed,
            mode,
            instances: 20,
            n_t: 5,
            max_n_r: 12,
            power_watts: 5.0,
            pc_coefficient: 0.2,
        }
    }
}

/// Instance `k` of a suite: `n_r` uniform on `2..=max_n_r`.
pub fn suite_instance(opts: &VerifyOptions, k: usize, max_n_r: usize) -> Result<ChannelInstance> {
    let mut rng = stream(opts.seed, &[k as u64]);
    let n_r = rng.random_range(2..=max_n_r.max(2));
    Ok(generate_instance(&mut rng, opts.n_t, n_r, 4, &Beamformer::Mrt)?)
}

fn constraint_of(opts: &VerifyOptions, ch: &ChannelInstance) -> Result<CircuitPowerSystem> {
    Ok(CircuitPowerSystem::new(
        ch.harvest_weights(),
        opts.pc_coefficient * ch.n_r() as f64,
    )?)
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<PropertyReport> {
    let mut report = PropertyReport::new(suite.name());
    if suite == Suite::Waterfilling {
        return Ok(check_waterfilling(
            opts.trials,
            1000,
            &mut stream(opts.seed, &[u64::MAX]),
        )?);
    }
    // Exhaustive pair enumeration is quadratic in 2^n, so exchange instances stay small.
    let max_n_r = if suite == Suite::Exchange {
        opts.max_n_r.min(8)
    } else {
        opts.max_n_r
    };
    let spec = ObjectiveSpec::new(opts.power_watts, opts.mode)?;
    for k in 0..opts.instances {
        let ch = suite_instance(opts, k, max_n_r)?;
        let mut rng = stream(opts.seed, &[k as u64, 1]);
        let part = match suite {
            Suite::Submodularity | Suite::Monotonicity => {
                let f = MemoOracle::new(CapacityObjective::new(spec, &ch)?);
                if suite == Suite::Submodularity {
                    check_submodular(&f, opts.trials, &mut rng)?
                } else {
                    check_monotone(&f, opts.trials, &mut rng)?
                }
            }
            Suite::DownwardClosure => {
                check_downward_closure_sampled(&constraint_of(opts, &ch)?, opts.trials, &mut rng)
            }
            Suite::Exchange => check_exchange_axiom(&constraint_of(opts, &ch)?)?,
            Suite::Waterfilling => unreachable!(),
        };
        report.merge(part);
    }
    Ok(report)
}
