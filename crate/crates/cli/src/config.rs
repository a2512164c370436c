use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use swipt_core::algorithms::BRUTE_FORCE_LIMIT;
use swipt_core::set_function::MAX_GROUND;
use swipt_core::{ContinuousGreedyConfig, CsiMode};

use crate::error::{CliError, Result};

/// Circuit-power threshold as a function of the receive-array size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PcRule {
    /// `p_c = coefficient · n_r` watts.
    Scaled(f64),
    /// `p_c` watts regardless of `n_r`.
    Fixed(f64),
}

impl PcRule {
    pub fn threshold(&self, n_r: usize) -> f64 {
        match *self {
            PcRule::Scaled(c) => c * n_r as f64,
            PcRule::Fixed(w) => w,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Greedy,
    #[value(name = "continuous_greedy")]
    ContinuousGreedy,
    #[value(name = "brute_force")]
    BruteForce,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [
        Algorithm::Greedy,
        Algorithm::ContinuousGreedy,
        Algorithm::BruteForce,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Greedy => "greedy",
            Algorithm::ContinuousGreedy => "continuous_greedy",
            Algorithm::BruteForce => "brute_force",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm `{s}`"))
    }
}

/// Optional replacements for the per-instance continuous-greedy defaults.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CgOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples_per_weight: Option<usize>,
}

fn default_n_p() -> usize {
    4
}

fn default_power() -> f64 {
    swipt_core::model::DEFAULT_POWER_WATTS
}

fn default_trials() -> usize {
    500
}

fn default_algorithms() -> Vec<Algorithm> {
    Algorithm::ALL.to_vec()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n_t: usize,
    pub n_r_list: Vec<usize>,
    #[serde(default = "default_n_p")]
    pub n_p: usize,
    #[serde(default = "default_power")]
    pub power_watts: f64,
    pub pc_rule: PcRule,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    pub mode: CsiMode,
    #[serde(default = "default_algorithms")]
    pub algorithms: Vec<Algorithm>,
    #[serde(default)]
    pub cg_overrides: CgOverrides,
}

impl ExperimentConfig {
    /// Defaults for everything except the array sizes, threshold rule and mode.
    pub fn new(n_t: usize, n_r_list: Vec<usize>, pc_rule: PcRule, mode: CsiMode) -> Self {
        Self {
            n_t,
            n_r_list,
            n_p: default_n_p(),
            power_watts: default_power(),
            pc_rule,
            trials: default_trials(),
            seed: 0,
            mode,
            algorithms: default_algorithms(),
            cg_overrides: CgOverrides::default(),
        }
    }

    pub fn from_json(text: &str, path: &Path) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|source| CliError::Parse {
            path: path.to_path_buf(),
            source,
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text, path)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if self.trials == 0 {
            return bad("`trials` must be >= 1".into());
        }
        if self.n_t == 0 || self.n_p == 0 {
            return bad("`n_t` and `n_p` must be >= 1".into());
        }
        if self.n_r_list.is_empty() {
            return bad("`n_r_list` must not be empty".into());
        }
        if let Some(n) = self.n_r_list.iter().find(|&&n| n == 0 || n > MAX_GROUND) {
            return bad(format!("`n_r_list` entry {n} outside 1..={MAX_GROUND}"));
        }
        if !(self.power_watts > 0.0 && self.power_watts.is_finite()) {
            return bad(format!(
                "`power_watts` must be finite and > 0, got {}",
                self.power_watts
            ));
        }
        match self.pc_rule {
            PcRule::Scaled(c) if !(c >= 0.0 && c.is_finite()) => {
                return bad(format!("`pc_rule.scaled` coefficient must be >= 0, got {c}"));
            }
            PcRule::Fixed(w) if !(w >= 0.0 && w.is_finite()) => {
                return bad(format!("`pc_rule.fixed` must be >= 0 watts, got {w}"));
            }
            _ => {}
        }
        if self.algorithms.is_empty() {
            return bad("`algorithms` must not be empty".into());
        }
        for (k, a) in self.algorithms.iter().enumerate() {
            if self.algorithms[..k].contains(a) {
                return bad(format!("`algorithms` lists {a} twice"));
            }
        }
        if self.algorithms.contains(&Algorithm::BruteForce) {
            if let Some(n) = self.n_r_list.iter().find(|&&n| n > BRUTE_FORCE_LIMIT) {
                return bad(format!(
                    "brute_force supports n_r <= {BRUTE_FORCE_LIMIT}, got {n}"
                ));
            }
        }
        self.cg_config(1, 0)
            .validate()
            .map_err(|e| CliError::Config(format!("`cg_overrides`: {e}")))
    }

    pub fn cg_config(&self, n: usize, seed: u64) -> ContinuousGreedyConfig {
        let mut cfg = ContinuousGreedyConfig::for_ground_size(n, seed);
        if let Some(step) = self.cg_overrides.step {
            cfg.step = step;
        }
        if let Some(s) = self.cg_overrides.samples_per_weight {
            cfg.samples_per_weight = s;
        }
        cfg
    }
}
