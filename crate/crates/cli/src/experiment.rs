use std::time::Instant;

use rand::SeedableRng;
use rayon::prelude::*;
use serde::Serialize;
use swipt_core::model::generate_instance;
use swipt_core::numerics::nats_to_bits;
use swipt_core::oracle::approximation_ratio;
use swipt_core::rng::{derive_seed, StreamRng};
use swipt_core::set_function::{MemoOracle, SetFunction};
use swipt_core::{
    brute_force, continuous_greedy_solve, greedy_partition, Beamformer, CapacityObjective, ChannelInstance,
    CircuitPowerSystem, ContinuousGreedyConfig, GreedyVariant, ObjectiveSpec, SolveResult,
};

use crate::config::{Algorithm, ExperimentConfig};
use crate::error::Result;

/// One (n_r, algorithm) cell of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub n_r: usize,
    pub algorithm: Algorithm,
    /// Mean over feasible draws; `None` when every draw was infeasible.
    pub mean_throughput_bits: Option<f64>,
    /// Mean of value / brute-force value; `None` unless brute force was co-run.
    pub mean_ratio: Option<f64>,
    pub infeasible: usize,
    /// Feasible draws the means are taken over.
    pub trials: usize,
    /// Summed solve time for this algorithm across the cell's draws.
    pub wall_s: f64,
}

#[derive(Debug, Clone)]
pub struct AlgorithmRun {
    pub algorithm: Algorithm,
    pub result: SolveResult,
    pub seconds: f64,
}

/// Every requested solver on one random draw; `runs` is empty for infeasible draws.
#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub n_r: usize,
    pub trial: usize,
    pub feasible: bool,
    pub runs: Vec<AlgorithmRun>,
}

impl TrialOutcome {
    pub fn run(&self, algorithm: Algorithm) -> Option<&AlgorithmRun> {
        self.runs.iter().find(|r| r.algorithm == algorithm)
    }
}

pub fn trial_seed(cfg: &ExperimentConfig, n_r: usize, trial: usize) -> u64 {
    derive_seed(cfg.seed, &[n_r as u64, trial as u64])
}

/// The channel for draw `trial` at `n_r`; `swipt gen --seed <trial_seed>` reproduces it.
pub fn trial_instance(cfg: &ExperimentConfig, n_r: usize, trial: usize) -> Result<ChannelInstance> {
    let seed = trial_seed(cfg, n_r, trial);
    let mut rng = StreamRng::seed_from_u64(seed);
    let ch = generate_instance(&mut rng, cfg.n_t, n_r, cfg.n_p, &Beamformer::Mrt)?;
    Ok(ch.with_seed(Some(seed)))
}

pub fn solve_with<F: SetFunction>(
    algorithm: Algorithm,
    oracle: &F,
    sys: &CircuitPowerSystem,
    cg: &ContinuousGreedyConfig,
    variant: GreedyVariant,
) -> swipt_core::Result<SolveResult> {
    match algorithm {
        Algorithm::Greedy => greedy_partition(oracle, sys, variant),
        Algorithm::ContinuousGreedy => continuous_greedy_solve(oracle, sys, cg),
        Algorithm::BruteForce => brute_force(oracle, sys),
    }
}

pub fn solve_trial(cfg: &ExperimentConfig, n_r: usize, trial: usize) -> Result<TrialOutcome> {
    let ch = trial_instance(cfg, n_r, trial)?;
    let sys = CircuitPowerSystem::new(ch.harvest_weights(), cfg.pc_rule.threshold(n_r))?;
    let mut outcome = TrialOutcome {
        n_r,
        trial,
        feasible: sys.is_feasible(),
        runs: Vec::new(),
    };
    if !outcome.feasible {
        return Ok(outcome);
    }
    let spec = ObjectiveSpec::new(cfg.power_watts, cfg.mode)?;
    let cg = cfg.cg_config(n_r, derive_seed(trial_seed(cfg, n_r, trial), &[2]));
    for &algorithm in &cfg.algorithms {
        // A fresh memo per solver keeps the timings independent.
        let oracle = MemoOracle::new(CapacityObjective::new(spec, &ch)?);
        let start = Instant::now();
        let result = solve_with(algorithm, &oracle, &sys, &cg, GreedyVariant::default())?;
        outcome.runs.push(AlgorithmRun {
            algorithm,
            result,
            seconds: start.elapsed().as_secs_f64(),
        });
    }
    Ok(outcome)
}

/// All draws at `n_r`, in trial order; draws run in parallel on the current rayon pool.
pub fn run_trials(cfg: &ExperimentConfig, n_r: usize) -> Result<Vec<TrialOutcome>> {
    (0..cfg.trials)
        .into_par_iter()
        .map(|t| solve_trial(cfg, n_r, t))
        .collect()
}

pub fn aggregate(
    cfg: &ExperimentConfig,
    n_r: usize,
    outcomes: &[TrialOutcome],
) -> Result<Vec<ExperimentRow>> {
    let infeasible = outcomes.iter().filter(|o| !o.feasible).count();
    let feasible: Vec<&TrialOutcome> = outcomes.iter().filter(|o| o.feasible).collect();
    let with_opt = cfg.algorithms.contains(&Algorithm::BruteForce);
    let mut rows = Vec::with_capacity(cfg.algorithms.len());
    for &algorithm in &cfg.algorithms {
        let (mut bits, mut ratio, mut secs) = (0.0, 0.0, 0.0);
        for o in &feasible {
            let run = o.run(algorithm).expect("every algorithm runs on feasible draws");
            bits += nats_to_bits(run.result.value);
            secs += run.seconds;
            if with_opt {
                let opt = o.run(Algorithm::BruteForce).expect("brute force requested");
                ratio += approximation_ratio(run.result.value, opt.result.value)?;
            }
        }
        let used = feasible.len();
        let mean = |sum: f64| (used > 0).then(|| sum / used as f64);
        rows.push(ExperimentRow {
            n_r,
            algorithm,
            mean_throughput_bits: mean(bits),
            mean_ratio: if with_opt { mean(ratio) } else { None },
            infeasible,
            trials: used,
            wall_s: secs,
        });
    }
    Ok(rows)
}

/// Rows ordered by `n_r_list`, then by `algorithms`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRow>> {
    cfg.validate()?;
    let mut rows = Vec::new();
    for &n_r in &cfg.n_r_list {
        let outcomes = run_trials(cfg, n_r)?;
        rows.extend(aggregate(cfg, n_r, &outcomes)?);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use swipt_core::CsiMode;

    use super::*;
    use crate::config::PcRule;

    fn small(mode: CsiMode) -> ExperimentConfig {
        ExperimentConfig {
            trials: 6,
            seed: 3,
            ..ExperimentConfig::new(3, vec![2, 4], PcRule::Scaled(0.2), mode)
        }
    }

    #[test]
    fn rows_follow_config_order() {
        let rows = run_experiment(&small(CsiMode::Csir)).unwrap();
        let keys: Vec<(usize, &str)> = rows.iter().map(|r| (r.n_r, r.algorithm.name())).collect();
        assert_eq!(
            keys,
            vec![
                (2, "greedy"),
                (2, "continuous_greedy"),
                (2, "brute_force"),
                (4, "greedy"),
                (4, "continuous_greedy"),
                (4, "brute_force"),
            ]
        );
        for r in &rows {
            assert_eq!(r.trials + r.infeasible, 6);
            let ratio = r.mean_ratio.unwrap();
            assert!((0.0..=1.0 + 1e-9).contains(&ratio));
        }
    }

    #[test]
    fn unconstrained_greedy_matches_brute_force() {
        let cfg = ExperimentConfig {
            pc_rule: PcRule::Fixed(0.0),
            algorithms: vec![Algorithm::Greedy, Algorithm::BruteForce],
            ..small(CsiMode::Csir)
        };
        let rows = run_experiment(&cfg).unwrap();
        for pair in rows.chunks(2) {
            assert_eq!(pair[0].mean_throughput_bits, pair[1].mean_throughput_bits);
        }
    }

    #[test]
    fn no_brute_force_means_no_ratio() {
        let cfg = ExperimentConfig {
            algorithms: vec![Algorithm::Greedy],
            ..small(CsiMode::Csit)
        };
        assert!(run_experiment(&cfg)
            .unwrap()
            .iter()
            .all(|r| r.mean_ratio.is_none()));
    }

    #[test]
    fn infeasible_draws_are_counted_not_averaged() {
        let cfg = ExperimentConfig {
            pc_rule: PcRule::Fixed(1e6),
            ..small(CsiMode::Csir)
        };
        for r in run_experiment(&cfg).unwrap() {
            assert_eq!(r.infeasible, 6);
            assert_eq!(r.trials, 0);
            assert_eq!(r.mean_throughput_bits, None);
        }
    }

    #[test]
    fn trial_instances_are_seed_addressable() {
        let cfg = small(CsiMode::Csir);
        let a = trial_instance(&cfg, 4, 1).unwrap();
        let b = generate_instance(
            &mut StreamRng::seed_from_u64(trial_seed(&cfg, 4, 1)),
            3,
            4,
            4,
            &Beamformer::Mrt,
        )
        .unwrap();
        assert_eq!(a.h(), b.h());
        assert_ne!(trial_seed(&cfg, 4, 1), trial_seed(&cfg, 1, 4));
    }
}
