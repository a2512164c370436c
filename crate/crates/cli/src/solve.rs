use std::path::Path;

use rand::SeedableRng;
use serde::Serialize;
use swipt_core::model::generate_instance;
use swipt_core::numerics::nats_to_bits;
use swipt_core::rng::StreamRng;
use swipt_core::set_function::MemoOracle;
use swipt_core::{
    Assignment, Beamformer, CapacityObjective, ContinuousGreedyConfig, CsiMode, GreedyVariant, Problem,
    SolveStatus,
};

use crate::config::Algorithm;
use crate::error::{CliError, Result};
use crate::experiment::solve_with;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveOutput {
    pub assignment: Assignment,
    pub value_nats: f64,
    pub value_bits: f64,
    pub status: SolveStatus,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SolveOptions {
    /// Continuous-greedy seed.
    pub seed: u64,
    pub greedy: GreedyVariant,
}

pub fn parse_problem(text: &str, path: &Path) -> Result<Problem> {
    serde_json::from_str(text).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_problem(path: &Path) -> Result<Problem> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_problem(&text, path)
}

pub fn solve_problem(
    problem: &Problem,
    mode: CsiMode,
    algorithm: Algorithm,
    opts: SolveOptions,
) -> Result<SolveOutput> {
    let sys = problem.constraint()?;
    let oracle = MemoOracle::new(CapacityObjective::new(
        problem.objective_spec(mode)?,
        &problem.channel,
    )?);
    let cg = ContinuousGreedyConfig::for_ground_size(problem.channel.n_r(), opts.seed);
    let res = solve_with(algorithm, &oracle, &sys, &cg, opts.greedy)?;
    Ok(SolveOutput {
        value_nats: res.value,
        value_bits: nats_to_bits(res.value),
        assignment: res.assignment,
        status: res.status,
        evaluations: res.evaluations,
    })
}

/// A random problem file: Rayleigh channel from `seed`, MRT beacon, given threshold and power.
pub fn generate_problem(
    n_t: usize,
    n_r: usize,
    n_p: usize,
    seed: u64,
    p_c: f64,
    power_watts: f64,
) -> Result<Problem> {
    if !(p_c >= 0.0 && p_c.is_finite()) {
        return Err(CliError::Config(format!("p_c must be >= 0, got {p_c}")));
    }
    if !(power_watts > 0.0 && power_watts.is_finite()) {
        return Err(CliError::Config(format!("power must be > 0, got {power_watts}")));
    }
    let mut rng = StreamRng::seed_from_u64(seed);
    let channel = generate_instance(&mut rng, n_t, n_r, n_p, &Beamformer::Mrt)
        .map_err(|e| CliError::Config(e.to_string()))?
        .with_seed(Some(seed));
    Ok(Problem {
        channel,
        p_c,
        power_watts,
    })
}
