//! Discrete solvers over a set function and the circuit-power independence system.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Assignment, CircuitPowerSystem};
use crate::set_function::{AntennaSet, CountingOracle, SetFunction};

/// Largest ground set [`brute_force`] will enumerate.
pub const BRUTE_FORCE_LIMIT: usize = 24;

/// Marginal gains at or below this stop the greedy loop.
pub const MIN_GAIN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveStatus {
    Solved,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub assignment: Assignment,
    /// Objective value in nats; zero when infeasible.
    pub value: f64,
    /// Calls made to the objective.
    pub evaluations: usize,
    pub status: SolveStatus,
}

impl SolveResult {
    pub fn infeasible(n: usize) -> Self {
        Self {
            assignment: Assignment::all_power(n),
            value: 0.0,
            evaluations: 0,
            status: SolveStatus::Infeasible,
        }
    }

    pub fn is_solved(&self) -> bool {
        self.status == SolveStatus::Solved
    }
}

fn check_ground<F: SetFunction>(oracle: &F, sys: &CircuitPowerSystem) -> Result<usize> {
    let n = oracle.ground_size();
    if n != sys.ground_size() {
        return Err(Error::DimensionMismatch(format!(
            "objective over {n} antennas, constraint over {}",
            sys.ground_size()
        )));
    }
    Ok(n)
}

/// Greedy scan in descending weight order: an element joins when the set stays
/// independent and its weight is nonnegative. Ties go to the lower index.
///
/// This is the exact maximizer whenever the independence family is a matroid.
pub fn max_weight_independent_set(weights: &[f64], sys: &CircuitPowerSystem) -> Result<AntennaSet> {
    if weights.len() != sys.ground_size() {
        return Err(Error::DimensionMismatch(format!(
            "{} weights for {} elements",
            weights.len(),
            sys.ground_size()
        )));
    }
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]).then(a.cmp(&b)));

    let mut chosen = AntennaSet::EMPTY;
    for e in order {
        if weights[e] < 0.0 {
            break;
        }
        let candidate = chosen.with(e);
        if sys.is_independent(candidate) {
            chosen = candidate;
        }
    }
    Ok(chosen)
}

/// Which antennas the greedy argmax ranges over.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GreedyVariant {
    /// Argmax over the additions that keep the constraint satisfied.
    #[default]
    FeasibleArgmax,
    /// Argmax over every remaining antenna; stop as soon as the winner is infeasible.
    Literal,
}

/// Objective value after each accepted addition, and the order of additions.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GreedyTrace {
    pub picks: Vec<usize>,
    pub values: Vec<f64>,
}

/// Greedy IT-set construction starting from the all-PT assignment.
pub fn greedy_partition<F: SetFunction>(
    oracle: &F,
    sys: &CircuitPowerSystem,
    variant: GreedyVariant,
) -> Result<SolveResult> {
    greedy_partition_traced(oracle, sys, variant).map(|(r, _)| r)
}

pub fn greedy_partition_traced<F: SetFunction>(
    oracle: &F,
    sys: &CircuitPowerSystem,
    variant: GreedyVariant,
) -> Result<(SolveResult, GreedyTrace)> {
    let n = check_ground(oracle, sys)?;
    let mut trace = GreedyTrace::default();
    if !sys.is_feasible() {
        return Ok((SolveResult::infeasible(n), trace));
    }
    let f = CountingOracle::new(oracle);
    let mut current = AntennaSet::EMPTY;
    let mut value = f.value(current);

    loop {
        let mut best: Option<(usize, f64)> = None;
        for i in (0..n).filter(|&i| !current.contains(i)) {
            let candidate = current.with(i);
            if variant == GreedyVariant::FeasibleArgmax && !sys.is_independent(candidate) {
                continue;
            }
            let v = f.value(candidate);
            if best.is_none_or(|(_, bv)| v > bv) {
                best = Some((i, v));
            }
        }
        let Some((i, v)) = best else { break };
        if variant == GreedyVariant::Literal && !sys.is_independent(current.with(i)) {
            break;
        }
        if v - value <= MIN_GAIN {
            break;
        }
        current = current.with(i);
        value = v;
        trace.picks.push(i);
        trace.values.push(v);
    }

    let result = SolveResult {
        assignment: Assignment::from_set(n, current)?,
        value,
        evaluations: f.calls(),
        status: SolveStatus::Solved,
    };
    Ok((result, trace))
}

/// Exact optimum by enumerating every independent IT set.
/// Ties go to the lexicographically smallest index list.
pub fn brute_force<F: SetFunction>(oracle: &F, sys: &CircuitPowerSystem) -> Result<SolveResult> {
    let n = check_ground(oracle, sys)?;
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::GroundSetTooLarge {
            size: n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    if !sys.is_feasible() {
        return Ok(SolveResult::infeasible(n));
    }
    let f = CountingOracle::new(oracle);
    let mut best = AntennaSet::EMPTY;
    let mut best_value = f64::NEG_INFINITY;
    for bits in 0..(1u64 << n) {
        let set = AntennaSet::from_bits(bits);
        if !sys.is_independent(set) {
            continue;
        }
        let v = f.value(set);
        if v > best_value || (v == best_value && set.lex_cmp(best) == Ordering::Less) {
            best = set;
            best_value = v;
        }
    }
    Ok(SolveResult {
        assignment: Assignment::from_set(n, best)?,
        value: best_value,
        evaluations: f.calls(),
        status: SolveStatus::Solved,
    })
}
