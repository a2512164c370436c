//! Property checkers: submodularity, monotonicity, the two independence-system
//! axioms, waterfilling optimality, and approximation ratios.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::model::CircuitPowerSystem;
use crate::numerics::{parallel_rate, waterfill};
use crate::set_function::{AntennaSet, SetFunction};

/// Margins below this count as violations.
pub const MARGIN_TOL: f64 = 1e-9;

/// Largest ground set for [`check_submodular`] / [`check_monotone`].
pub const SAMPLED_LIMIT: usize = 16;

/// Largest ground set for exhaustive independence-axiom checks.
pub const EXHAUSTIVE_LIMIT: usize = 14;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: String,
    pub trials: u64,
    pub violations: u64,
    pub worst_margin: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
}

impl PropertyReport {
    pub fn new(property: impl Into<String>) -> Self {
        Self {
            property: property.into(),
            trials: 0,
            violations: 0,
            worst_margin: f64::INFINITY,
            witness: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    /// Records one trial that fails when `margin < -1e-9`.
    pub fn record(&mut self, margin: f64, witness: impl FnOnce() -> serde_json::Value) {
        self.record_outcome(margin, margin < -MARGIN_TOL, witness);
    }

    /// Records one trial with an explicit verdict; `witness` is built only for the first violation.
    pub fn record_outcome(
        &mut self,
        margin: f64,
        violated: bool,
        witness: impl FnOnce() -> serde_json::Value,
    ) {
        self.trials += 1;
        if margin < self.worst_margin {
            self.worst_margin = margin;
        }
        if violated {
            self.violations += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    /// Folds another report on the same property into this one.
    pub fn merge(&mut self, other: PropertyReport) {
        self.trials += other.trials;
        self.violations += other.violations;
        self.worst_margin = self.worst_margin.min(other.worst_margin);
        if self.witness.is_none() {
            self.witness = other.witness;
        }
    }

    fn finish(mut self) -> Self {
        if self.trials == 0 || !self.worst_margin.is_finite() {
            self.worst_margin = 0.0;
        }
        self
    }
}

/// Subset of `of` keeping each element with a rate that is itself drawn uniformly.
fn random_subset<R: Rng + ?Sized>(rng: &mut R, of: AntennaSet) -> AntennaSet {
    let p: f64 = rng.random();
    of.iter().filter(|_| rng.random::<f64>() < p).collect()
}

/// Random chain `A ⊆ B ⊆ U \ {a}`.
fn random_chain<R: Rng + ?Sized>(rng: &mut R, n: usize) -> (AntennaSet, AntennaSet, usize) {
    let a = rng.random_range(0..n);
    let outer = AntennaSet::full(n).without(a);
    let b = random_subset(rng, outer);
    let small = random_subset(rng, b);
    (small, b, a)
}

fn check_sampled_size<F: SetFunction>(oracle: &F) -> Result<usize> {
    let n = oracle.ground_size();
    if n > SAMPLED_LIMIT {
        return Err(Error::GroundSetTooLarge {
            size: n,
            limit: SAMPLED_LIMIT,
        });
    }
    Ok(n)
}

/// Samples chains `A ⊆ B`, `a ∉ B`; margin `[f(A+a) − f(A)] − [f(B+a) − f(B)]`.
pub fn check_submodular<F: SetFunction, R: Rng + ?Sized>(
    oracle: &F,
    trials: usize,
    rng: &mut R,
) -> Result<PropertyReport> {
    let n = check_sampled_size(oracle)?;
    let mut report = PropertyReport::new("submodularity");
    if n == 0 {
        return Ok(report.finish());
    }
    for _ in 0..trials {
        let (a_set, b_set, a) = random_chain(rng, n);
        let gain_small = oracle.value(a_set.with(a)) - oracle.value(a_set);
        let gain_large = oracle.value(b_set.with(a)) - oracle.value(b_set);
        report.record(gain_small - gain_large, || {
            json!({ "A": a_set.to_vec(), "B": b_set.to_vec(), "a": a,
                    "gain_A": gain_small, "gain_B": gain_large })
        });
    }
    Ok(report.finish())
}

/// Samples `A`, `a ∉ A`; margin `f(A + a) − f(A)`.
pub fn check_monotone<F: SetFunction, R: Rng + ?Sized>(
    oracle: &F,
    trials: usize,
    rng: &mut R,
) -> Result<PropertyReport> {
    let n = check_sampled_size(oracle)?;
    let mut report = PropertyReport::new("monotonicity");
    if n == 0 {
        return Ok(report.finish());
    }
    for _ in 0..trials {
        let (_, set, a) = random_chain(rng, n);
        let gain = oracle.value(set.with(a)) - oracle.value(set);
        report.record(gain, || json!({ "A": set.to_vec(), "a": a, "gain": gain }));
    }
    Ok(report.finish())
}

fn check_exhaustive_size(sys: &CircuitPowerSystem) -> Result<usize> {
    let n = sys.ground_size();
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::GroundSetTooLarge {
            size: n,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    Ok(n)
}

/// Every independent `Y` and every `e ∈ Y`: `Y − e` must be independent.
/// Margin is the harvested-power surplus `harvested(Y − e) − p_c`.
pub fn check_downward_closure(sys: &CircuitPowerSystem) -> Result<PropertyReport> {
    let n = check_exhaustive_size(sys)?;
    let mut report = PropertyReport::new("downward_closure");
    for bits in 0..1u64 << n {
        let y = AntennaSet::from_bits(bits);
        if !sys.is_independent(y) {
            continue;
        }
        for e in y.iter() {
            let x = y.without(e);
            let margin = sys.harvested(x) - sys.p_c();
            report.record_outcome(
                margin,
                !sys.is_independent(x),
                || json!({ "Y": y.to_vec(), "removed": e }),
            );
        }
    }
    Ok(report.finish())
}

/// Fuzzed downward closure: random independent `B`, random `A ⊆ B`.
pub fn check_downward_closure_sampled<R: Rng + ?Sized>(
    sys: &CircuitPowerSystem,
    trials: usize,
    rng: &mut R,
) -> PropertyReport {
    let n = sys.ground_size();
    let mut report = PropertyReport::new("downward_closure");
    if !sys.is_feasible() {
        return report.finish();
    }
    for _ in 0..trials {
        let mut b = random_subset(rng, AntennaSet::full(n));
        let mut members = b.to_vec();
        members.shuffle(rng);
        while !sys.is_independent(b) {
            b = b.without(members.pop().expect("empty set is independent"));
        }
        let a = random_subset(rng, b);
        let margin = sys.harvested(a) - sys.p_c();
        report.record_outcome(
            margin,
            !sys.is_independent(a),
            || json!({ "A": a.to_vec(), "B": b.to_vec() }),
        );
    }
    report.finish()
}

/// Exchange axiom over all independent pairs `|X| < |Y|`: some `e ∈ Y \ X` must keep
/// `X + e` independent. Margin of a violating pair is the best surplus `X + e` reaches.
///
/// Knapsack-type families need not satisfy this; the report is informational.
pub fn check_exchange_axiom(sys: &CircuitPowerSystem) -> Result<PropertyReport> {
    let n = check_exhaustive_size(sys)?;
    let mut report = PropertyReport::new("exchange");
    let size = 1usize << n;
    let independent: Vec<bool> = (0..size as u64)
        .map(|b| sys.is_independent(AntennaSet::from_bits(b)))
        .collect();
    // extend[X] = elements e with X + e independent.
    let extend: Vec<u64> = (0..size)
        .map(|x| {
            (0..n)
                .filter(|&e| x >> e & 1 == 0 && independent[x | 1 << e])
                .fold(0u64, |m, e| m | 1 << e)
        })
        .collect();
    let members: Vec<u64> = (0..size as u64).filter(|&b| independent[b as usize]).collect();

    let mut worst = 0.0f64;
    for &x in &members {
        let x_len = x.count_ones();
        let x_set = AntennaSet::from_bits(x);
        for &y in &members {
            if y.count_ones() <= x_len {
                continue;
            }
            report.trials += 1;
            let candidates = y & !x;
            if candidates & extend[x as usize] != 0 {
                continue;
            }
            let y_set = AntennaSet::from_bits(y);
            let best = AntennaSet::from_bits(candidates)
                .iter()
                .map(|e| sys.harvested(x_set.with(e)) - sys.p_c())
                .fold(f64::NEG_INFINITY, f64::max);
            worst = worst.min(best);
            report.violations += 1;
            if report.witness.is_none() {
                report.witness = Some(json!({ "X": x_set.to_vec(), "Y": y_set.to_vec() }));
            }
        }
    }
    report.worst_margin = worst;
    Ok(report)
}

/// `alg / opt`, clamped to `[0, 1 + 1e-9]`. Both values zero gives 1.
pub fn approximation_ratio(alg_value: f64, opt_value: f64) -> Result<f64> {
    if opt_value <= 1e-12 {
        if alg_value.abs() <= 1e-12 {
            return Ok(1.0);
        }
        return Err(Error::DegenerateOptimum(opt_value));
    }
    Ok((alg_value / opt_value).clamp(0.0, 1.0 + 1e-9))
}

/// Random point of `{p ≥ 0 : Σ p ≤ budget}`, usually on the `Σ p = budget` face.
fn random_allocation<R: Rng + ?Sized>(rng: &mut R, k: usize, budget: f64) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| -rng.random::<f64>().max(1e-300).ln()).collect();
    let sum: f64 = raw.iter().sum();
    let scale = if rng.random::<f64>() < 0.2 {
        rng.random::<f64>()
    } else {
        1.0
    };
    raw.iter().map(|r| r / sum * budget * scale).collect()
}

/// Outcome of [`check_waterfill_instance`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WaterfillCheck {
    /// `|Σ p_i − budget|`.
    pub budget_error: f64,
    /// Largest deviation from `p_i = max(μ − 1/λ_i, 0)` (or `μ ≤ 1/λ_i` for dry channels).
    pub slackness_error: f64,
    /// Waterfilled rate minus the best random feasible allocation's rate.
    pub optimality_gap: f64,
}

impl WaterfillCheck {
    /// Smallest of the three margins; below `-1e-9` is a violation.
    pub fn margin(&self) -> f64 {
        (-self.budget_error)
            .min(-self.slackness_error)
            .min(self.optimality_gap)
    }
}

/// Checks one waterfilling instance against budget use, complementary slackness,
/// and `random_allocations` random feasible splits.
pub fn check_waterfill_instance<R: Rng + ?Sized>(
    gains: &[f64],
    budget: f64,
    random_allocations: usize,
    rng: &mut R,
) -> Result<WaterfillCheck> {
    let alloc = waterfill(gains, budget)?;
    let mu = alloc.water_level;
    let slackness_error = gains
        .iter()
        .zip(&alloc.powers)
        .map(|(&g, &p)| {
            if p == 0.0 {
                (mu - 1.0 / g).max(0.0)
            } else {
                (p - (mu - 1.0 / g)).abs()
            }
        })
        .fold(0.0, f64::max);
    let rate = alloc.rate(gains);
    let best_random = (0..random_allocations)
        .map(|_| parallel_rate(gains, &random_allocation(rng, gains.len(), budget)))
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(WaterfillCheck {
        budget_error: (alloc.total_power() - budget).abs(),
        slackness_error,
        optimality_gap: if random_allocations == 0 {
            0.0
        } else {
            rate - best_random
        },
    })
}

/// Random (gains, budget) instances through [`check_waterfill_instance`].
pub fn check_waterfilling<R: Rng + ?Sized>(
    trials: usize,
    random_allocations: usize,
    rng: &mut R,
) -> Result<PropertyReport> {
    let mut report = PropertyReport::new("waterfilling");
    for _ in 0..trials {
        let k = rng.random_range(1..=8);
        let gains: Vec<f64> = (0..k).map(|_| 10f64.powf(rng.random_range(-2.0..2.0))).collect();
        let budget = 10f64.powf(rng.random_range(-2.0..2.0));
        let check = check_waterfill_instance(&gains, budget, random_allocations, rng)?;
        report.record(
            check.margin(),
            || json!({ "gains": gains, "budget": budget, "check": check }),
        );
    }
    Ok(report.finish())
}
