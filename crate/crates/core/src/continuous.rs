//! Continuous greedy on the multilinear extension, followed by pipage rounding.
//!
//! The fractional iterate lives in the working polytope
//! `{x ∈ [0,1]^n : Σ x_n w_n ≤ Σ w_n − p_c}`, the LP relaxation of the
//! circuit-power constraint. Its integral points are exactly the feasible
//! assignments, so rounding inside it always lands on a feasible IT set.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algorithms::{max_weight_independent_set, SolveResult, SolveStatus};
use crate::error::{Error, Result};
use crate::model::{Assignment, CircuitPowerSystem};
use crate::rng::stream;
use crate::set_function::{AntennaSet, CountingOracle, MemoOracle, SetFunction};

/// Largest ground set for exact multilinear evaluation.
pub const EXACT_LIMIT: usize = 16;

/// A coordinate within this distance of 0 or 1 is integral.
pub const INTEGRAL_TOL: f64 = 1e-9;

/// Slack allowed on the budget row before a point counts as outside the polytope.
pub const POLYTOPE_TOL: f64 = 1e-9;

/// A point of `[0, 1]^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FractionalPoint {
    x: Vec<f64>,
}

impl FractionalPoint {
    pub fn new(x: Vec<f64>) -> Result<Self> {
        if let Some((i, v)) = x
            .iter()
            .enumerate()
            .find(|(_, v)| !(**v >= 0.0 && **v <= 1.0 + 1e-12))
        {
            return Err(Error::InvalidArgument(format!(
                "coordinate {i} = {v} outside [0, 1]"
            )));
        }
        Ok(Self { x })
    }

    pub fn zeros(n: usize) -> Self {
        Self { x: vec![0.0; n] }
    }

    pub fn indicator(n: usize, set: AntennaSet) -> Self {
        Self {
            x: (0..n).map(|i| if set.contains(i) { 1.0 } else { 0.0 }).collect(),
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.x
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Indices strictly between 0 and 1 (outside the integrality tolerance).
    pub fn fractional_indices(&self) -> Vec<usize> {
        (0..self.x.len()).filter(|&i| is_fractional(self.x[i])).collect()
    }

    /// The set of coordinates at 1, if the point is integral.
    pub fn to_set(&self) -> Option<AntennaSet> {
        if !self.fractional_indices().is_empty() {
            return None;
        }
        Some(
            self.x
                .iter()
                .enumerate()
                .filter(|(_, v)| **v > 0.5)
                .map(|(i, _)| i)
                .collect(),
        )
    }

    /// `Σ x_n w_n`.
    pub fn weighted_sum(&self, weights: &[f64]) -> f64 {
        self.x.iter().zip(weights).map(|(x, w)| x * w).sum()
    }
}

fn is_fractional(v: f64) -> bool {
    v > INTEGRAL_TOL && v < 1.0 - INTEGRAL_TOL
}

fn snap(v: f64) -> f64 {
    if v <= INTEGRAL_TOL {
        0.0
    } else if v >= 1.0 - INTEGRAL_TOL {
        1.0
    } else {
        v
    }
}

/// Monte-Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
}

fn sample_set<R: Rng + ?Sized>(rng: &mut R, x: &[f64]) -> AntennaSet {
    let mut set = AntennaSet::EMPTY;
    for (i, &p) in x.iter().enumerate() {
        if rng.random::<f64>() < p {
            set = set.with(i);
        }
    }
    set
}

/// Unbiased estimate of `F(x) = E[f(R)]`, `R` containing `j` independently with probability `x_j`.
pub fn multilinear_estimate<F: SetFunction, R: Rng + ?Sized>(
    oracle: &F,
    x: &FractionalPoint,
    samples: usize,
    rng: &mut R,
) -> Estimate {
    let samples = samples.max(1);
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..samples {
        let v = oracle.value(sample_set(rng, &x.x));
        sum += v;
        sum_sq += v * v;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = if samples > 1 {
        ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    Estimate {
        mean,
        std_error: (var / n).sqrt(),
        samples,
    }
}

/// `F(x) = Σ_A f(A) Π_{i∈A} x_i Π_{j∉A} (1 − x_j)`, summed over all `2^n` subsets.
pub fn multilinear_exact<F: SetFunction>(oracle: &F, x: &FractionalPoint) -> Result<f64> {
    let n = x.len();
    if n > EXACT_LIMIT {
        return Err(Error::GroundSetTooLarge {
            size: n,
            limit: EXACT_LIMIT,
        });
    }
    let mut total = 0.0;
    for bits in 0..1u64 << n {
        let mut p = 1.0;
        for (i, &xi) in x.x.iter().enumerate() {
            p *= if bits >> i & 1 == 1 { xi } else { 1.0 - xi };
            if p == 0.0 {
                break;
            }
        }
        if p != 0.0 {
            total += p * oracle.value(AntennaSet::from_bits(bits));
        }
    }
    Ok(total)
}

/// Step size, sampling effort and seed for continuous greedy and pipage rounding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContinuousGreedyConfig {
    /// Time step `δ ∈ (0, 1]`.
    pub step: f64,
    /// Random sets per marginal-weight estimate (and per rounding estimate when `n > 16`).
    pub samples_per_weight: usize,
    pub seed: u64,
}

impl ContinuousGreedyConfig {
    /// `δ = 1/n²` and `64·n` samples.
    pub fn for_ground_size(n: usize, seed: u64) -> Self {
        let n = n.max(1);
        Self {
            step: 1.0 / (n * n) as f64,
            samples_per_weight: 64 * n,
            seed,
        }
    }

    /// `δ = 1/n²` and `n⁵` samples.
    pub fn full_effort(n: usize, seed: u64) -> Self {
        let n = n.max(1);
        Self {
            samples_per_weight: n.pow(5),
            ..Self::for_ground_size(n, seed)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "step {} must lie in (0, 1]",
                self.step
            )));
        }
        if self.samples_per_weight == 0 {
            return Err(Error::InvalidArgument("samples_per_weight must be >= 1".into()));
        }
        Ok(())
    }

    /// Number of steps, `⌈1/δ⌉`.
    pub fn steps(&self) -> usize {
        ((1.0 / self.step) - 1e-9).ceil().max(1.0) as usize
    }
}

/// Estimates `ω_j = E[f(R ∪ {j}) − f(R)]`, reusing each sampled `R` for every `j`.
fn marginal_weights<F: SetFunction, R: Rng + ?Sized>(
    oracle: &F,
    x: &[f64],
    samples: usize,
    rng: &mut R,
) -> Vec<f64> {
    let n = x.len();
    let mut w = vec![0.0; n];
    for _ in 0..samples {
        let r = sample_set(rng, x);
        let base = oracle.value(r);
        for (j, wj) in w.iter_mut().enumerate() {
            if !r.contains(j) {
                *wj += oracle.value(r.with(j)) - base;
            }
        }
    }
    let inv = 1.0 / samples as f64;
    w.iter_mut().for_each(|v| *v *= inv);
    w
}

/// Runs continuous greedy from `x(0) = 0` to `x(1)`.
pub fn continuous_greedy<F: SetFunction>(
    oracle: &F,
    sys: &CircuitPowerSystem,
    cfg: &ContinuousGreedyConfig,
) -> Result<FractionalPoint> {
    continuous_greedy_observed(oracle, sys, cfg, |_, _| {})
}

/// As [`continuous_greedy`], calling `observe(step, x)` after every step.
pub fn continuous_greedy_observed<F: SetFunction>(
    oracle: &F,
    sys: &CircuitPowerSystem,
    cfg: &ContinuousGreedyConfig,
    mut observe: impl FnMut(usize, &FractionalPoint),
) -> Result<FractionalPoint> {
    cfg.validate()?;
    let n = oracle.ground_size();
    if n != sys.ground_size() {
        return Err(Error::DimensionMismatch(format!(
            "objective over {n} antennas, constraint over {}",
            sys.ground_size()
        )));
    }
    if !sys.is_feasible() {
        return Err(Error::InfeasibleInstance {
            total: sys.total(),
            p_c: sys.p_c(),
        });
    }

    let steps = cfg.steps();
    let mut x = FractionalPoint::zeros(n);
    for t in 0..steps {
        // Last step shortened so the step sizes sum to exactly one.
        let size = if t + 1 == steps {
            1.0 - cfg.step * (steps - 1) as f64
        } else {
            cfg.step
        };
        let mut rng = stream(cfg.seed, &[0, t as u64]);
        let weights = marginal_weights(oracle, &x.x, cfg.samples_per_weight, &mut rng);
        let chosen = max_weight_independent_set(&weights, sys)?;
        for j in chosen.iter() {
            x.x[j] = (x.x[j] + size).min(1.0);
        }
        observe(t, &x);
    }
    Ok(x)
}

/// One rounding move, recorded for inspection.
#[derive(Debug, Clone, PartialEq)]
pub struct PipageMove {
    /// Coordinates moved; `j` is `None` for the final single-coordinate rounding.
    pub i: usize,
    pub j: Option<usize>,
    pub from: Vec<f64>,
    pub to: Vec<f64>,
    /// Estimated `F` at the `+` and `−` endpoints, when they were compared.
    pub compared: Option<(f64, f64)>,
}

enum Evaluator<'a, F: SetFunction> {
    Exact(MemoOracle<&'a F>),
    Sampled {
        oracle: &'a F,
        samples: usize,
        seed: u64,
    },
}

impl<F: SetFunction> Evaluator<'_, F> {
    fn eval(&self, y: &[f64], tag: u64) -> f64 {
        let point = FractionalPoint { x: y.to_vec() };
        match self {
            Evaluator::Exact(memo) => multilinear_exact(memo, &point).expect("ground size checked"),
            Evaluator::Sampled {
                oracle,
                samples,
                seed,
            } => multilinear_estimate(*oracle, &point, *samples, &mut stream(*seed, &[1, tag])).mean,
        }
    }
}

/// Rounds a point of the working polytope to a feasible assignment.
///
/// Repeatedly takes the two lowest-index fractional coordinates `i, j` and moves
/// along `e_i − e_j` to whichever end of the feasible segment has the larger `F`.
/// `F` is exact for `n ≤ 16`, sampled otherwise.
pub fn pipage_round<F: SetFunction>(
    oracle: &F,
    sys: &CircuitPowerSystem,
    x: &FractionalPoint,
    cfg: &ContinuousGreedyConfig,
) -> Result<Assignment> {
    pipage_round_traced(oracle, sys, x, cfg).map(|(a, _)| a)
}

pub fn pipage_round_traced<F: SetFunction>(
    oracle: &F,
    sys: &CircuitPowerSystem,
    x: &FractionalPoint,
    cfg: &ContinuousGreedyConfig,
) -> Result<(Assignment, Vec<PipageMove>)> {
    let n = x.len();
    if n != sys.ground_size() || n != oracle.ground_size() {
        return Err(Error::DimensionMismatch(format!(
            "point of length {n}, constraint over {}, objective over {}",
            sys.ground_size(),
            oracle.ground_size()
        )));
    }
    let w = sys.weights();
    let budget = sys.budget();
    let used = x.weighted_sum(w);
    if used > budget + POLYTOPE_TOL {
        return Err(Error::PolytopeViolation(format!(
            "weighted sum {used:.12} exceeds budget {budget:.12}"
        )));
    }

    let eval = if n <= EXACT_LIMIT {
        Evaluator::Exact(MemoOracle::new(oracle))
    } else {
        Evaluator::Sampled {
            oracle,
            samples: cfg.samples_per_weight,
            seed: cfg.seed,
        }
    };

    let mut y: Vec<f64> = x.x.iter().map(|&v| snap(v)).collect();
    let mut moves = Vec::new();
    let mut tag = 0u64;
    loop {
        let frac: Vec<usize> = (0..n).filter(|&k| is_fractional(y[k])).collect();
        let from = y.clone();
        let slack = (budget - y.iter().zip(w).map(|(a, b)| a * b).sum::<f64>()).max(0.0);
        match frac.as_slice() {
            [] => break,
            &[i] => {
                let mut down = y.clone();
                down[i] = 0.0;
                let mut up = y.clone();
                up[i] = 1.0;
                let up_fits = w[i] * (1.0 - y[i]) <= slack + 1e-12;
                let compared = if up_fits {
                    let (fu, fd) = (eval.eval(&up, tag), eval.eval(&down, tag + 1));
                    tag += 2;
                    y = if fu > fd { up } else { down };
                    Some((fu, fd))
                } else {
                    y = down;
                    None
                };
                moves.push(PipageMove {
                    i,
                    j: None,
                    from,
                    to: y.clone(),
                    compared,
                });
            }
            &[i, j, ..] => {
                let mut eps_plus = (1.0 - y[i]).min(y[j]);
                let mut eps_minus = -(y[i].min(1.0 - y[j]));
                // Moving by ε changes the budget row by ε·(w_i − w_j).
                let d = w[i] - w[j];
                if d > 0.0 {
                    eps_plus = eps_plus.min(slack / d);
                } else if d < 0.0 {
                    eps_minus = eps_minus.max(slack / d);
                }
                let shifted = |eps: f64| {
                    let mut z = y.clone();
                    z[i] = snap(z[i] + eps);
                    z[j] = snap(z[j] - eps);
                    z
                };
                let plus = shifted(eps_plus);
                let minus = shifted(eps_minus);
                let compared = if eps_plus <= 1e-12 {
                    y = minus;
                    None
                } else if eps_minus >= -1e-12 {
                    y = plus;
                    None
                } else {
                    let (fp, fm) = (eval.eval(&plus, tag), eval.eval(&minus, tag + 1));
                    tag += 2;
                    y = if fp > fm { plus } else { minus };
                    Some((fp, fm))
                };
                moves.push(PipageMove {
                    i,
                    j: Some(j),
                    from,
                    to: y.clone(),
                    compared,
                });
            }
        }
    }

    let set: AntennaSet = y
        .iter()
        .enumerate()
        .filter(|(_, v)| **v > 0.5)
        .map(|(i, _)| i)
        .collect();
    if !sys.is_independent(set) {
        return Err(Error::PolytopeViolation(format!(
            "rounded set {set:?} violates the circuit-power constraint"
        )));
    }
    Ok((Assignment::from_set(n, set)?, moves))
}

/// Continuous greedy followed by pipage rounding, with the objective memoized for small `n`.
pub fn continuous_greedy_solve<F: SetFunction>(
    oracle: &F,
    sys: &CircuitPowerSystem,
    cfg: &ContinuousGreedyConfig,
) -> Result<SolveResult> {
    let n = oracle.ground_size();
    if !sys.is_feasible() {
        return Ok(SolveResult::infeasible(n));
    }
    let counted = CountingOracle::new(oracle);
    let memo = MemoOracle::new(&counted);
    let x = continuous_greedy(&memo, sys, cfg)?;
    let assignment = pipage_round(&memo, sys, &x, cfg)?;
    let value = memo.value(assignment.it_set());
    Ok(SolveResult {
        assignment,
        value,
        evaluations: counted.calls(),
        status: SolveStatus::Solved,
    })
}
