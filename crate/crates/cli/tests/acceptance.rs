//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Criteria listed in `KNOWN_FAILURES` are run at full strength and reported as
//! FAIL; the target only errors if one of them starts passing (or any other
//! criterion fails), so a change in the known outcome never goes unnoticed.

use std::f64::consts::E;
use std::time::{Duration, Instant};

use rand::Rng;
use swipt_cli::experiment::{aggregate, run_trials, trial_instance, TrialOutcome};
use swipt_cli::{
    csv_string, run_suite, Algorithm, ExperimentConfig, ExperimentRow, PcRule, Suite, VerifyOptions,
};
use swipt_core::model::{capacity_csir, capacity_csit};
use swipt_core::numerics::{hermitian_eigenvalues, log_det_i_plus, sample_complex_gaussian};
use swipt_core::oracle::{approximation_ratio, check_waterfilling};
use swipt_core::rng::stream;
use swipt_core::set_function::MemoOracle;
use swipt_core::{
    brute_force, multilinear_estimate, multilinear_exact, CapacityObjective, CircuitPowerSystem, CsiMode,
    FractionalPoint, ObjectiveSpec,
};

/// The waterfilled capacity is not submodular once four or more receive antennas
/// are involved; criterion 2 therefore reports violations.
const KNOWN_FAILURES: &[u32] = &[2];

const CG_BOUND: f64 = 1.0 - 1.0 / E - 0.05;

type Criterion = (u32, &'static str, Duration, fn() -> Verdict);

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        passed,
        detail: detail.into(),
    }
}

fn sweep_config(mode: CsiMode, n_r_list: Vec<usize>, trials: usize, seed: u64) -> ExperimentConfig {
    ExperimentConfig {
        trials,
        seed,
        ..ExperimentConfig::new(5, n_r_list, PcRule::Scaled(0.2), mode)
    }
}

fn submodularity(mode: CsiMode) -> Verdict {
    let report = run_suite(Suite::Submodularity, &VerifyOptions::new(1000, 2024, mode)).expect("suite runs");
    let mut detail = format!(
        "{} chain triples on 20 instances (N_t = 5, N_r <= 12): {} violations, worst margin {:.3e}",
        report.trials, report.violations, report.worst_margin
    );
    if let Some(w) = &report.witness {
        detail.push_str(&format!("; first witness {w}"));
    }
    verdict(report.passed(), detail)
}

fn c1() -> Verdict {
    submodularity(CsiMode::Csir)
}

fn c2() -> Verdict {
    submodularity(CsiMode::Csit)
}

/// Ratios of `algorithm` to brute force over feasible draws.
fn ratios(outcomes: &[TrialOutcome], algorithm: Algorithm) -> Vec<f64> {
    outcomes
        .iter()
        .filter(|o| o.feasible)
        .map(|o| {
            let alg = o.run(algorithm).unwrap().result.value;
            let opt = o.run(Algorithm::BruteForce).unwrap().result.value;
            approximation_ratio(alg, opt).unwrap()
        })
        .collect()
}

fn c3() -> Verdict {
    let cfg = ExperimentConfig {
        algorithms: vec![Algorithm::Greedy, Algorithm::BruteForce],
        ..sweep_config(CsiMode::Csir, vec![10], 200, 3)
    };
    let outcomes = run_trials(&cfg, 10).unwrap();
    let r = ratios(&outcomes, Algorithm::Greedy);
    let min = r.iter().copied().fold(f64::INFINITY, f64::min);
    let mean = r.iter().sum::<f64>() / r.len() as f64;
    verdict(
        min >= 0.5,
        format!(
            "{} feasible of 200 draws at N_r = 10: min greedy/opt {min:.4}, mean {mean:.4}, optimal in {} draws",
            r.len(),
            r.iter().filter(|&&x| x >= 1.0 - 1e-12).count()
        ),
    )
}

fn c4() -> Verdict {
    let cfg = ExperimentConfig {
        algorithms: vec![Algorithm::ContinuousGreedy, Algorithm::BruteForce],
        ..sweep_config(CsiMode::Csir, vec![8], 130, 4)
    };
    let outcomes = run_trials(&cfg, 8).unwrap();
    let feasible: Vec<TrialOutcome> = outcomes.into_iter().filter(|o| o.feasible).take(100).collect();
    if feasible.len() < 100 {
        return verdict(false, format!("only {} feasible draws in 130", feasible.len()));
    }
    let r = ratios(&feasible, Algorithm::ContinuousGreedy);
    let hits = r.iter().filter(|&&x| x >= CG_BOUND).count();
    let min = r.iter().copied().fold(f64::INFINITY, f64::min);
    verdict(
        hits >= 95,
        format!(
            "{hits}/100 runs at ratio >= {CG_BOUND:.4} (N_r = 8, step 1/64, 512 samples); min {min:.4}; histogram {}",
            ratio_histogram(&r)
        ),
    )
}

fn ratio_histogram(values: &[f64]) -> String {
    let bins: [(&str, f64, f64); 7] = [
        ("[0,0.58)", 0.0, CG_BOUND),
        ("[0.58,0.7)", CG_BOUND, 0.7),
        ("[0.7,0.8)", 0.7, 0.8),
        ("[0.8,0.9)", 0.8, 0.9),
        ("[0.9,0.95)", 0.9, 0.95),
        ("[0.95,1)", 0.95, 1.0 - 1e-12),
        ("1", 1.0 - 1e-12, f64::INFINITY),
    ];
    bins.iter()
        .map(|(label, lo, hi)| {
            format!(
                "{label}:{}",
                values.iter().filter(|&&v| v >= *lo && v < *hi).count()
            )
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn c5() -> Verdict {
    let report = check_waterfilling(500, 1000, &mut stream(5, &[])).unwrap();
    verdict(
        report.passed(),
        format!(
            "500 (gains, budget) pairs x 1000 random allocations: {} violations, worst margin {:.3e}",
            report.violations, report.worst_margin
        ),
    )
}

fn c6() -> Verdict {
    let mut rng = stream(6, &[]);
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let n = rng.random_range(1..=16);
        let rank = rng.random_range(1..=n + 2);
        let scale = 10f64.powf(rng.random_range(-2.0..2.0));
        let gram = sample_complex_gaussian(&mut rng, n, rank).row_gram();
        let via_eig: f64 = hermitian_eigenvalues(&gram)
            .unwrap()
            .iter()
            .map(|l| (1.0 + scale * l.max(0.0)).ln())
            .sum();
        let ld = log_det_i_plus(scale, &gram).unwrap();
        // Relative error of det(I + sG) itself.
        worst = worst.max((ld - via_eig).exp_m1().abs());
    }
    verdict(
        worst <= 1e-8,
        format!("500 Grams up to 16x16: worst relative error {worst:.3e}"),
    )
}

fn c7() -> Verdict {
    let (mut within, mut cells) = (0, 0);
    for k in 0..20u64 {
        let cfg = sweep_config(CsiMode::Csir, vec![8], 1, 700 + k);
        let ch = trial_instance(&cfg, 8, 0).unwrap();
        let f = MemoOracle::new(
            CapacityObjective::new(ObjectiveSpec::new(5.0, CsiMode::Csir).unwrap(), &ch).unwrap(),
        );
        let mut rng = stream(7, &[k]);
        for p in 0..10u64 {
            let x = FractionalPoint::new((0..8).map(|_| rng.random::<f64>()).collect()).unwrap();
            let exact = multilinear_exact(&f, &x).unwrap();
            let est = multilinear_estimate(&f, &x, 100_000, &mut stream(7, &[k, p, 1]));
            cells += 1;
            if (est.mean - exact).abs() <= 4.0 * est.std_error {
                within += 1;
            }
        }
    }
    verdict(
        within * 100 >= cells * 99,
        format!("{within}/{cells} (instance, point) cells within 4 standard errors (10^5 samples)"),
    )
}

struct Sweep {
    rows: Vec<ExperimentRow>,
    outcomes: Vec<(usize, Vec<TrialOutcome>)>,
}

fn sweep(cfg: &ExperimentConfig) -> Sweep {
    let mut rows = Vec::new();
    let mut outcomes = Vec::new();
    for &n_r in &cfg.n_r_list {
        let o = run_trials(cfg, n_r).unwrap();
        rows.extend(aggregate(cfg, n_r, &o).unwrap());
        outcomes.push((n_r, o));
    }
    Sweep { rows, outcomes }
}

fn curve(rows: &[ExperimentRow], algorithm: Algorithm) -> Vec<f64> {
    rows.iter()
        .filter(|r| r.algorithm == algorithm)
        .map(|r| r.mean_throughput_bits.unwrap_or(f64::NAN))
        .collect()
}

/// Shape checks shared by the two figure reproductions; returns (ok, summary).
fn figure_checks(rows: &[ExperimentRow]) -> (bool, String) {
    let g = curve(rows, Algorithm::Greedy);
    let cg = curve(rows, Algorithm::ContinuousGreedy);
    let bf = curve(rows, Algorithm::BruteForce);
    let increasing = |c: &[f64]| c.windows(2).all(|w| w[1] > w[0]);
    let mono = increasing(&g) && increasing(&cg) && increasing(&bf);
    let greedy_half = g.iter().zip(&bf).all(|(a, b)| *a >= 0.5 * b);
    let cg_band = cg
        .iter()
        .zip(&bf)
        .all(|(a, b)| *a >= CG_BOUND * b && *a <= b * (1.0 + 1e-9));
    let gap: f64 = g.iter().zip(&cg).map(|(a, b)| a - b).sum::<f64>() / g.len() as f64;
    let fmt = |c: &[f64]| c.iter().map(|v| format!("{v:.3}")).collect::<Vec<_>>().join(" ");
    let summary = format!(
        "increasing {mono}, greedy >= 0.5 opt {greedy_half}, continuous in band {cg_band}; \
         bits opt [{}] greedy [{}] continuous [{}]; greedy {} continuous greedy on average (mean gap {gap:+.4} bits)",
        fmt(&bf),
        fmt(&g),
        fmt(&cg),
        if gap >= 0.0 { ">=" } else { "<" },
    );
    (mono && greedy_half && cg_band, summary)
}

fn c8() -> Verdict {
    let cfg = sweep_config(CsiMode::Csir, (2..=8).collect(), 500, 8);
    let s = sweep(&cfg);
    let (ok, summary) = figure_checks(&s.rows);
    verdict(ok, format!("CSIR, N_r 2..8, 500 draws: {summary}"))
}

fn c9() -> Verdict {
    let cfg = sweep_config(CsiMode::Csit, (2..=8).collect(), 500, 9);
    let s = sweep(&cfg);
    let (ok, summary) = figure_checks(&s.rows);
    let csir = ObjectiveSpec::new(cfg.power_watts, CsiMode::Csir).unwrap();
    let csit = ObjectiveSpec::new(cfg.power_watts, CsiMode::Csit).unwrap();
    let (mut checked, mut bad) = (0usize, 0usize);
    for (n_r, outcomes) in &s.outcomes {
        for o in outcomes.iter().filter(|o| o.feasible) {
            let ch = trial_instance(&cfg, *n_r, o.trial).unwrap();
            for run in &o.runs {
                let set = run.result.assignment.it_set();
                let t = capacity_csit(&csit, &ch, set).unwrap();
                let r = capacity_csir(&csir, &ch, set).unwrap();
                checked += 1;
                bad += usize::from(t < r - 1e-9);
            }
            let sys = CircuitPowerSystem::new(ch.harvest_weights(), cfg.pc_rule.threshold(*n_r)).unwrap();
            let opt_r = brute_force(&CapacityObjective::new(csir, &ch).unwrap(), &sys)
                .unwrap()
                .value;
            let opt_t = o.run(Algorithm::BruteForce).unwrap().result.value;
            checked += 1;
            bad += usize::from(opt_t < opt_r - 1e-9);
        }
    }
    verdict(
        ok && bad == 0,
        format!(
            "CSIT, N_r 2..8, 500 draws: {summary}; csit >= csir on {}/{checked} comparisons",
            checked - bad
        ),
    )
}

fn c10() -> Verdict {
    let cfg = sweep_config(CsiMode::Csit, (2..=8).collect(), 60, 10);
    let in_pool = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| csv_string(&swipt_cli::run_experiment(&cfg).unwrap(), false))
    };
    let single = in_pool(1);
    let wide = in_pool(16);
    let default_a = csv_string(&swipt_cli::run_experiment(&cfg).unwrap(), false);
    let default_b = csv_string(&swipt_cli::run_experiment(&cfg).unwrap(), false);
    let same = single == wide && wide == default_a && default_a == default_b;
    verdict(
        same,
        format!(
            "{} CSV bytes identical across 1-thread, 16-thread and two default-pool runs: {same}",
            single.len()
        ),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "CSIR submodularity", Duration::from_secs(30), c1),
        (2, "CSIT submodularity", Duration::from_secs(60), c2),
        (3, "greedy half-approximation", Duration::from_secs(300), c3),
        (4, "continuous greedy + pipage", Duration::from_secs(900), c4),
        (5, "waterfilling correctness", Duration::MAX, c5),
        (6, "log-det cross-check", Duration::MAX, c6),
        (7, "multilinear estimator", Duration::MAX, c7),
        (8, "CSIR throughput sweep", Duration::from_secs(1800), c8),
        (9, "CSIT throughput sweep", Duration::from_secs(1800), c9),
        (10, "determinism", Duration::MAX, c10),
    ];
    let filter: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut unexpected = Vec::new();
    let mut passed = 0;
    let mut ran = 0;
    for (id, name, limit, check) in criteria {
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let v = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= limit;
        let ok = v.passed && in_time;
        let time = if limit == Duration::MAX {
            format!("{:.1}s", elapsed.as_secs_f64())
        } else {
            format!("{:.1}s of {}s", elapsed.as_secs_f64(), limit.as_secs())
        };
        println!(
            "criterion {id:>2} {:<4} {name}: {}{} [{time}]",
            if ok { "PASS" } else { "FAIL" },
            v.detail,
            if in_time { "" } else { "; over time limit" }
        );
        passed += usize::from(ok);
        if ok == KNOWN_FAILURES.contains(&id) {
            unexpected.push(id);
        }
    }
    println!("acceptance: {passed}/{ran} criteria pass; known failures {KNOWN_FAILURES:?}");
    if !unexpected.is_empty() {
        println!("acceptance: unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
