use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use swipt_core::algorithms::greedy_partition_traced;
use swipt_core::continuous::{continuous_greedy_observed, pipage_round_traced, POLYTOPE_TOL};
use swipt_core::oracle::{approximation_ratio, check_downward_closure, check_downward_closure_sampled};
use swipt_core::set_function::MemoOracle;
use swipt_core::{
    brute_force, continuous_greedy, continuous_greedy_solve, greedy_partition, multilinear_estimate,
    multilinear_exact, AntennaSet, Beamformer, CapacityObjective, ChannelInstance, CircuitPowerSystem,
    ContinuousGreedyConfig, CsiMode, FractionalPoint, GreedyVariant, ObjectiveSpec,
};

fn setup(seed: u64, n_r: usize, pc_coeff: f64) -> (ChannelInstance, CircuitPowerSystem) {
    let ch = swipt_core::model::generate_instance(
        &mut ChaCha8Rng::seed_from_u64(seed),
        5,
        n_r,
        4,
        &Beamformer::Mrt,
    )
    .unwrap();
    let sys = CircuitPowerSystem::new(ch.harvest_weights(), pc_coeff * n_r as f64).unwrap();
    (ch, sys)
}

fn objective(ch: &ChannelInstance, mode: CsiMode) -> CapacityObjective<'_> {
    CapacityObjective::new(ObjectiveSpec::new(5.0, mode).unwrap(), ch).unwrap()
}

#[test]
fn greedy_is_half_of_optimum_in_both_modes() {
    for mode in [CsiMode::Csir, CsiMode::Csit] {
        for seed in 0..40 {
            let (ch, sys) = setup(seed, 2 + (seed % 9) as usize, 0.2);
            if !sys.is_feasible() {
                continue;
            }
            let f = MemoOracle::new(objective(&ch, mode));
            let g = greedy_partition(&f, &sys, GreedyVariant::default()).unwrap();
            let opt = brute_force(&f, &sys).unwrap();
            let r = approximation_ratio(g.value, opt.value).unwrap();
            assert!(r >= 0.5, "{mode} seed {seed}: ratio {r}");
        }
    }
}

#[test]
fn greedy_stays_feasible_and_within_eval_budget() {
    for seed in 0..30 {
        let n = 1 + (seed % 12) as usize;
        let (ch, sys) = setup(seed, n, 0.35);
        let f = objective(&ch, CsiMode::Csir);
        let (res, trace) = greedy_partition_traced(&f, &sys, GreedyVariant::default()).unwrap();
        if !sys.is_feasible() {
            assert!(!res.is_solved());
            continue;
        }
        assert!(sys.is_independent(res.assignment.it_set()));
        assert!(
            res.evaluations <= n * n + n,
            "{} evals for n = {n}",
            res.evaluations
        );
        assert!(trace.values.windows(2).all(|w| w[1] >= w[0]));
    }
}

#[test]
fn brute_force_matches_exhaustive_scan() {
    let (ch, sys) = setup(5, 7, 0.3);
    let f = objective(&ch, CsiMode::Csit);
    let best = (0..1u64 << 7)
        .map(AntennaSet::from_bits)
        .filter(|s| sys.is_independent(*s))
        .map(|s| swipt_core::SetFunction::value(&f, s))
        .fold(f64::NEG_INFINITY, f64::max);
    assert_eq!(brute_force(&f, &sys).unwrap().value, best);
}

#[test]
fn continuous_greedy_iterates_stay_in_polytope() {
    for seed in 0..10 {
        let (ch, sys) = setup(seed, 6, 0.2);
        if !sys.is_feasible() {
            continue;
        }
        let f = MemoOracle::new(objective(&ch, CsiMode::Csir));
        let cfg = ContinuousGreedyConfig::for_ground_size(6, seed);
        let mut last = 0.0;
        let x = continuous_greedy_observed(&f, &sys, &cfg, |_, x| {
            assert!(x.as_slice().iter().all(|v| (0.0..=1.0).contains(v)));
            let used = x.weighted_sum(sys.weights());
            assert!(used <= sys.budget() + POLYTOPE_TOL, "{used} > {}", sys.budget());
            let total: f64 = x.as_slice().iter().sum();
            assert!(total >= last);
            last = total;
        })
        .unwrap();
        assert_eq!(x.len(), 6);
    }
}

#[test]
fn pipage_is_integral_feasible_and_monotone_in_f() {
    for seed in 0..15 {
        let (ch, sys) = setup(seed, 7, 0.2);
        if !sys.is_feasible() {
            continue;
        }
        let f = MemoOracle::new(objective(&ch, CsiMode::Csir));
        let cfg = ContinuousGreedyConfig::for_ground_size(7, seed);
        let x = continuous_greedy(&f, &sys, &cfg).unwrap();
        let (a, moves) = pipage_round_traced(&f, &sys, &x, &cfg).unwrap();
        assert!(sys.is_independent(a.it_set()));
        for m in &moves {
            let from = multilinear_exact(&f, &FractionalPoint::new(m.from.clone()).unwrap()).unwrap();
            let to = multilinear_exact(&f, &FractionalPoint::new(m.to.clone()).unwrap()).unwrap();
            if let Some((a, b)) = m.compared {
                assert!((to - a.max(b)).abs() <= 1e-12, "kept the smaller endpoint");
            }
            // F is convex along e_i − e_j, so the better endpoint never loses value.
            if m.j.is_some() && m.compared.is_some() {
                assert!(to >= from - 1e-9, "F dropped from {from} to {to}");
            }
        }
        let last = moves
            .last()
            .map(|m| m.to.clone())
            .unwrap_or_else(|| x.as_slice().to_vec());
        assert!(last.iter().all(|v| *v == 0.0 || *v == 1.0));
    }
}

#[test]
fn multilinear_estimate_is_unbiased() {
    let (ch, _) = setup(3, 6, 0.0);
    let f = MemoOracle::new(objective(&ch, CsiMode::Csir));
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let x = FractionalPoint::new((0..6).map(|_| rng.random::<f64>()).collect()).unwrap();
    let exact = multilinear_exact(&f, &x).unwrap();
    let reps = 200;
    let mut means = Vec::with_capacity(reps);
    for _ in 0..reps {
        means.push(multilinear_estimate(&f, &x, 50, &mut rng).mean);
    }
    let mean = means.iter().sum::<f64>() / reps as f64;
    let var = means.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (reps - 1) as f64;
    let se = (var / reps as f64).sqrt();
    assert!((mean - exact).abs() <= 4.0 * se, "{mean} vs {exact} (se {se})");
}

#[test]
fn continuous_greedy_reaches_bound_in_most_runs() {
    let bound = 1.0 - (-1.0f64).exp() - 0.05;
    let (mut hits, mut runs) = (0, 0);
    for seed in 0..40 {
        let (ch, sys) = setup(500 + seed, 8, 0.2);
        if !sys.is_feasible() {
            continue;
        }
        let f = MemoOracle::new(objective(&ch, CsiMode::Csir));
        let cg =
            continuous_greedy_solve(&f, &sys, &ContinuousGreedyConfig::for_ground_size(8, seed)).unwrap();
        let opt = brute_force(&f, &sys).unwrap();
        runs += 1;
        if approximation_ratio(cg.value, opt.value).unwrap() >= bound {
            hits += 1;
        }
    }
    assert!(hits as f64 >= 0.95 * runs as f64, "{hits}/{runs}");
}

#[test]
fn continuous_greedy_reports_infeasible_instances() {
    let sys = CircuitPowerSystem::new(vec![0.1, 0.2], 1.0).unwrap();
    let f = swipt_core::set_function::FnSetFunction::new(2, |s: AntennaSet| s.len() as f64);
    let res = continuous_greedy_solve(&f, &sys, &ContinuousGreedyConfig::for_ground_size(2, 0)).unwrap();
    assert!(!res.is_solved());
    assert_eq!(res.value, 0.0);
}

#[test]
fn downward_closure_holds_exhaustively() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..20 {
        let n = rng.random_range(1..=10);
        let w: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..3.0)).collect();
        let total: f64 = w.iter().sum();
        let sys = CircuitPowerSystem::new(w, rng.random_range(0.0..=total)).unwrap();
        assert!(check_downward_closure(&sys).unwrap().passed());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn independence_is_downward_closed(weights in prop::collection::vec(0.0f64..5.0, 1..=24), frac in 0.0f64..=1.0, seed in any::<u64>()) {
        let total: f64 = weights.iter().sum();
        let sys = CircuitPowerSystem::new(weights, frac * total).unwrap();
        let report = check_downward_closure_sampled(&sys, 200, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(report.passed(), "{:?}", report);
    }

    #[test]
    fn greedy_output_is_independent(weights in prop::collection::vec(0.0f64..5.0, 1..=12), frac in 0.0f64..=1.0) {
        let n = weights.len();
        let total: f64 = weights.iter().sum();
        let sys = CircuitPowerSystem::new(weights.clone(), frac * total).unwrap();
        // A concave-of-modular objective: monotone and submodular.
        let f = swipt_core::set_function::FnSetFunction::new(n, |s: AntennaSet| {
            (1.0 + s.iter().map(|i| 1.0 + weights[i]).sum::<f64>()).ln()
        });
        let res = greedy_partition(&f, &sys, GreedyVariant::default()).unwrap();
        prop_assert!(sys.is_independent(res.assignment.it_set()));
        let opt = brute_force(&f, &sys).unwrap();
        prop_assert!(res.value >= 0.5 * opt.value - 1e-12);
    }
}
