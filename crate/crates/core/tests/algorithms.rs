use std::sync::Arc;

use paramctl::algorithms::*;
use paramctl::controllers::{DoublingScheme, HhMechanism, HhState, MigrationScheme};
use paramctl::genome::BitString;
use paramctl::operators::FlipOperator;
use paramctl::oracles::{lo_expected_time, DriftTable};
use paramctl::problems::{BitProblem, Direction, LeadingOnes, OneMax};
use paramctl::rng::RandomSource;

fn check_trace(out: &RunOutcome) {
    assert!(out.evaluations >= out.generations);
    for w in out.fixed_target_trace.windows(2) {
        assert!(w[1].0 > w[0].0 && w[1].1 > w[0].1, "trace not strictly increasing: {w:?}");
    }
}

fn params<'a>(out: &'a RunOutcome, name: &'a str) -> impl Iterator<Item = f64> + 'a {
    out.parameter_trace.iter().filter(move |s| s.name == name).map(|s| s.value)
}

#[test]
fn forced_flip_needs_one_evaluation() {
    let om = OneMax::new(1);
    let opts = RunOptions::new(10).with_start(BitString::zeros(1));
    let out = run_one_plus_one(&om, &RatePolicy::Static(1.0), &opts, &mut RandomSource::new(1, 0)).unwrap();
    assert!(out.success);
    assert_eq!(out.evaluations, 2);
    assert_eq!(out.generations, 1);
}

#[test]
fn zero_budget_is_rejected() {
    let om = OneMax::new(5);
    let mut rng = RandomSource::new(1, 0);
    assert!(run_one_plus_one(&om, &RatePolicy::Static(0.2), &RunOptions::new(0), &mut rng).is_err());
    assert!(run_rls(&om, &StrengthPolicy::Fixed(FlipOperator::Distinct(6)), &RunOptions::new(9), &mut rng).is_err());
}

#[test]
fn one_plus_lambda_with_one_offspring_is_the_one_plus_one() {
    let lo = LeadingOnes::new(40);
    let opts = RunOptions::new(100_000);
    for seed in 0..5 {
        let a = run_one_plus_one(&lo, &RatePolicy::Static(1.0 / 40.0), &opts, &mut RandomSource::new(seed, 3)).unwrap();
        let b = run_one_plus_lambda(
            &lo,
            &LambdaPolicy::Static(1),
            &OffspringRate::Static(1.0 / 40.0),
            &opts,
            &mut RandomSource::new(seed, 3),
        )
        .unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn two_rate_needs_even_lambda_and_keeps_r_in_range() {
    let om = OneMax::new(64);
    let mut rng = RandomSource::new(2, 0);
    let rate = OffspringRate::TwoRate { r_init: 2.0 };
    assert!(run_one_plus_lambda(&om, &LambdaPolicy::Static(5), &rate, &RunOptions::new(100), &mut rng).is_err());
    let out = run_one_plus_lambda(&om, &LambdaPolicy::Static(8), &rate, &RunOptions::new(1_000_000).with_stride(1), &mut rng)
        .unwrap();
    assert!(out.success);
    let rs: Vec<f64> = params(&out, "r").collect();
    assert_eq!(rs.len() as u64, out.generations);
    assert!(rs.iter().all(|&r| (2.0..=16.0).contains(&r)));
    check_trace(&out);
}

#[test]
fn doubling_lambda_respects_cap() {
    let lo = LeadingOnes::new(50);
    let policy = LambdaPolicy::Doubling {
        scheme: DoublingScheme::Reset,
        count: SuccessCount::StrictlyBetter,
        max: 16,
    };
    let out = run_one_plus_lambda(
        &lo,
        &policy,
        &OffspringRate::Static(1.0 / 50.0),
        &RunOptions::new(1_000_000).with_stride(1),
        &mut RandomSource::new(4, 0),
    )
    .unwrap();
    assert!(out.success);
    let lambdas: Vec<f64> = params(&out, "lambda").collect();
    assert!(lambdas.iter().all(|&l| (1.0..=16.0).contains(&l)));
    assert_eq!(out.evaluations, 1 + lambdas.iter().sum::<f64>() as u64);
}

#[test]
fn ga_costs_two_lambda_per_generation() {
    let om = OneMax::new(30);
    for policy in [GaLambdaPolicy::Static(1), GaLambdaPolicy::Static(3)] {
        let l = match policy {
            GaLambdaPolicy::Static(l) => l as u64,
            _ => unreachable!(),
        };
        let out = run_ollga(&om, &policy, &RunOptions::new(1_000_000), &mut RandomSource::new(5, 0)).unwrap();
        assert!(out.success);
        assert_eq!(out.evaluations, 1 + 2 * l * out.generations);
        check_trace(&out);
    }
    let out = run_ollga(
        &om,
        &GaLambdaPolicy::OneFifth { factor: 1.5 },
        &RunOptions::new(1_000_000).with_stride(1),
        &mut RandomSource::new(5, 1),
    )
    .unwrap();
    assert!(out.success);
    assert!(params(&out, "lambda").all(|l| (1.0..=30.0).contains(&l)));
}

#[test]
fn ga_budget_overrun_finishes_the_generation() {
    let om = OneMax::new(200);
    let out = run_ollga(&om, &GaLambdaPolicy::Static(4), &RunOptions::new(100), &mut RandomSource::new(6, 0)).unwrap();
    assert!(!out.success);
    assert_eq!(out.evaluations, 1 + 8 * 13);
}

#[test]
fn rls_strategies_solve_small_instances() {
    let om = OneMax::new(60);
    let opts = RunOptions::new(200_000);
    let policies = [
        StrengthPolicy::Fixed(FlipOperator::Distinct(1)),
        StrengthPolicy::DriftMax(Arc::new(DriftTable::new(60))),
        StrengthPolicy::EpsGreedy { k: 4, delta: 0.2, epsilon: 0.1 },
        StrengthPolicy::Mixture {
            ops: vec![FlipOperator::Distinct(1), FlipOperator::Distinct(2)],
            weights: vec![0.5, 0.5],
        },
    ];
    for (i, p) in policies.iter().enumerate() {
        let out = run_rls(&om, p, &opts, &mut RandomSource::new(7, i as u64)).unwrap();
        assert!(out.success, "policy {i}");
        check_trace(&out);
    }
}

#[test]
fn best_of_set_uses_one_bit_flips_in_the_upper_half() {
    let n = 40;
    let lo = LeadingOnes::new(n);
    let out = run_best_of_set_rls(&lo, &[1, 2, 3], &RunOptions::new(1_000_000).with_stride(1), &mut RandomSource::new(8, 0))
        .unwrap();
    assert!(out.success);
    // the k recorded at generation g was chosen at the fitness reached before g
    let ks: Vec<f64> = params(&out, "k").collect();
    let mut level = vec![0.0; ks.len() + 1];
    let mut it = out.fixed_target_trace.iter().peekable();
    let mut f = 0.0;
    for g in 0..ks.len() {
        while let Some(&&(v, e)) = it.peek() {
            if e <= g as u64 + 1 {
                f = v;
                it.next();
            } else {
                break;
            }
        }
        level[g] = f;
        if f >= (n / 2) as f64 {
            assert_eq!(ks[g], 1.0);
        }
    }
}

#[test]
fn static_rate_on_leadingones_matches_closed_form() {
    let n = 50;
    let lo = LeadingOnes::new(n);
    let runs = 300;
    let mean = (0..runs)
        .map(|s| {
            let out = run_one_plus_one(&lo, &RatePolicy::Static(1.0 / n as f64), &RunOptions::new(10_000_000), &mut RandomSource::new(9, s))
                .unwrap();
            assert!(out.success);
            (out.evaluations - 1) as f64
        })
        .sum::<f64>()
        / runs as f64;
    let expected = lo_expected_time(n, 1.0 / n as f64).unwrap();
    assert!((mean / expected - 1.0).abs() < 0.06, "mean {mean} vs {expected}");
}

#[test]
fn self_adaptive_rates_stay_in_caps() {
    let om = OneMax::new(128);
    let mut rng = RandomSource::new(10, 0);
    assert!(run_self_adaptive_one_comma_lambda(&om, 1, 2.0, 2.0, 32.0, 2.0, &RunOptions::new(10), &mut rng).is_err());
    let out = run_self_adaptive_one_comma_lambda(&om, 32, 2.0, 2.0, 32.0, 4.0, &RunOptions::new(1_000_000).with_stride(1), &mut rng)
        .unwrap();
    assert!(out.success);
    assert!(params(&out, "r").all(|r| (2.0..=32.0).contains(&r)));
    check_trace(&out);
}

#[test]
fn equal_offspring_prefer_the_smaller_rate() {
    // on a constant function every offspring ties, so the smaller child rate wins whenever
    // both occur among the offspring
    struct Flat(usize);
    impl BitProblem for Flat {
        fn name(&self) -> &str {
            "flat"
        }
        fn dimension(&self) -> usize {
            self.0
        }
        fn evaluate(&self, _: &BitString) -> f64 {
            0.0
        }
        fn optimum_value(&self) -> Option<f64> {
            None
        }
    }
    let out = run_self_adaptive_one_comma_lambda(
        &Flat(64),
        16,
        2.0,
        2.0,
        16.0,
        8.0,
        &RunOptions::new(16 * 40).with_stride(1),
        &mut RandomSource::new(11, 0),
    )
    .unwrap();
    let rs: Vec<f64> = params(&out, "r").collect();
    assert_eq!(rs[0], 8.0);
    // with 16 offspring both children appear w.p. 1 - 2^-15, so the rate halves until the cap
    assert_eq!(rs[1], 4.0);
    assert!(rs[3..].iter().all(|&r| r == 2.0));
}

#[test]
fn rank_based_population() {
    let om = OneMax::new(30);
    let mut rng = RandomSource::new(12, 0);
    assert!(run_mu_plus_one_rank(&om, 1, &RunOptions::new(10), &mut rng).is_err());
    let out = run_mu_plus_one_rank(&om, 5, &RunOptions::new(1_000_000).with_stride(1), &mut rng).unwrap();
    assert!(out.success);
    assert!(params(&out, "p").all(|p| (1.0 / 30.0..=1.0).contains(&p)));
    check_trace(&out);
    // a best-ranked parent mutates with 1/n
    assert!(params(&out, "p").any(|p| p == 1.0 / 30.0));
}

#[test]
fn selection_reproductive_rates() {
    let fitness = [3.0, 7.0, 7.0, 1.0];
    let mut rng = RandomSource::new(13, 0);
    let draws = 40_000;
    let mut counts = [[0usize; 4]; 3];
    for (s, sel) in [Selection::Uniform, Selection::Tournament2, Selection::Best].iter().enumerate() {
        for _ in 0..draws {
            counts[s][sel.select(&fitness, Direction::Maximize, &mut rng)] += 1;
        }
    }
    // λ draws per generation: best selection gives one individual all λ
    assert_eq!(counts[2], [0, draws, 0, 0]);
    let max_uniform = *counts[0].iter().max().unwrap() as f64 * 4.0 / draws as f64;
    assert!((max_uniform - 1.0).abs() < 0.05);
    // tournament: individual 1 wins when drawn first (4 of 16 pairs) or drawn second against 0 or 3 (2 pairs)
    let t1 = counts[1][1] as f64 / draws as f64;
    assert!((t1 - 6.0 / 16.0).abs() < 0.01, "{t1}");
}

#[test]
fn portfolio_with_one_rate() {
    let om = OneMax::new(40);
    let mut rng = RandomSource::new(14, 0);
    assert!(run_non_elitist_portfolio(&om, 10, &[], 0.5, Selection::Uniform, &RunOptions::new(10), &mut rng).is_err());
    let out = run_non_elitist_portfolio(
        &om,
        40,
        &[1.0 / 40.0],
        0.9,
        Selection::Tournament2,
        &RunOptions::new(2_000_000).with_stride(1),
        &mut rng,
    )
    .unwrap();
    assert!(out.success);
    assert!(params(&out, "mean_rate").all(|r| (r * 40.0 - 1.0).abs() < 1e-12));
    assert_eq!((out.evaluations - 40) % 40, 0);
}

#[test]
fn annealing_limits() {
    let om = OneMax::new(30);
    let mut rng = RandomSource::new(15, 0);
    assert!(run_sa(&om, &Schedule::Constant(0.0), &RunOptions::new(10), &mut rng).is_err());
    assert!(run_sa(&om, &Schedule::Multiplicative { t1: 1.0, alpha: 1.5 }, &RunOptions::new(10), &mut rng).is_err());
    let cold = run_sa(&om, &Schedule::Constant(1e-12), &RunOptions::new(5_000), &mut rng).unwrap();
    assert!(cold.success);
    let hot = run_sa(&om, &Schedule::Constant(1e9), &RunOptions::new(5_000), &mut rng).unwrap();
    assert!(!hot.success);
    let s = Schedule::Stepwise { t1: 8.0, alpha: 0.5, tau: 3 };
    assert_eq!([1, 3, 4, 7].map(|t| s.temperature(t)), [8.0, 8.0, 4.0, 2.0]);
    let m = Schedule::Multiplicative { t1: 8.0, alpha: 0.5 };
    assert_eq!(m.temperature(3), 2.0);
}

#[test]
fn hyper_heuristic_accounting_and_parity() {
    let n = 20;
    let om = OneMax::new(n);
    let portfolio = [FlipOperator::Distinct(1), FlipOperator::Distinct(2)];
    let mut rng = RandomSource::new(16, 0);
    let state = HhState::new(HhMechanism::Greedy, 2, 1, &mut rng);
    let out = run_single_point_hh(&om, state, &portfolio, &RunOptions::new(1_000_000), &mut rng).unwrap();
    assert!(out.success);
    assert_eq!(out.evaluations, 1 + 2 * out.generations);

    // only 2-bit flips from odd distance: the optimum is unreachable
    let mut start = BitString::ones(n);
    start.flip_all(&[0, 5, 9]);
    let state = HhState::new(HhMechanism::SimpleRandom, 1, 1, &mut rng);
    let out = run_single_point_hh(
        &om,
        state,
        &[FlipOperator::Distinct(2)],
        &RunOptions::new(100_000).with_start(start),
        &mut rng,
    )
    .unwrap();
    assert!(!out.success);
    assert!(out.fixed_target_trace.iter().all(|&(f, _)| (n as f64 - f) as usize % 2 == 1));
    assert_eq!(out.best_fitness, (n - 1) as f64);

    let state = HhState::new(HhMechanism::SimpleRandom, 3, 1, &mut rng);
    assert!(run_single_point_hh(&om, state, &portfolio, &RunOptions::new(10), &mut rng).is_err());
}

#[test]
fn island_topologies() {
    assert_eq!(Topology::Ring.neighbours(2), Topology::Complete.neighbours(2));
    assert_eq!(Topology::Ring.neighbours(3), vec![vec![1], vec![2], vec![0]]);
    // 2x3 grid
    let g = Topology::Grid.neighbours(6);
    assert_eq!(g[0], vec![1, 3]);
    assert_eq!(g[4], vec![1, 3, 5]);
    let t = Topology::Torus.neighbours(9);
    assert!(t.iter().all(|nb| nb.len() == 4));
    assert!(Topology::parse("star").is_err());
}

#[test]
fn complete_topology_keeps_intervals_equal() {
    let om = OneMax::new(60);
    for seed in 0..5 {
        let out = run_island_model(
            &om,
            6,
            Topology::Complete,
            MigrationScheme::DoubleHalve,
            &RunOptions::new(1_000_000).with_stride(1),
            &mut RandomSource::new(17, seed),
        )
        .unwrap();
        assert!(out.success);
        let lo: Vec<f64> = params(&out, "tau_min").collect();
        let hi: Vec<f64> = params(&out, "tau_max").collect();
        assert_eq!(lo, hi);
        let effort: Vec<f64> = params(&out, "communication_effort").collect();
        assert!(effort.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(out.communication_effort, effort.last().map(|&e| e as u64));
        assert_eq!(out.evaluations, 6 * (out.generations + 1));
    }
}

#[test]
fn runs_are_reproducible() {
    let lo = LeadingOnes::new(30);
    let opts = RunOptions::new(50_000).with_stride(7);
    let run = |seed| {
        let mut rng = RandomSource::new(seed, 2);
        (
            run_ollga(&lo, &GaLambdaPolicy::OneFifth { factor: 1.5 }, &opts, &mut rng).unwrap(),
            run_island_model(&lo, 4, Topology::Torus, MigrationScheme::DoubleReset, &opts, &mut rng).unwrap(),
            run_one_plus_one(&lo, &RatePolicy::TimeDependent, &opts, &mut rng).unwrap(),
        )
    };
    assert_eq!(run(3), run(3));
    assert_ne!(run(3).0, run(4).0);
}
