use proptest::prelude::*;

use paramctl::algorithms::{
    run_ollga, run_one_plus_lambda, run_one_plus_one, run_rls, GaLambdaPolicy, LambdaPolicy, OffspringRate,
    RatePolicy, RunOptions, RunOutcome, StrengthPolicy,
};
use paramctl::controllers::{PortfolioStats, VelocityTable};
use paramctl::genome::{BitString, IntString};
use paramctl::operators::{flip_k_distinct, two_bit_flip_with_replacement, FlipOperator};
use paramctl::oracles::drift_max_strength;
use paramctl::problems::{
    eval_mst, eval_plateau, eval_rvalued_onemax, gen_connected_triangles, BitProblem, LeadingOnes, OneMax,
    TriangleWeights,
};
use paramctl::rng::RandomSource;

fn bits(n: usize, seed: u64) -> BitString {
    BitString::random(n, &mut RandomSource::new(seed, 1 << 40))
}

fn assert_strictly_increasing(o: &RunOutcome) -> Result<(), TestCaseError> {
    for w in o.fixed_target_trace.windows(2) {
        prop_assert!(w[1].0 > w[0].0 && w[1].1 > w[0].1, "{:?}", w);
    }
    prop_assert!(o.evaluations >= o.generations);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn k_distinct_flips_exactly_k(n in 1usize..200, k_frac in 0.0f64..=1.0, seed in any::<u64>()) {
        let k = (k_frac * n as f64) as usize;
        let x = bits(n, seed);
        let y = flip_k_distinct(&x, k, &mut RandomSource::new(seed, 0)).unwrap();
        prop_assert_eq!(x.hamming(&y), k);
    }

    #[test]
    fn pair_flips_keep_parity(n in 1usize..100, seed in any::<u64>(), steps in 1usize..200) {
        let z = bits(n, seed ^ 1);
        let mut x = bits(n, seed);
        let parity = x.hamming(&z) % 2;
        let mut rng = RandomSource::new(seed, 0);
        for _ in 0..steps {
            x = two_bit_flip_with_replacement(&x, &mut rng);
            prop_assert_eq!(x.hamming(&z) % 2, parity);
        }
    }

    #[test]
    fn relabeling_the_target_changes_nothing(n in 2usize..60, seed in any::<u64>(), variant in 0u8..3) {
        // run on target z from x, and on complement(z) from complement(x)
        let z = bits(n, seed ^ 7);
        let x = bits(n, seed);
        let run = |target: BitString, start: BitString| {
            let problem = OneMax::with_target(target);
            let opts = RunOptions::new(20 * n as u64 * n as u64).with_start(start);
            let mut rng = RandomSource::new(seed, 3);
            match variant {
                0 => run_rls(&problem, &StrengthPolicy::Fixed(FlipOperator::Distinct(2.min(n))), &opts, &mut rng),
                1 => run_one_plus_one(&problem, &RatePolicy::Static(1.0 / n as f64), &opts, &mut rng),
                _ => run_ollga(&problem, &GaLambdaPolicy::OneFifth { factor: 1.5 }, &opts, &mut rng),
            }
            .unwrap()
        };
        let a = run(z.clone(), x.clone());
        let b = run(z.complement(), x.complement());
        prop_assert_eq!(a.fixed_target_trace, b.fixed_target_trace);
        prop_assert_eq!(a.evaluations, b.evaluations);
    }

    #[test]
    fn same_seed_same_outcome(n in 2usize..80, seed in any::<u64>()) {
        let lo = LeadingOnes::new(n);
        let opts = RunOptions::new(5 * n as u64 * n as u64).with_stride(3);
        let a = run_one_plus_one(&lo, &RatePolicy::FitnessDependentLo, &opts, &mut RandomSource::new(seed, 9)).unwrap();
        let b = run_one_plus_one(&lo, &RatePolicy::FitnessDependentLo, &opts, &mut RandomSource::new(seed, 9)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn elitist_traces_are_monotone(n in 8usize..80, seed in any::<u64>(), budget in 1u64..5000) {
        let om = OneMax::new(n);
        let lo = LeadingOnes::new(n);
        let opts = RunOptions::new(budget);
        let mut rng = RandomSource::new(seed, 0);
        let outcomes = [
            run_one_plus_one(&lo, &RatePolicy::Static(1.5 / n as f64), &opts, &mut rng).unwrap(),
            run_rls(&lo, &StrengthPolicy::Fixed(FlipOperator::Distinct(1)), &opts, &mut rng).unwrap(),
            run_one_plus_lambda(&om, &LambdaPolicy::Static(4), &OffspringRate::TwoRate { r_init: 2.0 }, &opts, &mut rng).unwrap(),
            run_ollga(&om, &GaLambdaPolicy::FitnessDependent, &opts, &mut rng).unwrap(),
        ];
        for o in &outcomes {
            assert_strictly_increasing(o)?;
        }
    }

    #[test]
    fn plateau_is_below_onemax(n in 3usize..40, k_frac in 0.0f64..1.0, seed in any::<u64>()) {
        let k = 2 + (k_frac * (n - 2) as f64) as usize;
        let x = bits(n, seed);
        let om = x.count_ones();
        let v = eval_plateau(&x, k).unwrap();
        prop_assert!(v <= om as f64);
        if om + k <= n || om == n {
            prop_assert_eq!(v, om as f64);
        }
    }

    #[test]
    fn ring_distance_is_at_most_interval_distance(n in 1usize..30, r in 2u32..40, seed in any::<u64>()) {
        let mut rng = RandomSource::new(seed, 0);
        let x = IntString::random(n, r, &mut rng);
        let z = IntString::random(n, r, &mut rng);
        prop_assert!(eval_rvalued_onemax(&x, &z, 3).unwrap() <= eval_rvalued_onemax(&x, &z, 2).unwrap());
    }

    #[test]
    fn spanning_trees_beat_disconnected_selections(t in 1usize..8, seed in any::<u64>()) {
        let mut rng = RandomSource::new(seed, 0);
        let g = gen_connected_triangles(t, TriangleWeights::Separated { epsilon: 1.0 }, &mut rng).unwrap();
        let nv = g.vertex_count();
        // random spanning tree: union-find over a shuffled edge order
        let mut order: Vec<usize> = (0..g.edge_count()).collect();
        rand::seq::SliceRandom::shuffle(order.as_mut_slice(), &mut rng);
        let mut parent: Vec<usize> = (0..nv).collect();
        fn root(p: &mut [usize], mut v: usize) -> usize {
            while p[v] != v {
                v = p[v];
            }
            v
        }
        let mut tree = BitString::zeros(g.edge_count());
        for e in order {
            let (u, v, _) = g.edges()[e];
            let (a, b) = (root(&mut parent, u), root(&mut parent, v));
            if a != b {
                parent[a] = b;
                tree.set(e, true);
            }
        }
        let value = eval_mst(&tree, &g).unwrap();
        prop_assert!(value >= (nv - 1) as f64 && value <= ((nv - 1) as u64 * g.wmax()) as f64);

        // dropping any tree edge disconnects
        let e = (0..g.edge_count()).find(|&e| tree.get(e)).unwrap();
        let mut cut = tree.clone();
        cut.set(e, false);
        prop_assert!(eval_mst(&cut, &g).unwrap() > value);
        prop_assert!(eval_mst(&BitString::zeros(g.edge_count()), &g).unwrap() > value);
    }

    #[test]
    fn bandit_distributions_stay_normalized(
        updates in proptest::collection::vec((0usize..4, 0.0f64..=1.0, any::<bool>()), 1..300),
    ) {
        let mut s = PortfolioStats::new(4, 0.05, 0.3, 0.3, 1.0, Some(50)).unwrap();
        for (arm, reward, pursuit) in updates {
            if pursuit {
                s.adaptive_pursuit(arm, reward);
            } else {
                s.prob_matching(arm, reward);
            }
            let p = s.probabilities();
            prop_assert!((p.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
            for &q in p {
                prop_assert!(q >= 0.05 - 1e-12 && q <= s.p_max() + 1e-12);
            }
        }
    }

    #[test]
    fn greedy_strength_ignores_progress_scale(
        plays in proptest::collection::vec((1usize..=6, 0.0f64..10.0), 1..200),
        exponent in -6i32..6,
    ) {
        // a power of two keeps the scaled sums exact
        let c = 2f64.powi(exponent);
        let mut a = VelocityTable::new(6, 0.01, 0.1).unwrap();
        let mut b = VelocityTable::new(6, 0.01, 0.1).unwrap();
        for (strength, progress) in plays {
            a.update(strength, progress.floor());
            b.update(strength, c * progress.floor());
            prop_assert_eq!(a.greedy(), b.greedy());
        }
    }

    #[test]
    fn drift_maximizer_is_odd_from_half_fitness(n in 2usize..=200, frac in 0.5f64..1.0) {
        let f = ((frac * n as f64).ceil() as usize).min(n - 1);
        prop_assume!(2 * f >= n);
        prop_assert_eq!(drift_max_strength(n, f).unwrap() % 2, 1);
    }

    #[test]
    fn evaluations_match_problem_calls(n in 2usize..50, seed in any::<u64>(), budget in 1u64..3000) {
        use std::sync::atomic::{AtomicU64, Ordering};
        struct Counting(OneMax, AtomicU64);
        impl BitProblem for Counting {
            fn name(&self) -> &str { "counting" }
            fn dimension(&self) -> usize { self.0.dimension() }
            fn evaluate(&self, x: &BitString) -> f64 {
                self.1.fetch_add(1, Ordering::Relaxed);
                self.0.evaluate(x)
            }
            fn optimum_value(&self) -> Option<f64> { self.0.optimum_value() }
            fn optimizer(&self) -> Option<BitString> { self.0.optimizer() }
        }
        // without an incremental override every counted evaluation reaches evaluate()
        let opts = RunOptions::new(budget);
        for variant in 0..3 {
            let p = Counting(OneMax::new(n), AtomicU64::new(0));
            let mut rng = RandomSource::new(seed, variant);
            let o = match variant {
                0 => run_ollga(&p, &GaLambdaPolicy::OneFifth { factor: 1.5 }, &opts, &mut rng),
                1 => run_one_plus_lambda(&p, &LambdaPolicy::Static(3), &OffspringRate::Static(1.0 / n as f64), &opts, &mut rng),
                _ => run_rls(&p, &StrengthPolicy::Fixed(FlipOperator::Distinct(1)), &opts, &mut rng),
            }
            .unwrap();
            prop_assert_eq!(p.1.load(Ordering::Relaxed), o.evaluations);
        }
    }
}
