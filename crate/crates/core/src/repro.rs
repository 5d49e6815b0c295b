//! Named reproduction experiments. Each one runs a fixed, seeded experiment
//! and checks its outcome against analytical values or thresholds.

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::algorithms::{
    run_best_of_set_rls, run_ollga, run_one_plus_lambda, run_one_plus_one, run_rls, run_rls_ab,
    run_single_point_hh, GaLambdaPolicy, LambdaPolicy, OffspringRate, RatePolicy, RunOptions, RunOutcome,
    StrengthPolicy,
};
use crate::controllers::{HhMechanism, HhState};
use crate::error::{Error, Result};
use crate::genome::{BitString, IntString};
use crate::harness::{compare_to_oracle, emit_csv, replicate, summarize, CsvKind, Field, RunRecord};
use crate::operators::FlipOperator;
use crate::oracles::{
    brute_force_hitting_time, lo_expected_time, lo_fixed_target_dp, mixture_kernel, onemax_drift, standard_bit_kernel,
    DriftTable,
};
use crate::problems::{
    gen_connected_triangles, kruskal_tree, LeadingOnes, Metric, MstProblem, OneMax, Plateau, RValuedOneMax,
    TriangleWeights,
};
use crate::rng::RandomSource;

/// Where experiments that emit files write them.
#[derive(Clone, Debug)]
pub struct ReproContext {
    pub out_dir: PathBuf,
}

impl Default for ReproContext {
    fn default() -> Self {
        Self {
            out_dir: std::env::temp_dir().join(format!("paramctl-repro-{}", std::process::id())),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub label: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub id: &'static str,
    pub checks: Vec<Check>,
}

impl CriterionReport {
    fn new(id: &'static str) -> Self {
        Self { id, checks: Vec::new() }
    }

    fn check(&mut self, label: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            label: label.into(),
            pass,
            detail: detail.into(),
        });
    }

    pub fn pass(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.pass)
    }
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", if self.pass() { "PASS" } else { "FAIL" }, self.id)?;
        for c in &self.checks {
            writeln!(f, "  [{}] {}: {}", if c.pass { "ok" } else { "FAIL" }, c.label, c.detail)?;
        }
        Ok(())
    }
}

pub struct Criterion {
    pub id: &'static str,
    pub description: &'static str,
    run: fn(&ReproContext) -> Result<CriterionReport>,
}

impl Criterion {
    pub fn run(&self, ctx: &ReproContext) -> Result<CriterionReport> {
        (self.run)(ctx)
    }
}

pub fn criteria() -> &'static [Criterion] {
    CRITERIA
}

pub fn find(id: &str) -> Option<&'static Criterion> {
    CRITERIA.iter().find(|c| c.id == id)
}

static CRITERIA: &[Criterion] = &[
    Criterion {
        id: "rls-lo-baseline",
        description: "1-bit RLS on LeadingOnes, n=500: mean within 5% of n^2/2",
        run: rls_lo_baseline,
    },
    Criterion {
        id: "lo-closed-form",
        description: "(1+1) EA on LeadingOnes, n=100, p in {1/n, 1.59/n}: closed form and rate ratio",
        run: lo_closed_form,
    },
    Criterion {
        id: "lo-fitness-dependent",
        description: "(1+1) EA with p=1/(LO+1), n=500: mean/n^2 in [0.63, 0.73]",
        run: lo_fitness_dependent,
    },
    Criterion {
        id: "fig1-adaptive-rls",
        description: "best-of-{1,2,3} RLS on LeadingOnes, n=1000: 20% gain and fixed-target curve ordering",
        run: fig1_adaptive_rls,
    },
    Criterion {
        id: "hh-constants",
        description: "selection hyper-heuristics on LeadingOnes, n=1000: classic ~0.549 n^2, GRG ~0.423 n^2",
        run: hh_constants,
    },
    Criterion {
        id: "drift-max-om",
        description: "drift-maximizing vs 1-bit RLS on OneMax, n=10000: fixed-target and fixed-budget gains",
        run: drift_max_om,
    },
    Criterion {
        id: "ga-linear",
        description: "self-adjusting and fitness-dependent (1+(λ,λ)) GA on OneMax: evaluations/n flat in n",
        run: ga_linear,
    },
    Criterion {
        id: "two-rate-caps",
        description: "2-rate (1+λ) EA on OneMax, n=5000, λ=64: rate caps and factor-2 agreement",
        run: two_rate_caps,
    },
    Criterion {
        id: "parity-trap",
        description: "2-bit-only RLS on OneMax from odd distance never finds the optimum",
        run: parity_trap,
    },
    Criterion {
        id: "mst-mixing",
        description: "mixed 1/2-bit RLS on connected triangles finds the MST; 1-bit RLS stays trapped",
        run: mst_mixing,
    },
    Criterion {
        id: "oracle-cross",
        description: "Markov-chain, dynamic-program and drift oracles against simulation and enumeration",
        run: oracle_cross,
    },
    Criterion {
        id: "eps-greedy",
        description: "ε-greedy RLS on OneMax, n=5000: within 3% of drift-maximizing RLS",
        run: eps_greedy,
    },
    Criterion {
        id: "om-leading-constant",
        description: "(1+1) EA on OneMax, n=2000: mean/(n ln n) in [2.3, 2.9]",
        run: om_leading_constant,
    },
    Criterion {
        id: "rvalued-rls",
        description: "RLS with per-coordinate velocities on r-valued OneMax, n=200, r=64",
        run: rvalued_rls,
    },
    Criterion {
        id: "plateau-mixing",
        description: "mixed 1..3-bit RLS on Plateau_3, n=60: mean close to the plateau size",
        run: plateau_mixing,
    },
];

/// `runs` independent runs, run `i` on stream `i` of `seed`.
fn repeat<F>(runs: usize, seed: u64, f: F) -> Result<Vec<RunOutcome>>
where
    F: Fn(&mut RandomSource) -> Result<RunOutcome> + Sync + Send,
{
    replicate(runs, |i| f(&mut RandomSource::new(seed, i as u64))).into_iter().collect()
}

fn mean_of(outcomes: &[RunOutcome], field: Field) -> Result<f64> {
    Ok(summarize(outcomes, field)?.mean)
}

fn all_succeed(report: &mut CriterionReport, label: &str, outcomes: &[RunOutcome]) {
    let ok = outcomes.iter().filter(|o| o.success).count();
    report.check(
        format!("{label} success"),
        ok == outcomes.len(),
        format!("{ok}/{} runs hit the optimum", outcomes.len()),
    );
}

fn in_band(report: &mut CriterionReport, label: &str, value: f64, lo: f64, hi: f64) {
    report.check(label, (lo..=hi).contains(&value), format!("{value:.4} in [{lo}, {hi}]"));
}

fn rls_lo_baseline(_: &ReproContext) -> Result<CriterionReport> {
    let mut report = CriterionReport::new("rls-lo-baseline");
    let n = 500;
    let lo = LeadingOnes::new(n);
    let opts = RunOptions::new(10 * (n * n / 2) as u64);
    let outs = repeat(200, 101, |rng| {
        run_rls(&lo, &StrengthPolicy::Fixed(FlipOperator::Distinct(1)), &opts, rng)
    })?;
    all_succeed(&mut report, "rls", &outs);
    let cmp = compare_to_oracle(&summarize(&outs, Field::Evaluations)?, (n * n) as f64 / 2.0, 0.05)?;
    report.check("mean vs n^2/2", cmp.pass, cmp.to_string());
    Ok(report)
}

fn lo_closed_form(_: &ReproContext) -> Result<CriterionReport> {
    let mut report = CriterionReport::new("lo-closed-form");
    let n = 100;
    let lo = LeadingOnes::new(n);
    let opts = RunOptions::new(100 * (n * n) as u64);
    let mut means = Vec::new();
    for (i, c) in [1.0, 1.59].into_iter().enumerate() {
        let p = c / n as f64;
        let outs = repeat(500, 201 + i as u64, |rng| run_one_plus_one(&lo, &RatePolicy::Static(p), &opts, rng))?;
        all_succeed(&mut report, &format!("p={c}/n"), &outs);
        // the closed form counts iterations after initialization
        let stats = summarize(&outs, Field::Generations)?;
        let cmp = compare_to_oracle(&stats, lo_expected_time(n, p)?, 0.05)?;
        report.check(format!("p={c}/n vs closed form"), cmp.pass, cmp.to_string());
        means.push(stats.mean);
    }
    in_band(&mut report, "mean ratio 1.59/n over 1/n", means[1] / means[0], 0.85, 0.93);
    Ok(report)
}

fn lo_fitness_dependent(_: &ReproContext) -> Result<CriterionReport> {
    let mut report = CriterionReport::new("lo-fitness-dependent");
    let n = 500;
    let lo = LeadingOnes::new(n);
    let opts = RunOptions::new(10 * (n * n) as u64);
    let outs = repeat(300, 301, |rng| run_one_plus_one(&lo, &RatePolicy::FitnessDependentLo, &opts, rng))?;
    all_succeed(&mut report, "fitness-dependent", &outs);
    let mean = mean_of(&outs, Field::Evaluations)?;
    in_band(&mut report, "mean/n^2", mean / (n * n) as f64, 0.63, 0.73);
    Ok(report)
}

/// Mean over runs of the evaluations needed to reach fitness `target`,
/// read from `fixed_target.csv` rows grouped by run id.
fn fixed_target_mean(rows: &HashMap<u64, Vec<(f64, u64)>>, runs: &[u64], target: f64) -> Option<f64> {
    let mut total = 0.0;
    for id in runs {
        let hit = rows.get(id)?.iter().find(|&&(f, _)| f >= target)?;
        total += hit.1 as f64;
    }
    Some(total / runs.len() as f64)
}

fn read_fixed_target(path: &Path) -> Result<HashMap<u64, Vec<(f64, u64)>>> {
    let text = std::fs::read_to_string(path)?;
    let mut rows: HashMap<u64, Vec<(f64, u64)>> = HashMap::new();
    for line in text.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let bad = || Error::InvalidArgument(format!("malformed fixed-target row {line:?}"));
        if cols.len() != 3 {
            return Err(bad());
        }
        let id: u64 = cols[0].parse().map_err(|_| bad())?;
        let f: f64 = cols[1].parse().map_err(|_| bad())?;
        let e: u64 = cols[2].parse().map_err(|_| bad())?;
        rows.entry(id).or_default().push((f, e));
    }
    Ok(rows)
}

fn fig1_adaptive_rls(ctx: &ReproContext) -> Result<CriterionReport> {
    let mut report = CriterionReport::new("fig1-adaptive-rls");
    let n = 1000;
    let lo = LeadingOnes::new(n);
    let full = RunOptions::new(10 * (n * n) as u64);
    // 2- and 3-bit RLS slow down sharply near the optimum; their curves are only needed up to 0.9n
    let partial = full.clone().with_target(0.9 * n as f64);
    let seed = 401;

    let variants: [(&str, usize, Option<usize>); 4] =
        [("rls-1", 200, Some(1)), ("best-of-1-2-3", 200, None), ("rls-2", 100, Some(2)), ("rls-3", 100, Some(3))];
    let mut records = Vec::new();
    let mut ids: HashMap<&str, Vec<u64>> = HashMap::new();
    for (v, &(name, runs, k)) in variants.iter().enumerate() {
        let outs = repeat(runs, seed + v as u64, |rng| match k {
            Some(1) => run_rls(&lo, &StrengthPolicy::Fixed(FlipOperator::Distinct(1)), &full, rng),
            Some(k) => run_rls(&lo, &StrengthPolicy::Fixed(FlipOperator::Distinct(k)), &partial, rng),
            None => run_best_of_set_rls(&lo, &[1, 2, 3], &full, rng),
        })?;
        all_succeed(&mut report, name, &outs);
        for outcome in outs {
            let run_id = records.len() as u64;
            ids.entry(name).or_default().push(run_id);
            records.push(RunRecord {
                run_id,
                n,
                problem: "leadingones".into(),
                algorithm: name.into(),
                outcome,
            });
        }
    }

    let mean = |name: &str| -> Result<f64> {
        let outs: Vec<&RunOutcome> = records
            .iter()
            .filter(|r| r.algorithm == name)
            .map(|r| &r.outcome)
            .collect();
        Ok(summarize(outs, Field::Evaluations)?.mean)
    };
    let ratio = mean("best-of-1-2-3")? / mean("rls-1")?;
    let dp = lo_fixed_target_dp(n, &[1, 2, 3])?;
    let predicted = dp.best_total() / dp.total(0);
    report.check(
        "best-of-set / 1-bit mean",
        (0.75..=0.85).contains(&ratio),
        format!("{ratio:.4} in [0.75, 0.85] (expected-time ratio {predicted:.4})"),
    );

    let dir = ctx.out_dir.join("fig1-adaptive-rls");
    emit_csv(&records, CsvKind::Runs, &dir)?;
    let path = emit_csv(&records, CsvKind::FixedTarget, &dir)?;
    let rows = read_fixed_target(&path)?;
    let curve = |name: &str, t: usize| fixed_target_mean(&rows, &ids[name], t as f64).unwrap_or(f64::INFINITY);

    let mut below = Vec::new();
    let mut ok_below = true;
    for t in (n / 10..=n / 2).step_by(n / 10) {
        let (c1, c2, c3) = (curve("rls-1", t), curve("rls-2", t), curve("rls-3", t));
        ok_below &= c3 < c2 && c3 < c1;
        below.push(format!("t={t}: {c1:.0}/{c2:.0}/{c3:.0}"));
    }
    report.check("3-bit fastest up to n/2 (k=1/2/3)", ok_below, below.join(", "));

    let mut above = Vec::new();
    let mut ok_above = true;
    for t in (n / 2..9 * n / 10).step_by(n / 10) {
        let u = t + n / 10;
        let slope = |name: &str| curve(name, u) - curve(name, t);
        let (s1, s2, s3) = (slope("rls-1"), slope("rls-2"), slope("rls-3"));
        ok_above &= s1 < s2 && s1 < s3;
        above.push(format!("[{t},{u}]: {s1:.0}/{s2:.0}/{s3:.0}"));
    }
    report.check("1-bit cheapest per level above n/2 (k=1/2/3)", ok_above, above.join(", "));
    Ok(report)
}

fn hh_constants(_: &ReproContext) -> Result<CriterionReport> {
    let mut report = CriterionReport::new("hh-constants");
    let n = 1000;
    let lo = LeadingOnes::new(n);
    let n2 = (n * n) as f64;
    let opts = RunOptions::new(20 * (n * n) as u64);
    let portfolio = [FlipOperator::Distinct(1), FlipOperator::Distinct(2)];
    let run_mech = |mechanism: HhMechanism, tau: u64, seed: u64| {
        repeat(200, seed, |rng| {
            let state = HhState::new(mechanism, portfolio.len(), tau, rng);
            run_single_point_hh(&lo, state, &portfolio, &opts, rng)
        })
    };
    let mut classic = Vec::new();
    for (i, m) in [
        HhMechanism::SimpleRandom,
        HhMechanism::Greedy,
        HhMechanism::Permutation,
        HhMechanism::RandomGradient,
    ]
    .into_iter()
    .enumerate()
    {
        let outs = run_mech(m, 1, 501 + i as u64)?;
        all_succeed(&mut report, m.name(), &outs);
        // Greedy spends two evaluations per iteration
        let mean = mean_of(&outs, Field::Evaluations)?;
        in_band(&mut report, &format!("{} mean/n^2", m.name()), mean / n2, 0.52, 0.58);
        classic.push((m.name(), mean));
    }
    let outs = run_mech(HhMechanism::GeneralizedRandomGradient, 10 * n as u64, 509)?;
    all_succeed(&mut report, "grg", &outs);
    let grg = mean_of(&outs, Field::Evaluations)?;
    in_band(&mut report, "grg (τ=10n) mean/n^2", grg / n2, 0.41, 0.47);
    let worst_gap = classic.iter().map(|&(_, m)| m - grg).fold(f64::INFINITY, f64::min);
    report.check(
        "grg below every classic mechanism",
        worst_gap > 0.0,
        format!("smallest margin {worst_gap:.0} evaluations"),
    );
    Ok(report)
}

fn drift_max_om(_: &ReproContext) -> Result<CriterionReport> {
    let mut report = CriterionReport::new("drift-max-om");
    let n = 10_000;
    let om = OneMax::new(n);
    let opts = RunOptions::new(50 * n as u64 * 10);
    let table = Arc::new(DriftTable::new(n));
    let rls = repeat(100, 601, |rng| run_rls(&om, &StrengthPolicy::Fixed(FlipOperator::Distinct(1)), &opts, rng))?;
    let adaptive = repeat(100, 602, |rng| run_rls(&om, &StrengthPolicy::DriftMax(table.clone()), &opts, rng))?;
    all_succeed(&mut report, "1-bit", &rls);
    all_succeed(&mut report, "drift-max", &adaptive);
    let ratio = mean_of(&adaptive, Field::Evaluations)? / mean_of(&rls, Field::Evaluations)?;
    report.check("mean ratio drift-max / 1-bit", ratio <= 0.995, format!("{ratio:.4} <= 0.995"));

    let budget = (0.2675 * n as f64 * 4.0) as u64;
    let distance = |outs: &[RunOutcome]| {
        outs.iter()
            .map(|o| n as f64 - o.best_within(budget).unwrap_or(0.0))
            .sum::<f64>()
            / outs.len() as f64
    };
    let (d_rls, d_adaptive) = (distance(&rls), distance(&adaptive));
    report.check(
        format!("distance after {budget} evaluations"),
        d_adaptive <= 0.93 * d_rls,
        format!("{d_adaptive:.1} <= 0.93 x {d_rls:.1} (ratio {:.4})", d_adaptive / d_rls),
    );
    Ok(report)
}

fn ga_linear(_: &ReproContext) -> Result<CriterionReport> {
    let mut report = CriterionReport::new("ga-linear");
    let dims = [500, 1000, 2000];
    let variants = [
        ("one-fifth F=1.5", GaLambdaPolicy::OneFifth { factor: 1.5 }),
        ("fitness-dependent", GaLambdaPolicy::FitnessDependent),
    ];
    for (v, (name, policy)) in variants.iter().enumerate() {
        let mut per_n = Vec::new();
        for (d, &n) in dims.iter().enumerate() {
            let om = OneMax::new(n);
            let opts = RunOptions::new(1000 * n as u64);
            let outs = repeat(100, 701 + 10 * v as u64 + d as u64, |rng| run_ollga(&om, policy, &opts, rng))?;
            all_succeed(&mut report, &format!("{name} n={n}"), &outs);
            per_n.push(mean_of(&outs, Field::Evaluations)? / n as f64);
        }
        let (lo, hi) = per_n
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
        let spread = hi / lo - 1.0;
        report.check(
            format!("{name} evaluations/n spread"),
            spread < 0.15,
            format!(
                "{} -> spread {spread:.4} < 0.15",
                per_n.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>().join("/")
            ),
        );
    }
    Ok(report)
}

fn two_rate_caps(_: &ReproContext) -> Result<CriterionReport> {
    let mut report = CriterionReport::new("two-rate-caps");
    let (n, lambda) = (5000, 64);
    let om = OneMax::new(n);
    let opts = RunOptions::new(200 * n as u64 * 10);
    let two = repeat(50, 801, |rng| {
        run_one_plus_lambda(
            &om,
            &LambdaPolicy::Static(lambda),
            &OffspringRate::TwoRate { r_init: 2.0 },
            &opts.clone().with_stride(1),
            rng,
        )
    })?;
    let fit = repeat(50, 802, |rng| {
        run_one_plus_lambda(&om, &LambdaPolicy::Static(lambda), &OffspringRate::FitnessDependentOneMax, &opts, rng)
    })?;
    all_succeed(&mut report, "2-rate", &two);
    all_succeed(&mut report, "fitness-dependent", &fit);
    let (mut lo, mut hi, mut samples) = (f64::INFINITY, 0.0f64, 0u64);
    let mut complete = true;
    for o in &two {
        let mut count = 0;
        for s in o.parameter_trace.iter().filter(|s| s.name == "r") {
            lo = lo.min(s.value);
            hi = hi.max(s.value);
            count += 1;
        }
        complete &= count == o.generations;
        samples += count;
    }
    report.check(
        "r within [2, n/4] every generation",
        complete && lo >= 2.0 && hi <= n as f64 / 4.0,
        format!("{samples} samples, r in [{lo}, {hi}]"),
    );
    let (a, b) = (mean_of(&two, Field::Evaluations)?, mean_of(&fit, Field::Evaluations)?);
    let factor = a.max(b) / a.min(b);
    report.check(
        "2-rate vs fitness-dependent means",
        factor <= 2.0,
        format!("{a:.0} vs {b:.0}: factor {factor:.3} <= 2"),
    );
    Ok(report)
}

fn parity_trap(_: &ReproContext) -> Result<CriterionReport> {
    let mut report = CriterionReport::new("parity-trap");
    let n = 100;
    let om = OneMax::new(n);
    let mut start = BitString::ones(n);
    start.flip_all(&[3, 40, 77]);
    let generations = 100_000u64;
    let two_bit_only = StrengthPolicy::Mixture {
        ops: vec![FlipOperator::Distinct(1), FlipOperator::Distinct(2)],
        weights: vec![0.0, 1.0],
    };
    let opts = RunOptions::new(generations + 1).with_start(start);
    let out = run_rls(&om, &two_bit_only, &opts, &mut RandomSource::new(901, 0))?;
    let odd = out.fixed_target_trace.iter().all(|&(f, _)| (n as f64 - f) as u64 % 2 == 1);
    report.check(
        "distance parity",
        odd && !out.success && out.generations == generations,
        format!(
            "{} generations, best distance {}, all recorded distances odd: {odd}",
            out.generations,
            n as f64 - out.best_fitness
        ),
    );

    let small = OneMax::new(6);
    let kernel = mixture_kernel(6, &[FlipOperator::Distinct(1), FlipOperator::Distinct(2)], &[0.0, 1.0]);
    let flagged = matches!(brute_force_hitting_time(&small, &kernel), Err(Error::NonAbsorbing(_)));
    report.check("exact chain flags unreachable optimum", flagged, "n=6, 2-bit flips only");

    let mixed = StrengthPolicy::Mixture {
        ops: vec![FlipOperator::Distinct(1), FlipOperator::Distinct(2)],
        weights: vec![0.5, 0.5],
    };
    let out = run_rls(&om, &mixed, &opts, &mut RandomSource::new(901, 1))?;
    report.check("p=1/2 control reaches the optimum", out.success, format!("{} evaluations", out.evaluations));
    Ok(report)
}

fn mst_mixing(_: &ReproContext) -> Result<CriterionReport> {
    let mut report = CriterionReport::new("mst-mixing");
    let t = 5;
    let graph = gen_connected_triangles(t, TriangleWeights::default(), &mut RandomSource::new(1001, u64::MAX))?;
    let (m, nv, wmax) = (graph.edge_count(), graph.vertex_count(), graph.wmax());
    let (mst_weight, mst) = kruskal_tree(&graph)?;
    let problem = MstProblem::new(graph.clone());
    let budget = (10.0 * (m * m) as f64 * ((nv as u64 * wmax) as f64).ln()).ceil() as u64;
    let mixed = StrengthPolicy::Mixture {
        ops: vec![FlipOperator::Distinct(1), FlipOperator::Distinct(2)],
        weights: vec![0.5, 0.5],
    };
    let outs = repeat(50, 1002, |rng| run_rls(&problem, &mixed, &RunOptions::new(budget), rng))?;
    let hits = outs.iter().filter(|o| o.success && o.best_fitness == mst_weight as f64).count();
    report.check(
        "mixed RLS finds the MST weight",
        hits == outs.len(),
        format!("{hits}/{} within {budget} evaluations (weight {mst_weight})", outs.len()),
    );

    // swap one light edge of the first triangle for its heavy edge
    let heavy = (0..3).find(|&e| !mst.get(e)).expect("every triangle drops one edge");
    let light = (0..3).find(|&e| mst.get(e)).unwrap();
    let mut planted = mst.clone();
    planted.flip_all(&[heavy, light]);
    let planted_value = crate::problems::eval_mst(&planted, &graph)?;
    let generations = 100_000u64;
    let out = run_rls(
        &problem,
        &StrengthPolicy::Fixed(FlipOperator::Distinct(1)),
        &RunOptions::new(generations + 1).with_start(planted),
        &mut RandomSource::new(1003, 0),
    )?;
    report.check(
        "1-bit RLS stays on the planted tree",
        !out.success && out.fixed_target_trace.len() == 1 && out.best_fitness == planted_value,
        format!(
            "planted weight {planted_value} vs MST {mst_weight}; best after {} generations {}",
            out.generations, out.best_fitness
        ),
    );
    Ok(report)
}

/// `E[max(gain, 0)]` over every `l`-subset of positions of `1^f 0^(n-f)`.
fn enumerated_drift(n: usize, f: usize, l: usize) -> f64 {
    let (mut total, mut count) = (0.0, 0u64);
    for mask in 0u32..1 << n {
        if mask.count_ones() as usize != l {
            continue;
        }
        // positions below f hold ones
        let ones_flipped = (mask & ((1u32 << f) - 1)).count_ones() as i64;
        let zeros_flipped = l as i64 - ones_flipped;
        total += (zeros_flipped - ones_flipped).max(0) as f64;
        count += 1;
    }
    total / count as f64
}

fn oracle_cross(_: &ReproContext) -> Result<CriterionReport> {
    let mut report = CriterionReport::new("oracle-cross");
    let n = 8;
    let om = OneMax::new(n);
    let p = 1.0 / n as f64;
    let exact = brute_force_hitting_time(&om, &standard_bit_kernel(n, p))?;
    let outs = repeat(100_000, 1101, |rng| {
        run_one_plus_one(&om, &RatePolicy::Static(p), &RunOptions::new(1_000_000), rng)
    })?;
    let stats = summarize(&outs, Field::Generations)?;
    let cmp = compare_to_oracle(&stats, exact.value, 0.01)?;
    report.check("(1+1) EA n=8: simulation vs exact chain", cmp.pass, cmp.to_string());

    let dp = lo_fixed_target_dp(100, &[1])?;
    report.check(
        "1-bit fixed-target total on LeadingOnes n=100",
        dp.total(0) == 5000.0,
        format!("{} == n^2/2 = 5000", dp.total(0)),
    );

    let mut worst = 0.0f64;
    for n in 1..=12 {
        for f in 0..=n {
            for l in 1..=n {
                worst = worst.max((onemax_drift(n, f, l) - enumerated_drift(n, f, l)).abs());
            }
        }
    }
    report.check("drift formula vs enumeration, n <= 12", worst <= 1e-12, format!("max abs error {worst:.3e}"));
    Ok(report)
}

fn eps_greedy(_: &ReproContext) -> Result<CriterionReport> {
    let mut report = CriterionReport::new("eps-greedy");
    let n = 5000;
    let nf = n as f64;
    let om = OneMax::new(n);
    let opts = RunOptions::new(100 * n as u64);
    let policy = StrengthPolicy::EpsGreedy {
        k: 10,
        delta: nf.powf(-0.99),
        epsilon: nf.powf(-0.01),
    };
    let table = Arc::new(DriftTable::new(n));
    let greedy = repeat(100, 1201, |rng| run_rls(&om, &policy, &opts, rng))?;
    let drift = repeat(100, 1202, |rng| run_rls(&om, &StrengthPolicy::DriftMax(table.clone()), &opts, rng))?;
    all_succeed(&mut report, "ε-greedy", &greedy);
    all_succeed(&mut report, "drift-max", &drift);
    let cmp = compare_to_oracle(&summarize(&greedy, Field::Evaluations)?, mean_of(&drift, Field::Evaluations)?, 0.03)?;
    report.check("ε-greedy vs drift-max mean", cmp.pass, cmp.to_string());
    Ok(report)
}

fn om_leading_constant(_: &ReproContext) -> Result<CriterionReport> {
    let mut report = CriterionReport::new("om-leading-constant");
    let n = 2000;
    let om = OneMax::new(n);
    let opts = RunOptions::new(100 * n as u64 * 20);
    let outs = repeat(300, 1301, |rng| {
        run_one_plus_one(&om, &RatePolicy::Static(1.0 / n as f64), &opts, rng)
    })?;
    all_succeed(&mut report, "(1+1) EA", &outs);
    let mean = mean_of(&outs, Field::Evaluations)?;
    in_band(&mut report, "mean/(n ln n)", mean / (n as f64 * (n as f64).ln()), 2.3, 2.9);
    Ok(report)
}

fn rvalued_rls(_: &ReproContext) -> Result<CriterionReport> {
    let mut report = CriterionReport::new("rvalued-rls");
    let (n, r) = (200, 64u32);
    let (a, b) = (1.7, 0.9);
    let budget = (50.0 * n as f64 * ((n as f64).ln() + (r as f64).ln())).floor() as u64;
    let cap = (r / 4) as f64;
    for mode in 1..=3u8 {
        let metric = Metric::from_mode(mode)?;
        let target = IntString::random(n, r, &mut RandomSource::new(1401, mode as u64 | 1 << 63));
        let problem = RValuedOneMax::new(target, metric);
        let outs = repeat(100, 1401 + mode as u64, |rng| run_rls_ab(&problem, a, b, &RunOptions::new(budget), rng))?;
        let ok = outs.iter().filter(|o| o.success).count();
        let worst = outs.iter().map(|o| o.best_fitness).fold(0.0, f64::max);
        report.check(
            format!("mode {mode} success within {budget}"),
            ok == outs.len(),
            format!(
                "{ok}/{} runs, mean evaluations {:.0}, worst final distance {worst}",
                outs.len(),
                mean_of(&outs, Field::Evaluations)?
            ),
        );
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for o in &outs {
            for s in &o.parameter_trace {
                match s.name {
                    "velocity_min" => lo = lo.min(s.value),
                    "velocity_max" => hi = hi.max(s.value),
                    _ => {}
                }
            }
        }
        report.check(
            format!("mode {mode} velocities"),
            lo >= 1.0 && hi <= cap,
            format!("observed [{lo:.3}, {hi:.3}] within [1, {cap}]"),
        );
    }
    Ok(report)
}

fn plateau_mixing(_: &ReproContext) -> Result<CriterionReport> {
    let mut report = CriterionReport::new("plateau-mixing");
    let (n, k) = (60, 3);
    let plateau = Plateau::new(n, k)?;
    let size: f64 = (1..=k).map(|i| binomial(n, i)).sum();
    let ops: Vec<FlipOperator> = (1..=k).map(FlipOperator::Distinct).collect();
    let opts = RunOptions::new(100 * size as u64);
    let mut means = Vec::new();
    for (v, weights) in [vec![1.0 / 3.0; 3], vec![0.6, 0.3, 0.1]].into_iter().enumerate() {
        let policy = StrengthPolicy::Mixture {
            ops: ops.clone(),
            weights: weights.clone(),
        };
        let outs = repeat(200, 1501 + v as u64, |rng| run_rls(&plateau, &policy, &opts, rng))?;
        all_succeed(&mut report, &format!("p={weights:?}"), &outs);
        let stats = summarize(&outs, Field::Evaluations)?;
        let cmp = compare_to_oracle(&stats, size, 0.25)?;
        report.check(format!("p={weights:?} vs plateau size"), cmp.pass, cmp.to_string());
        means.push(stats.mean);
    }
    let gap = (means[0] - means[1]).abs() / means[0].min(means[1]);
    report.check("means agree", gap <= 0.15, format!("relative gap {gap:.4} <= 0.15"));
    Ok(report)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}
