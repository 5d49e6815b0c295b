use std::sync::Arc;

use super::{BestOf, Recorder, RunOptions, RunOutcome};
use crate::controllers::{
    fitness_dependent_lambda_ga, fitness_dependent_rate_lo, fitness_dependent_rate_opl, ga_lambda_update,
    offspring_doubling_update, self_adaptive_child_rate, time_dependent_rate, two_rate_update, DoublingScheme,
    OneFifthState, Outcome, RateHalf, TwoRateState, VelocityTable,
};
use crate::error::{invalid, Result};
use crate::genome::IntString;
use crate::operators::{crossover_flips, sample_distinct, shifted_value, standard_bit_flips, FlipOperator};
use crate::oracles::{lo_fixed_target_dp, DriftTable};
use crate::problems::{BitProblem, Evaluator, IntProblem, LeadingOnes};
use crate::rng::RandomSource;

/// Mutation rate control of the (1+1) EA.
#[derive(Clone, Debug)]
pub enum RatePolicy {
    Static(f64),
    /// Cycles `2^k/n`, see [`time_dependent_rate`].
    TimeDependent,
    /// `1/(LO(x)+1)`; meant for LeadingOnes.
    FitnessDependentLo,
    /// The individual carries a rate numerator `r` (rate `r/n`); the
    /// offspring's numerator is `r/factor` or `r·factor`, clamped to `[lo, hi]`,
    /// and survives with the offspring.
    SelfAdaptive { r_init: f64, factor: f64, lo: f64, hi: f64 },
}

pub fn run_one_plus_one<P: BitProblem + ?Sized>(
    problem: &P,
    policy: &RatePolicy,
    opts: &RunOptions,
    rng: &mut RandomSource,
) -> Result<RunOutcome> {
    let n = problem.dimension();
    opts.validate(n)?;
    match *policy {
        RatePolicy::Static(p) if !(0.0..=1.0).contains(&p) => return invalid(format!("rate {p} outside [0, 1]")),
        RatePolicy::SelfAdaptive { factor, lo, hi, .. } if !(factor > 1.0 && lo > 0.0 && lo <= hi) => {
            return invalid("self-adaptation needs factor > 1 and 0 < lo <= hi")
        }
        _ => {}
    }
    let dir = problem.direction();
    let mut ev = Evaluator::new(problem);
    let mut rec = Recorder::new(dir, opts);
    let mut x = opts.start_point(n, rng);
    let mut fx = ev.eval(&x);
    rec.observe(fx, ev.count(), problem.is_optimal(fx));
    let mut tag = match *policy {
        RatePolicy::SelfAdaptive { r_init, lo, hi, .. } => r_init.clamp(lo, hi),
        _ => 0.0,
    };
    let mut gen = 0;
    while !rec.success() && ev.count() < opts.budget {
        gen += 1;
        let (p, child_tag) = match *policy {
            RatePolicy::Static(p) => (p, 0.0),
            RatePolicy::TimeDependent => (time_dependent_rate(gen, n), 0.0),
            RatePolicy::FitnessDependentLo => (fitness_dependent_rate_lo(fx.max(0.0) as usize), 0.0),
            RatePolicy::SelfAdaptive { factor, lo, hi, .. } => {
                let r = self_adaptive_child_rate(tag, factor, lo, hi, rng);
                ((r / n as f64).min(1.0), r)
            }
        };
        rec.param(gen, "p", p);
        let flips = standard_bit_flips(n, p, rng);
        let fy = ev.eval_flipped(&x, fx, &flips);
        rec.observe(fy, ev.count(), problem.is_optimal(fy));
        if dir.at_least_as_good(fy, fx) {
            x.flip_all(&flips);
            fx = fy;
            tag = child_tag;
        }
    }
    Ok(rec.finish(ev.count(), gen, rng))
}

/// Mutation strength control of RLS-type algorithms.
#[derive(Clone, Debug)]
pub enum StrengthPolicy {
    Fixed(FlipOperator),
    /// `strengths[f]` distinct flips at fitness `f`.
    PerLevel(Vec<usize>),
    /// Drift-maximizing strength on OneMax, looked up in a shared table.
    DriftMax(Arc<DriftTable>),
    /// ε-greedy choice among strengths `1..=k` by discounted velocities.
    EpsGreedy { k: usize, delta: f64, epsilon: f64 },
    /// Operator `ops[j]` with probability `weights[j]`.
    Mixture { ops: Vec<FlipOperator>, weights: Vec<f64> },
}

fn pick_weighted(weights: &[f64], rng: &mut RandomSource) -> usize {
    let total: f64 = weights.iter().sum();
    let u = rng.unit() * total;
    let mut acc = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return i;
        }
    }
    weights.iter().rposition(|&w| w > 0.0).unwrap_or(0)
}

pub fn run_rls<P: BitProblem + ?Sized>(
    problem: &P,
    policy: &StrengthPolicy,
    opts: &RunOptions,
    rng: &mut RandomSource,
) -> Result<RunOutcome> {
    let n = problem.dimension();
    opts.validate(n)?;
    let mut velocities = None;
    match policy {
        StrengthPolicy::Fixed(FlipOperator::Distinct(k)) if *k > n => {
            return invalid(format!("strength {k} exceeds n = {n}"))
        }
        StrengthPolicy::PerLevel(s) if s.len() < n || s.iter().any(|&k| k > n) => {
            return invalid("per-level strengths must cover every level below n with values <= n")
        }
        StrengthPolicy::DriftMax(t) if t.n() != n => return invalid("drift table built for a different n"),
        StrengthPolicy::EpsGreedy { k, delta, epsilon } => {
            if *k > n {
                return invalid(format!("strength {k} exceeds n = {n}"));
            }
            velocities = Some(VelocityTable::new(*k, *delta, *epsilon)?);
        }
        StrengthPolicy::Mixture { ops, weights } => {
            if ops.is_empty() || ops.len() != weights.len() {
                return invalid("mixture needs one weight per operator");
            }
            if weights.iter().any(|&w| w < 0.0) || !(weights.iter().sum::<f64>() > 0.0) {
                return invalid("mixture weights must be non-negative and not all zero");
            }
            if ops.iter().any(|op| op.strength() > n) {
                return invalid("mixture operator flips more than n bits");
            }
        }
        _ => {}
    }
    let dir = problem.direction();
    let mut ev = Evaluator::new(problem);
    let mut rec = Recorder::new(dir, opts);
    let mut x = opts.start_point(n, rng);
    let mut fx = ev.eval(&x);
    rec.observe(fx, ev.count(), problem.is_optimal(fx));
    let mut gen = 0;
    while !rec.success() && ev.count() < opts.budget {
        gen += 1;
        let level = (fx.max(0.0) as usize).min(n.saturating_sub(1));
        let (flips, strength) = match policy {
            StrengthPolicy::Fixed(op) => (op.flips(n, rng), op.strength()),
            StrengthPolicy::PerLevel(s) => (sample_distinct(n, s[level], rng), s[level]),
            StrengthPolicy::DriftMax(t) => {
                let k = t.strength(level);
                (sample_distinct(n, k, rng), k)
            }
            StrengthPolicy::EpsGreedy { .. } => {
                let k = velocities.as_ref().unwrap().select(rng);
                (sample_distinct(n, k, rng), k)
            }
            StrengthPolicy::Mixture { ops, weights } => {
                let op = ops[pick_weighted(weights, rng)];
                (op.flips(n, rng), op.strength())
            }
        };
        rec.param(gen, "k", strength as f64);
        let fy = ev.eval_flipped(&x, fx, &flips);
        rec.observe(fy, ev.count(), problem.is_optimal(fy));
        let accepted = dir.at_least_as_good(fy, fx);
        if let Some(v) = velocities.as_mut() {
            v.update(strength, if accepted { dir.gain(fx, fy) } else { 0.0 });
        }
        if accepted {
            x.flip_all(&flips);
            fx = fy;
        }
    }
    Ok(rec.finish(ev.count(), gen, rng))
}

/// RLS on LeadingOnes using, at every level, the strength from `strengths`
/// with the highest improvement probability.
pub fn run_best_of_set_rls(
    problem: &LeadingOnes,
    strengths: &[usize],
    opts: &RunOptions,
    rng: &mut RandomSource,
) -> Result<RunOutcome> {
    let dp = lo_fixed_target_dp(problem.dimension(), strengths)?;
    run_rls(problem, &StrengthPolicy::PerLevel(dp.best_strength), opts, rng)
}

/// RLS with per-coordinate velocities on r-valued problems: coordinate `i`
/// moves by `±floor(v_i)`; `v_i` is multiplied by `a` after a strict
/// improvement and by `b` otherwise, and kept within `[1, floor(r/4)]`.
///
/// The parameter trace ends with the smallest and largest velocity seen.
pub fn run_rls_ab<P: IntProblem + ?Sized>(
    problem: &P,
    a: f64,
    b: f64,
    opts: &RunOptions,
    rng: &mut RandomSource,
) -> Result<RunOutcome> {
    let n = problem.dimension();
    let r = problem.alphabet();
    if opts.budget == 0 {
        return invalid("budget must be positive");
    }
    if !(a > 1.0) || !(b > 0.0 && b < 1.0) {
        return invalid(format!("need a > 1 and 0 < b < 1, got a = {a}, b = {b}"));
    }
    if r < 4 {
        return invalid(format!("velocity cap floor(r/4) needs r >= 4, got {r}"));
    }
    let cap = (r / 4) as f64;
    let dir = problem.direction();
    let boundary = problem.boundary();
    let mut ev = Evaluator::new(problem);
    let mut rec = Recorder::new(dir, opts);
    let mut x = IntString::random(n, r, rng);
    let mut fx = ev.eval_int(&x);
    rec.observe(fx, ev.count(), problem.is_optimal(fx));
    let mut v = vec![1.0f64; n];
    let (mut vmin, mut vmax) = (1.0f64, 1.0f64);
    let mut gen = 0;
    while !rec.success() && ev.count() < opts.budget {
        gen += 1;
        let i = rng.below(n);
        let up = rng.coin(0.5);
        let value = shifted_value(x.get(i), v[i].floor() as u32, up, r, boundary);
        let fy = ev.eval_changed(&x, fx, i, value);
        rec.observe(fy, ev.count(), problem.is_optimal(fy));
        v[i] = if dir.better(fy, fx) { v[i] * a } else { v[i] * b }.clamp(1.0, cap);
        vmin = vmin.min(v[i]);
        vmax = vmax.max(v[i]);
        rec.param(gen, "velocity", v[i]);
        if dir.at_least_as_good(fy, fx) {
            x.set(i, value);
            fx = fy;
        }
    }
    let mut out = rec.finish(ev.count(), gen, rng);
    for (name, value) in [("velocity_min", vmin), ("velocity_max", vmax)] {
        out.parameter_trace.push(super::ParamSample {
            generation: gen,
            name,
            value,
        });
    }
    Ok(out)
}

/// How successes are counted by the doubling schemes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuccessCount {
    StrictlyBetter,
    AtLeastAsGood,
}

/// Offspring population size control of the (1+λ) EA.
#[derive(Clone, Debug)]
pub enum LambdaPolicy {
    Static(usize),
    /// Doubling when no offspring succeeds, shrinking per `scheme` otherwise;
    /// λ never exceeds `max`.
    Doubling { scheme: DoublingScheme, count: SuccessCount, max: usize },
}

/// Mutation rate of the (1+λ) EA.
#[derive(Clone, Debug)]
pub enum OffspringRate {
    Static(f64),
    /// `max(1/n, ln λ / (n ln(en/(n-f))))`; meant for OneMax.
    FitnessDependentOneMax,
    /// Half the offspring at `r/(2n)`, half at `2r/n`, `r` adapted per
    /// generation. Needs an even λ.
    TwoRate { r_init: f64 },
}

pub fn run_one_plus_lambda<P: BitProblem + ?Sized>(
    problem: &P,
    lambda_policy: &LambdaPolicy,
    rate: &OffspringRate,
    opts: &RunOptions,
    rng: &mut RandomSource,
) -> Result<RunOutcome> {
    let n = problem.dimension();
    opts.validate(n)?;
    let mut lambda = match *lambda_policy {
        LambdaPolicy::Static(l) => l,
        LambdaPolicy::Doubling { .. } => 1,
    };
    if lambda == 0 {
        return invalid("offspring population size must be positive");
    }
    let mut two_rate = None;
    match *rate {
        OffspringRate::Static(p) if !(0.0..=1.0).contains(&p) => return invalid(format!("rate {p} outside [0, 1]")),
        OffspringRate::TwoRate { r_init } => {
            if !matches!(lambda_policy, LambdaPolicy::Static(_)) || lambda < 2 || lambda % 2 == 1 {
                return invalid(format!("2-rate control needs a static even λ >= 2, got {lambda}"));
            }
            two_rate = Some(TwoRateState::new(r_init, n)?);
        }
        _ => {}
    }
    let dir = problem.direction();
    let mut ev = Evaluator::new(problem);
    let mut rec = Recorder::new(dir, opts);
    let mut x = opts.start_point(n, rng);
    let mut fx = ev.eval(&x);
    rec.observe(fx, ev.count(), problem.is_optimal(fx));
    let mut gen = 0;
    while !rec.success() && ev.count() < opts.budget {
        gen += 1;
        rec.param(gen, "lambda", lambda as f64);
        let mut best = BestOf::new(dir, two_rate.is_some());
        let mut successes = 0;
        for i in 0..lambda {
            let (p, half) = match *rate {
                OffspringRate::Static(p) => (p, RateHalf::Low),
                OffspringRate::FitnessDependentOneMax => {
                    let f = (fx.max(0.0) as usize).min(n - 1);
                    (fitness_dependent_rate_opl(f, lambda as f64, n)?.min(1.0), RateHalf::Low)
                }
                OffspringRate::TwoRate { .. } => {
                    let s = two_rate.as_ref().unwrap();
                    if i < lambda / 2 {
                        (s.low_rate(), RateHalf::Low)
                    } else {
                        (s.high_rate().min(1.0), RateHalf::High)
                    }
                }
            };
            let flips = standard_bit_flips(n, p, rng);
            let fy = ev.eval_flipped(&x, fx, &flips);
            rec.observe(fy, ev.count(), problem.is_optimal(fy));
            if let LambdaPolicy::Doubling { count, .. } = *lambda_policy {
                let ok = match count {
                    SuccessCount::StrictlyBetter => dir.better(fy, fx),
                    SuccessCount::AtLeastAsGood => dir.at_least_as_good(fy, fx),
                };
                successes += ok as usize;
            }
            best.offer(fy, (flips, half), rng);
        }
        let (fy, (flips, half)) = best.take().unwrap();
        if dir.at_least_as_good(fy, fx) {
            x.flip_all(&flips);
            fx = fy;
        }
        if let Some(s) = two_rate.as_mut() {
            rec.param(gen, "r", s.r());
            two_rate_update(s, half, rng);
        }
        if let LambdaPolicy::Doubling { scheme, max, .. } = *lambda_policy {
            lambda = offspring_doubling_update(lambda, successes, scheme).min(max.max(1));
        }
    }
    Ok(rec.finish(ev.count(), gen, rng))
}

/// λ control of the (1+(λ,λ)) GA.
#[derive(Clone, Debug)]
pub enum GaLambdaPolicy {
    Static(usize),
    /// `ceil(sqrt(n/(n-f)))`; meant for OneMax.
    FitnessDependent,
    /// Divide by `factor` after a strict improvement, multiply by
    /// `factor^(1/4)` otherwise, within `[1, n]`.
    OneFifth { factor: f64 },
}

/// The (1+(λ,λ)) GA with `p = λ/n` and `c = 1/λ`. Each generation costs 2λ
/// evaluations; both intermediate selections break ties uniformly at random.
pub fn run_ollga<P: BitProblem + ?Sized>(
    problem: &P,
    policy: &GaLambdaPolicy,
    opts: &RunOptions,
    rng: &mut RandomSource,
) -> Result<RunOutcome> {
    let n = problem.dimension();
    opts.validate(n)?;
    let mut fifth = match *policy {
        GaLambdaPolicy::Static(0) => return invalid("λ must be positive"),
        GaLambdaPolicy::OneFifth { factor } => Some(OneFifthState::new(1.0, factor, 1.0, n as f64)?),
        _ => None,
    };
    let dir = problem.direction();
    let mut ev = Evaluator::new(problem);
    let mut rec = Recorder::new(dir, opts);
    let mut x = opts.start_point(n, rng);
    let mut fx = ev.eval(&x);
    rec.observe(fx, ev.count(), problem.is_optimal(fx));
    let mut gen = 0;
    while !rec.success() && ev.count() < opts.budget {
        gen += 1;
        let lambda = match *policy {
            GaLambdaPolicy::Static(l) => l,
            GaLambdaPolicy::FitnessDependent => fitness_dependent_lambda_ga((fx.max(0.0) as usize).min(n - 1), n)?,
            GaLambdaPolicy::OneFifth { .. } => fifth.as_ref().unwrap().rounded(),
        };
        if let Some(s) = &fifth {
            rec.param(gen, "lambda", s.value());
        } else {
            rec.param(gen, "lambda", lambda as f64);
        }
        let p = (lambda as f64 / n as f64).min(1.0);
        let ell = rng.binomial(n as u64, p) as usize;
        let mut mutation = BestOf::new(dir, true);
        for _ in 0..lambda {
            let flips = sample_distinct(n, ell, rng);
            let f = ev.eval_flipped(&x, fx, &flips);
            rec.observe(f, ev.count(), problem.is_optimal(f));
            mutation.offer(f, flips, rng);
        }
        let (_, winner) = mutation.take().unwrap();
        let c = 1.0 / lambda as f64;
        let mut crossover = BestOf::new(dir, true);
        for _ in 0..lambda {
            let flips = crossover_flips(&winner, c, rng);
            let f = ev.eval_flipped(&x, fx, &flips);
            rec.observe(f, ev.count(), problem.is_optimal(f));
            crossover.offer(f, flips, rng);
        }
        let (fy, flips) = crossover.take().unwrap();
        let outcome = if dir.better(fy, fx) {
            Outcome::Improved
        } else if fy == fx {
            Outcome::Equal
        } else {
            Outcome::Worse
        };
        if outcome != Outcome::Worse {
            x.flip_all(&flips);
            fx = fy;
        }
        if let Some(s) = fifth.as_mut() {
            ga_lambda_update(s, outcome);
        }
    }
    Ok(rec.finish(ev.count(), gen, rng))
}
