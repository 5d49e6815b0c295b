use super::{Recorder, RunOptions, RunOutcome};
use crate::controllers::{rank_based_rate, self_adaptive_child_rate};
use crate::error::{invalid, Result};
use crate::genome::BitString;
use crate::operators::standard_bit_flips;
use crate::problems::{BitProblem, Direction, Evaluator};
use crate::rng::RandomSource;

/// The (μ+1) EA whose mutation rate depends on the rank of the uniformly
/// chosen parent: `1/n` for the best, growing linearly towards 1.
/// After each insertion one of the worst individuals is removed uniformly.
pub fn run_mu_plus_one_rank<P: BitProblem + ?Sized>(
    problem: &P,
    mu: usize,
    opts: &RunOptions,
    rng: &mut RandomSource,
) -> Result<RunOutcome> {
    let n = problem.dimension();
    opts.validate(n)?;
    if mu < 2 {
        return invalid(format!("population size must be at least 2, got {mu}"));
    }
    let dir = problem.direction();
    let mut ev = Evaluator::new(problem);
    let mut rec = Recorder::new(dir, opts);
    let mut pop: Vec<(BitString, f64)> = Vec::with_capacity(mu + 1);
    for i in 0..mu {
        let x = match (&opts.start, i) {
            (Some(s), 0) => s.clone(),
            _ => BitString::random(n, rng),
        };
        let f = ev.eval(&x);
        rec.observe(f, ev.count(), problem.is_optimal(f));
        pop.push((x, f));
    }
    let p_min = 1.0 / n as f64;
    let mut order: Vec<usize> = (0..mu).collect();
    let mut gen = 0;
    while !rec.success() && ev.count() < opts.budget {
        gen += 1;
        let parent = rng.below(mu);
        order.clear();
        order.extend(0..mu);
        order.sort_by(|&a, &b| {
            dir.gain(pop[a].1, pop[b].1)
                .partial_cmp(&0.0)
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let rank = order.iter().position(|&i| i == parent).unwrap() + 1;
        let p = rank_based_rate(rank, mu, p_min, 1.0)?;
        rec.param(gen, "p", p);
        let flips = standard_bit_flips(n, p, rng);
        let (x, fx) = &pop[parent];
        let fy = ev.eval_flipped(x, *fx, &flips);
        rec.observe(fy, ev.count(), problem.is_optimal(fy));
        let mut y = x.clone();
        y.flip_all(&flips);
        pop.push((y, fy));
        let worst = pop.iter().map(|e| e.1).fold(pop[0].1, |w, f| if dir.better(w, f) { f } else { w });
        let candidates: Vec<usize> = (0..pop.len()).filter(|&i| !dir.better(pop[i].1, worst)).collect();
        let victim = candidates[rng.below(candidates.len())];
        pop.swap_remove(victim);
    }
    Ok(rec.finish(ev.count(), gen, rng))
}

/// The self-adaptive (1,λ) EA. The parent carries a rate numerator `r`
/// (rate `r/n`); every offspring mutates `r` first, then its bits. The best
/// offspring always replaces the parent; ties go to the smaller rate, then to
/// the earlier offspring.
#[allow(clippy::too_many_arguments)]
pub fn run_self_adaptive_one_comma_lambda<P: BitProblem + ?Sized>(
    problem: &P,
    lambda: usize,
    factor: f64,
    lo: f64,
    hi: f64,
    r_init: f64,
    opts: &RunOptions,
    rng: &mut RandomSource,
) -> Result<RunOutcome> {
    let n = problem.dimension();
    opts.validate(n)?;
    if lambda < 2 {
        return invalid(format!("λ must be at least 2, got {lambda}"));
    }
    if !(factor > 1.0) || !(lo > 0.0 && lo <= hi) {
        return invalid("self-adaptation needs factor > 1 and 0 < lo <= hi");
    }
    let dir = problem.direction();
    let mut ev = Evaluator::new(problem);
    let mut rec = Recorder::new(dir, opts);
    let mut x = opts.start_point(n, rng);
    let mut fx = ev.eval(&x);
    rec.observe(fx, ev.count(), problem.is_optimal(fx));
    let mut r = r_init.clamp(lo, hi);
    let mut gen = 0;
    while !rec.success() && ev.count() < opts.budget {
        gen += 1;
        rec.param(gen, "r", r);
        let mut best: Option<(f64, f64, Vec<usize>)> = None;
        for _ in 0..lambda {
            let child_r = self_adaptive_child_rate(r, factor, lo, hi, rng);
            let flips = standard_bit_flips(n, (child_r / n as f64).min(1.0), rng);
            let fy = ev.eval_flipped(&x, fx, &flips);
            rec.observe(fy, ev.count(), problem.is_optimal(fy));
            let replace = match &best {
                None => true,
                Some((bf, br, _)) => dir.better(fy, *bf) || (fy == *bf && child_r < *br),
            };
            if replace {
                best = Some((fy, child_r, flips));
            }
        }
        let (fy, child_r, flips) = best.unwrap();
        x.flip_all(&flips);
        fx = fy;
        r = child_r;
    }
    Ok(rec.finish(ev.count(), gen, rng))
}

/// Parent selection of [`run_non_elitist_portfolio`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selection {
    Uniform,
    /// Two uniform draws with replacement; the fitter wins, the first on ties.
    Tournament2,
    /// Always a fittest individual, the first on ties.
    Best,
}

impl Selection {
    /// Index of the selected parent.
    pub fn select(self, fitness: &[f64], direction: Direction, rng: &mut RandomSource) -> usize {
        match self {
            Selection::Uniform => rng.below(fitness.len()),
            Selection::Tournament2 => {
                let a = rng.below(fitness.len());
                let b = rng.below(fitness.len());
                if direction.better(fitness[b], fitness[a]) {
                    b
                } else {
                    a
                }
            }
            Selection::Best => {
                let mut best = 0;
                for (i, &f) in fitness.iter().enumerate().skip(1) {
                    if direction.better(f, fitness[best]) {
                        best = i;
                    }
                }
                best
            }
        }
    }
}

/// Non-elitist EA over extended individuals `(x, rate)`. Each of the λ
/// offspring of a generation picks a parent by `selection`, switches the
/// inherited rate to a different one from `rates` with probability
/// `switch_p`, then mutates with that rate.
pub fn run_non_elitist_portfolio<P: BitProblem + ?Sized>(
    problem: &P,
    lambda: usize,
    rates: &[f64],
    switch_p: f64,
    selection: Selection,
    opts: &RunOptions,
    rng: &mut RandomSource,
) -> Result<RunOutcome> {
    let n = problem.dimension();
    opts.validate(n)?;
    if rates.is_empty() {
        return invalid("empty rate set");
    }
    if rates.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return invalid("rates must lie in [0, 1]");
    }
    if !(0.0..=1.0).contains(&switch_p) {
        return invalid(format!("switch probability {switch_p} outside [0, 1]"));
    }
    if lambda == 0 {
        return invalid("population size must be positive");
    }
    let m = rates.len();
    let dir = problem.direction();
    let mut ev = Evaluator::new(problem);
    let mut rec = Recorder::new(dir, opts);
    let mut pop: Vec<(BitString, usize)> = Vec::with_capacity(lambda);
    let mut fit = Vec::with_capacity(lambda);
    for i in 0..lambda {
        let x = match (&opts.start, i) {
            (Some(s), 0) => s.clone(),
            _ => BitString::random(n, rng),
        };
        let f = ev.eval(&x);
        rec.observe(f, ev.count(), problem.is_optimal(f));
        pop.push((x, rng.below(m)));
        fit.push(f);
    }
    let mut gen = 0;
    while !rec.success() && ev.count() < opts.budget {
        gen += 1;
        let mut next = Vec::with_capacity(lambda);
        let mut next_fit = Vec::with_capacity(lambda);
        for _ in 0..lambda {
            let parent = selection.select(&fit, dir, rng);
            let (x, mut idx) = (&pop[parent].0, pop[parent].1);
            if m > 1 && rng.coin(switch_p) {
                let other = rng.below(m - 1);
                idx = if other >= idx { other + 1 } else { other };
            }
            let flips = standard_bit_flips(n, rates[idx], rng);
            let fy = ev.eval_flipped(x, fit[parent], &flips);
            rec.observe(fy, ev.count(), problem.is_optimal(fy));
            let mut y = x.clone();
            y.flip_all(&flips);
            next.push((y, idx));
            next_fit.push(fy);
        }
        if rec.wants_params(gen) {
            let mean = next.iter().map(|e| rates[e.1]).sum::<f64>() / lambda as f64;
            rec.param(gen, "mean_rate", mean);
        }
        pop = next;
        fit = next_fit;
    }
    Ok(rec.finish(ev.count(), gen, rng))
}
