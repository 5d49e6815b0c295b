use super::{Recorder, RunOptions, RunOutcome};
use crate::error::{invalid, Result};
use crate::problems::{BitProblem, Evaluator};
use crate::rng::RandomSource;

/// Temperature schedule of [`run_sa`]; generation `t` starts at 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Schedule {
    /// The Metropolis algorithm.
    Constant(f64),
    /// `T_t = t1 · alpha^(t-1)`.
    Multiplicative { t1: f64, alpha: f64 },
    /// `T_t = t1 · alpha^floor((t-1)/tau)`.
    Stepwise { t1: f64, alpha: f64, tau: u64 },
}

impl Schedule {
    pub fn temperature(&self, t: u64) -> f64 {
        let t = t.max(1);
        match *self {
            Schedule::Constant(temp) => temp,
            Schedule::Multiplicative { t1, alpha } => t1 * alpha.powf((t - 1) as f64),
            Schedule::Stepwise { t1, alpha, tau } => t1 * alpha.powf(((t - 1) / tau.max(1)) as f64),
        }
    }

    fn validate(&self) -> Result<()> {
        let (t1, alpha) = match *self {
            Schedule::Constant(temp) => (temp, 1.0),
            Schedule::Multiplicative { t1, alpha } | Schedule::Stepwise { t1, alpha, .. } => (t1, alpha),
        };
        if !(t1 > 0.0) || !t1.is_finite() {
            return invalid(format!("temperature must be positive, got {t1}"));
        }
        if !(alpha > 0.0 && alpha <= 1.0) {
            return invalid(format!("decay factor must lie in (0, 1], got {alpha}"));
        }
        Ok(())
    }
}

/// Simulated annealing with uniform 1-bit moves: a move with fitness gain
/// `g` is accepted with probability `min(1, exp(g/T_t))`.
///
/// The gain is taken in the problem's direction, so minimization problems
/// behave as if negated.
pub fn run_sa<P: BitProblem + ?Sized>(
    problem: &P,
    schedule: &Schedule,
    opts: &RunOptions,
    rng: &mut RandomSource,
) -> Result<RunOutcome> {
    let n = problem.dimension();
    opts.validate(n)?;
    schedule.validate()?;
    if n == 0 {
        return invalid("empty search space");
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
        let temp = schedule.temperature(gen);
        rec.param(gen, "temperature", temp);
        let flip = [rng.below(n)];
        let fy = ev.eval_flipped(&x, fx, &flip);
        rec.observe(fy, ev.count(), problem.is_optimal(fy));
        let gain = dir.gain(fx, fy);
        let accept = gain >= 0.0 || rng.unit() < (gain / temp).exp();
        if accept {
            x.flip_all(&flip);
            fx = fy;
        }
    }
    Ok(rec.finish(ev.count(), gen, rng))
}
