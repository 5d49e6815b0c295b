use super::{Recorder, RunOptions, RunOutcome};
use crate::controllers::{HhChoice, HhState};
use crate::error::{invalid, Result};
use crate::operators::FlipOperator;
use crate::problems::{BitProblem, Evaluator};
use crate::rng::RandomSource;

/// Single-point selection hyper-heuristic with elitist acceptance over a
/// portfolio of flip operators. The mechanism lives in `state`; Greedy applies
/// every operator each generation and keeps the first best offspring.
pub fn run_single_point_hh<P: BitProblem + ?Sized>(
    problem: &P,
    mut state: HhState,
    portfolio: &[FlipOperator],
    opts: &RunOptions,
    rng: &mut RandomSource,
) -> Result<RunOutcome> {
    let n = problem.dimension();
    opts.validate(n)?;
    if portfolio.is_empty() {
        return invalid("empty portfolio");
    }
    if state.portfolio_size() != portfolio.len() {
        return invalid(format!(
            "selection state built for {} operators, portfolio has {}",
            state.portfolio_size(),
            portfolio.len()
        ));
    }
    if let Some(op) = portfolio.iter().find(|op| op.strength() > n) {
        return invalid(format!("operator flips {} bits but n = {n}", op.strength()));
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
        let (fy, flips) = match state.choice() {
            HhChoice::Operator(i) => {
                rec.param(gen, "operator", i as f64);
                let flips = portfolio[i].flips(n, rng);
                let fy = ev.eval_flipped(&x, fx, &flips);
                rec.observe(fy, ev.count(), problem.is_optimal(fy));
                (fy, flips)
            }
            HhChoice::All => {
                let mut best: Option<(f64, Vec<usize>)> = None;
                for op in portfolio {
                    let flips = op.flips(n, rng);
                    let fy = ev.eval_flipped(&x, fx, &flips);
                    rec.observe(fy, ev.count(), problem.is_optimal(fy));
                    if best.as_ref().map_or(true, |(bf, _)| dir.better(fy, *bf)) {
                        best = Some((fy, flips));
                    }
                }
                best.unwrap()
            }
        };
        let improved = dir.better(fy, fx);
        if dir.at_least_as_good(fy, fx) {
            x.flip_all(&flips);
            fx = fy;
        }
        state.observe(improved, rng);
    }
    Ok(rec.finish(ev.count(), gen, rng))
}
