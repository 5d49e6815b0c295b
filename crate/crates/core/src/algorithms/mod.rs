//! Budgeted run loops. Every algorithm returns a [`RunOutcome`]; a run is
//! fully determined by its inputs and the state of its [`RandomSource`].

mod elitist;
mod hh;
mod island;
mod population;
mod sa;

pub use elitist::{
    run_best_of_set_rls, run_ollga, run_one_plus_lambda, run_one_plus_one, run_rls, run_rls_ab, GaLambdaPolicy,
    LambdaPolicy, OffspringRate, RatePolicy, StrengthPolicy, SuccessCount,
};
pub use hh::run_single_point_hh;
pub use island::{run_island_model, Topology};
pub use population::{run_mu_plus_one_rank, run_non_elitist_portfolio, run_self_adaptive_one_comma_lambda, Selection};
pub use sa::{run_sa, Schedule};

use crate::error::{invalid, Result};
use crate::genome::BitString;
use crate::problems::Direction;
use crate::rng::RandomSource;

/// Per-run settings shared by all algorithms.
#[derive(Clone, Debug)]
pub struct RunOptions {
    /// Evaluation budget. The generation that reaches it is completed.
    pub budget: u64,
    /// Record controller parameters every `trace_stride` generations (0: off).
    pub trace_stride: u64,
    /// Start point; uniformly random when `None`.
    pub start: Option<BitString>,
    /// Stop once this fitness is reached, as if it were optimal.
    pub target: Option<f64>,
}

impl RunOptions {
    pub fn new(budget: u64) -> Self {
        Self {
            budget,
            trace_stride: 0,
            start: None,
            target: None,
        }
    }

    pub fn with_stride(mut self, stride: u64) -> Self {
        self.trace_stride = stride;
        self
    }

    pub fn with_start(mut self, start: BitString) -> Self {
        self.start = Some(start);
        self
    }

    pub fn with_target(mut self, target: f64) -> Self {
        self.target = Some(target);
        self
    }

    pub(crate) fn validate(&self, n: usize) -> Result<()> {
        if self.budget == 0 {
            return invalid("budget must be positive");
        }
        if let Some(s) = &self.start {
            if s.len() != n {
                return invalid(format!("start point has length {} but n = {n}", s.len()));
            }
        }
        Ok(())
    }

    pub(crate) fn start_point(&self, n: usize, rng: &mut RandomSource) -> BitString {
        match &self.start {
            Some(s) => s.clone(),
            None => BitString::random(n, rng),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParamSample {
    pub generation: u64,
    pub name: &'static str,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome {
    pub evaluations: u64,
    pub generations: u64,
    /// Best fitness ever evaluated.
    pub best_fitness: f64,
    /// Whether an optimum (or the configured target) was evaluated at any point.
    pub success: bool,
    /// `(fitness, evaluation count)` each time the best-so-far strictly improved.
    pub fixed_target_trace: Vec<(f64, u64)>,
    pub parameter_trace: Vec<ParamSample>,
    pub seed: u64,
    pub stream: u64,
    /// Individuals sent between islands (island model only).
    pub communication_effort: Option<u64>,
}

impl RunOutcome {
    /// Evaluations until fitness `target` (in the problem's direction) was
    /// first reached, if it was.
    pub fn first_hit(&self, direction: Direction, target: f64) -> Option<u64> {
        self.fixed_target_trace
            .iter()
            .find(|&&(f, _)| direction.at_least_as_good(f, target))
            .map(|&(_, e)| e)
    }

    /// Best fitness among the first `budget` evaluations.
    pub fn best_within(&self, budget: u64) -> Option<f64> {
        self.fixed_target_trace
            .iter()
            .take_while(|&&(_, e)| e <= budget)
            .last()
            .map(|&(f, _)| f)
    }
}

/// Tracks the best-so-far fitness, the fixed-target trace and parameter
/// samples of one run.
pub(crate) struct Recorder {
    direction: Direction,
    best: f64,
    trace: Vec<(f64, u64)>,
    params: Vec<ParamSample>,
    stride: u64,
    target: Option<f64>,
    success: bool,
}

impl Recorder {
    pub(crate) fn new(direction: Direction, opts: &RunOptions) -> Self {
        Self {
            direction,
            best: direction.worst(),
            trace: Vec::new(),
            params: Vec::new(),
            stride: opts.trace_stride,
            target: opts.target,
            success: false,
        }
    }

    /// Called after every evaluation with the running evaluation count.
    pub(crate) fn observe(&mut self, fitness: f64, evaluations: u64, optimal: bool) {
        if self.direction.better(fitness, self.best) {
            self.best = fitness;
            self.trace.push((fitness, evaluations));
        }
        self.success |= optimal || self.target.is_some_and(|t| self.direction.at_least_as_good(fitness, t));
    }

    pub(crate) fn success(&self) -> bool {
        self.success
    }

    pub(crate) fn wants_params(&self, generation: u64) -> bool {
        self.stride > 0 && generation % self.stride == 0
    }

    pub(crate) fn param(&mut self, generation: u64, name: &'static str, value: f64) {
        if self.wants_params(generation) {
            self.params.push(ParamSample { generation, name, value });
        }
    }

    pub(crate) fn finish(self, evaluations: u64, generations: u64, rng: &RandomSource) -> RunOutcome {
        RunOutcome {
            evaluations,
            generations,
            best_fitness: self.best,
            success: self.success,
            fixed_target_trace: self.trace,
            parameter_trace: self.params,
            seed: rng.master_seed(),
            stream: rng.stream_id(),
            communication_effort: None,
        }
    }
}

/// Keeps the best candidate seen so far, breaking ties uniformly at random
/// (reservoir style) or toward the first candidate.
pub(crate) struct BestOf<T> {
    direction: Direction,
    random_ties: bool,
    ties: u32,
    best: Option<(f64, T)>,
}

impl<T> BestOf<T> {
    pub(crate) fn new(direction: Direction, random_ties: bool) -> Self {
        Self {
            direction,
            random_ties,
            ties: 0,
            best: None,
        }
    }

    pub(crate) fn offer(&mut self, fitness: f64, item: T, rng: &mut RandomSource) {
        match &self.best {
            None => {
                self.best = Some((fitness, item));
                self.ties = 1;
            }
            Some((bf, _)) => {
                if self.direction.better(fitness, *bf) {
                    self.best = Some((fitness, item));
                    self.ties = 1;
                } else if fitness == *bf && self.random_ties {
                    self.ties += 1;
                    if rng.below(self.ties as usize) == 0 {
                        self.best = Some((fitness, item));
                    }
                }
            }
        }
    }

    pub(crate) fn take(self) -> Option<(f64, T)> {
        self.best
    }
}
