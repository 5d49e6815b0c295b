//! Experiment plumbing: configuration, replicated runs, statistics and CSV
//! output.

mod config;
mod csv;
mod stats;

pub use config::{
    instance_stream, AlgorithmPlan, AlgorithmSpec, ExperimentConfig, ProblemInstance, ProblemSpec, ALGORITHMS,
    CONTROLLERS, PROBLEMS,
};
pub use csv::{
    emit_all, emit_csv, render, runs_row, CsvKind, FIXED_TARGET_HEADER, PARAMETER_TRACE_HEADER, RUNS_HEADER,
};
pub use stats::{compare_to_oracle, summarize_values, OracleComparison, SummaryStats, BOOTSTRAP_RESAMPLES};

use rayon::prelude::*;

use crate::algorithms::RunOutcome;
use crate::error::{Error, Result};
use crate::rng::RandomSource;

#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub run_id: u64,
    pub n: usize,
    pub problem: String,
    pub algorithm: String,
    pub outcome: RunOutcome,
}

/// Quantity of a run that [`summarize`] aggregates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    Evaluations,
    Generations,
    BestFitness,
    CommunicationEffort,
}

impl Field {
    fn of(self, o: &RunOutcome) -> f64 {
        match self {
            Field::Evaluations => o.evaluations as f64,
            Field::Generations => o.generations as f64,
            Field::BestFitness => o.best_fitness,
            Field::CommunicationEffort => o.communication_effort.unwrap_or(0) as f64,
        }
    }
}

pub fn summarize<'a, I>(outcomes: I, field: Field) -> Result<SummaryStats>
where
    I: IntoIterator<Item = &'a RunOutcome>,
{
    let mut values = Vec::new();
    let mut successes = 0;
    for o in outcomes {
        values.push(field.of(o));
        successes += o.success as usize;
    }
    summarize_values(&values, successes)
}

/// Runs `f(i)` for `i in 0..runs` on the current rayon pool and returns the
/// results in index order.
pub fn replicate<T, F>(runs: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    let mut out: Vec<(usize, T)> = (0..runs).into_par_iter().map(|i| (i, f(i))).collect();
    out.sort_by_key(|e| e.0);
    out.into_iter().map(|e| e.1).collect()
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<RunRecord>> {
    run_experiment_with(config, &|_| {})
}

/// Runs every (dimension, replicate) pair of `config`. Run `i` (counted
/// across dimensions) uses stream `i` of the master seed. `on_complete` sees
/// each record as soon as its run finishes, in completion order; the
/// returned records are ordered by run id.
pub fn run_experiment_with(config: &ExperimentConfig, on_complete: &(dyn Fn(&RunRecord) + Sync)) -> Result<Vec<RunRecord>> {
    config.validate()?;
    let opts = config.run_options();
    let mut jobs = Vec::new();
    for (d, &n) in config.dimensions.iter().enumerate() {
        let problem = config.problem.build(n, config.seed)?;
        let plan = config.algorithm.plan(n)?;
        jobs.push((problem, plan, d * config.runs));
    }
    let algorithm = match &config.algorithm.control {
        Some(c) => format!("{}/{}", config.algorithm.name, c),
        None => config.algorithm.name.clone(),
    };
    let total = jobs.len() * config.runs;
    let work = || -> Result<Vec<RunRecord>> {
        let results = replicate(total, |i| {
            let (problem, plan, _) = &jobs[i / config.runs];
            let mut rng = RandomSource::new(config.seed, i as u64);
            plan.execute(problem, &opts, &mut rng).map(|outcome| {
                let record = RunRecord {
                    run_id: i as u64,
                    n: problem.dimension(),
                    problem: problem.name().to_string(),
                    algorithm: algorithm.clone(),
                    outcome,
                };
                on_complete(&record);
                record
            })
        });
        results.into_iter().collect()
    };
    match config.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(work),
        None => work(),
    }
}
