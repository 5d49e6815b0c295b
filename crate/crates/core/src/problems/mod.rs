//! Benchmark functions and instance generators.
//!
//! Bit-string problems implement [`BitProblem`]; the r-valued OneMax
//! variants implement [`IntProblem`]. Problems are immutable after
//! construction. Evaluations are counted by an [`Evaluator`] owned by the
//! run, so one instance can serve many concurrent runs.

mod graph;
mod pseudo_boolean;
mod rvalued;

pub use graph::{
    eval_mst, gen_connected_triangles, kruskal_tree, kruskal_weight, GraphInstance, MstProblem, TriangleWeights,
};
pub use pseudo_boolean::{
    eval_jump, eval_leadingones, eval_linear, eval_onemax, eval_plateau, gen_random_linear_weights,
    gen_random_lo_instance, Jump, LOInstance, LeadingOnes, Linear, OneMax, Plateau,
};
pub use rvalued::{eval_rvalued_onemax, Metric, RValuedOneMax};

use crate::genome::{BitString, IntString};
use crate::operators::Boundary;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Maximize,
    Minimize,
}

impl Direction {
    /// Improvement when moving from fitness `from` to `to` (positive is better).
    pub fn gain(self, from: f64, to: f64) -> f64 {
        match self {
            Direction::Maximize => to - from,
            Direction::Minimize => from - to,
        }
    }

    pub fn better(self, a: f64, b: f64) -> bool {
        self.gain(b, a) > 0.0
    }

    pub fn at_least_as_good(self, a: f64, b: f64) -> bool {
        self.gain(b, a) >= 0.0
    }

    pub fn worst(self) -> f64 {
        match self {
            Direction::Maximize => f64::NEG_INFINITY,
            Direction::Minimize => f64::INFINITY,
        }
    }
}

pub trait BitProblem: Send + Sync {
    fn name(&self) -> &str;

    fn dimension(&self) -> usize;

    fn direction(&self) -> Direction {
        Direction::Maximize
    }

    fn evaluate(&self, x: &BitString) -> f64;

    /// Fitness of `parent` with `flips` applied, given the parent's fitness.
    /// Implementations override this with an incremental update.
    fn evaluate_flipped(&self, parent: &BitString, parent_fitness: f64, flips: &[usize]) -> f64 {
        let _ = parent_fitness;
        let mut y = parent.clone();
        y.flip_all(flips);
        self.evaluate(&y)
    }

    /// The optimal fitness value, if known.
    fn optimum_value(&self) -> Option<f64>;

    /// A known optimizer, if any.
    fn optimizer(&self) -> Option<BitString> {
        None
    }

    fn is_optimal(&self, fitness: f64) -> bool {
        self.optimum_value()
            .map_or(false, |opt| self.direction().at_least_as_good(fitness, opt))
    }
}

pub trait IntProblem: Send + Sync {
    fn name(&self) -> &str;

    fn dimension(&self) -> usize;

    fn alphabet(&self) -> u32;

    fn direction(&self) -> Direction;

    fn boundary(&self) -> Boundary;

    fn evaluate(&self, x: &IntString) -> f64;

    /// Fitness of `parent` with coordinate `i` set to `value`.
    fn evaluate_changed(&self, parent: &IntString, parent_fitness: f64, i: usize, value: u32) -> f64;

    fn optimum_value(&self) -> f64;

    fn is_optimal(&self, fitness: f64) -> bool {
        self.direction().at_least_as_good(fitness, self.optimum_value())
    }
}

/// Turns a problem into its negation, flipping the optimization direction.
pub struct Negated<P>(pub P);

impl<P: BitProblem> BitProblem for Negated<P> {
    fn name(&self) -> &str {
        self.0.name()
    }

    fn dimension(&self) -> usize {
        self.0.dimension()
    }

    fn direction(&self) -> Direction {
        match self.0.direction() {
            Direction::Maximize => Direction::Minimize,
            Direction::Minimize => Direction::Maximize,
        }
    }

    fn evaluate(&self, x: &BitString) -> f64 {
        -self.0.evaluate(x)
    }

    fn evaluate_flipped(&self, parent: &BitString, parent_fitness: f64, flips: &[usize]) -> f64 {
        -self.0.evaluate_flipped(parent, -parent_fitness, flips)
    }

    fn optimum_value(&self) -> Option<f64> {
        self.0.optimum_value().map(|v| -v)
    }

    fn optimizer(&self) -> Option<BitString> {
        self.0.optimizer()
    }
}

/// Per-run evaluation counter in front of a shared problem.
pub struct Evaluator<'a, P: ?Sized> {
    problem: &'a P,
    count: u64,
}

impl<'a, P: ?Sized> Evaluator<'a, P> {
    pub fn new(problem: &'a P) -> Self {
        Self { problem, count: 0 }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn problem(&self) -> &'a P {
        self.problem
    }
}

impl<'a, P: BitProblem + ?Sized> Evaluator<'a, P> {
    pub fn eval(&mut self, x: &BitString) -> f64 {
        self.count += 1;
        self.problem.evaluate(x)
    }

    pub fn eval_flipped(&mut self, parent: &BitString, parent_fitness: f64, flips: &[usize]) -> f64 {
        self.count += 1;
        self.problem.evaluate_flipped(parent, parent_fitness, flips)
    }
}

impl<'a, P: IntProblem + ?Sized> Evaluator<'a, P> {
    pub fn eval_int(&mut self, x: &IntString) -> f64 {
        self.count += 1;
        self.problem.evaluate(x)
    }

    pub fn eval_changed(&mut self, parent: &IntString, parent_fitness: f64, i: usize, value: u32) -> f64 {
        self.count += 1;
        self.problem.evaluate_changed(parent, parent_fitness, i, value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direction_helpers() {
        assert!(Direction::Maximize.better(2.0, 1.0));
        assert!(Direction::Minimize.better(1.0, 2.0));
        assert!(Direction::Minimize.at_least_as_good(1.0, 1.0));
        assert_eq!(Direction::Minimize.gain(5.0, 3.0), 2.0);
    }

    #[test]
    fn evaluator_counts_every_call() {
        let om = OneMax::new(5);
        let mut ev = Evaluator::new(&om);
        let x = BitString::zeros(5);
        ev.eval(&x);
        ev.eval_flipped(&x, 0.0, &[1, 2]);
        ev.eval(&x);
        assert_eq!(ev.count(), 3);
    }

    #[test]
    fn negation_flips_direction() {
        let om = Negated(OneMax::new(4));
        assert_eq!(om.direction(), Direction::Minimize);
        assert_eq!(om.evaluate(&BitString::ones(4)), -4.0);
        assert_eq!(om.evaluate_flipped(&BitString::ones(4), -4.0, &[0]), -3.0);
        assert!(om.is_optimal(-4.0));
    }
}
