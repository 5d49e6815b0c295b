use super::{Direction, IntProblem};
use crate::error::{invalid, Result};
use crate::genome::IntString;
use crate::operators::Boundary;

/// Distance used by the r-valued OneMax variants.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    /// Number of disagreeing positions.
    Mismatch,
    /// Sum of `|x_i - z_i|`.
    Interval,
    /// Sum of ring distances modulo `r`.
    Ring,
}

impl Metric {
    pub fn from_mode(mode: u8) -> Result<Self> {
        match mode {
            1 => Ok(Metric::Mismatch),
            2 => Ok(Metric::Interval),
            3 => Ok(Metric::Ring),
            _ => invalid(format!("metric mode {mode} not in {{1,2,3}}")),
        }
    }

    pub fn mode(self) -> u8 {
        match self {
            Metric::Mismatch => 1,
            Metric::Interval => 2,
            Metric::Ring => 3,
        }
    }

    pub fn boundary(self) -> Boundary {
        match self {
            Metric::Ring => Boundary::Wrap,
            _ => Boundary::Clamp,
        }
    }

    fn coordinate(self, a: u32, b: u32, r: u32) -> u64 {
        let d = a.abs_diff(b);
        match self {
            Metric::Mismatch => (d != 0) as u64,
            Metric::Interval => d as u64,
            Metric::Ring => d.min(r - d) as u64,
        }
    }
}

/// Distance of `x` to `z` under the metric selected by `mode`; 0 at the optimum.
pub fn eval_rvalued_onemax(x: &IntString, z: &IntString, mode: u8) -> Result<f64> {
    let metric = Metric::from_mode(mode)?;
    if x.len() != z.len() || x.alphabet() != z.alphabet() {
        return invalid("strings differ in length or alphabet");
    }
    Ok(distance(x, z, metric) as f64)
}

fn distance(x: &IntString, z: &IntString, metric: Metric) -> u64 {
    let r = z.alphabet();
    x.values()
        .iter()
        .zip(z.values())
        .map(|(&a, &b)| metric.coordinate(a, b, r))
        .sum()
}

#[derive(Clone, Debug)]
pub struct RValuedOneMax {
    target: IntString,
    metric: Metric,
}

impl RValuedOneMax {
    pub fn new(target: IntString, metric: Metric) -> Self {
        Self { target, metric }
    }

    pub fn target(&self) -> &IntString {
        &self.target
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }
}

impl IntProblem for RValuedOneMax {
    fn name(&self) -> &str {
        match self.metric {
            Metric::Mismatch => "rvalued-onemax-1",
            Metric::Interval => "rvalued-onemax-2",
            Metric::Ring => "rvalued-onemax-3",
        }
    }

    fn dimension(&self) -> usize {
        self.target.len()
    }

    fn alphabet(&self) -> u32 {
        self.target.alphabet()
    }

    fn direction(&self) -> Direction {
        Direction::Minimize
    }

    fn boundary(&self) -> Boundary {
        self.metric.boundary()
    }

    fn evaluate(&self, x: &IntString) -> f64 {
        distance(x, &self.target, self.metric) as f64
    }

    fn evaluate_changed(&self, parent: &IntString, parent_fitness: f64, i: usize, value: u32) -> f64 {
        let r = self.alphabet();
        let z = self.target.get(i);
        let before = self.metric.coordinate(parent.get(i), z, r) as f64;
        let after = self.metric.coordinate(value, z, r) as f64;
        parent_fitness - before + after
    }

    fn optimum_value(&self) -> f64 {
        0.0
    }
}
