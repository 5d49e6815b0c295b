//! Exact and analytical reference values used as ground truth for the
//! stochastic implementations.

mod drift;
mod lo;
mod markov;
mod mixed;

pub use drift::{drift_max_strength, onemax_drift, DriftTable};
pub use lo::{lo_expected_time, lo_fixed_target_dp, lo_improvement_probability, LoFixedTarget};
pub use markov::{brute_force_hitting_time, flip_kernel, mixture_kernel, standard_bit_kernel, Kernel};
pub use mixed::{mixed_bounds, mixed_hd, mixed_pd, MixedBounds};

pub use crate::problems::kruskal_weight as kruskal_reference;

use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleMethod {
    ClosedForm,
    DynamicProgram,
    LinearSolve,
    Exhaustive,
}

impl OracleMethod {
    pub fn name(self) -> &'static str {
        match self {
            OracleMethod::ClosedForm => "closed-form",
            OracleMethod::DynamicProgram => "dynamic-program",
            OracleMethod::LinearSolve => "linear-solve",
            OracleMethod::Exhaustive => "exhaustive",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleValue {
    pub value: f64,
    pub method: OracleMethod,
}

impl OracleValue {
    pub fn new(value: f64, method: OracleMethod) -> Self {
        Self { value, method }
    }
}

impl std::fmt::Display for OracleValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} ({})", self.value, self.method.name())
    }
}

/// Fitness-level upper bound `sum 1/p_i`; infinite if some `p_i` is 0.
pub fn fitness_level_bound(probs: &[f64]) -> Result<f64> {
    let mut total = 0.0;
    for &p in probs {
        if !(0.0..=1.0).contains(&p) {
            return crate::error::invalid(format!("level probability {p} outside [0, 1]"));
        }
        if p == 0.0 {
            return Ok(f64::INFINITY);
        }
        total += 1.0 / p;
    }
    Ok(total)
}

/// Parallel-time bound `2 sum_{i=1}^{n-1} ln(2en/(n-i))` of the (1+{2λ,1})
/// doubling scheme on OneMax.
pub fn doubling_parallel_bound(n: usize) -> f64 {
    let nf = n as f64;
    2.0 * (1..n)
        .map(|i| (2.0 * std::f64::consts::E * nf / (n - i) as f64).ln())
        .sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_bound_examples() {
        assert_eq!(fitness_level_bound(&[1.0; 7]).unwrap(), 7.0);
        assert_eq!(fitness_level_bound(&[0.5, 0.0]).unwrap(), f64::INFINITY);
        assert!(fitness_level_bound(&[1.5]).is_err());
    }

    #[test]
    fn doubling_bound_below_closed_envelope() {
        let n = 100;
        let bound = doubling_parallel_bound(n);
        let envelope = 2.0 * n as f64 * (2.0 * std::f64::consts::E.powi(2)).ln();
        assert!(bound <= envelope);
        assert!(bound > 0.0);
    }

    #[test]
    fn lo_level_bound_dominates_exact_time() {
        for n in [5, 20, 100] {
            for c in [0.5, 1.0, 1.59, 3.0] {
                let p = c / n as f64;
                let probs: Vec<f64> = (0..n).map(|i| p * (1.0 - p).powi(i as i32)).collect();
                let upper = fitness_level_bound(&probs).unwrap();
                let exact = lo_expected_time(n, p).unwrap();
                assert!(upper >= exact);
                assert!(upper <= 2.0 * exact + 1e-9);
            }
        }
    }
}
