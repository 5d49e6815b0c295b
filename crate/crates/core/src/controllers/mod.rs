//! Parameter update rules. Each controller is a small state machine that
//! observes the outcome of an iteration and emits the next parameter value.

mod bandit;
mod hh;

pub use bandit::{normalized_reward, PortfolioStats, VelocityTable};
pub use hh::{
    hh_next_operator, migration_interval_update, sigma_grg_tau_update, HhChoice, HhMechanism, HhState,
    MigrationEvent, MigrationScheme,
};

use crate::error::{invalid, Result};
use crate::rng::RandomSource;

/// Outcome of comparing an offspring against its parent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Improved,
    Equal,
    Worse,
}

/// Multiplicative success rule: divide by `F` on success, multiply by
/// `F^(1/(s-1))` otherwise, clamped to `[lo, hi]`.
#[derive(Clone, Debug, PartialEq)]
pub struct OneFifthState {
    value: f64,
    factor: f64,
    lo: f64,
    hi: f64,
    s: f64,
}

impl OneFifthState {
    pub fn new(value: f64, factor: f64, lo: f64, hi: f64) -> Result<Self> {
        Self::with_exponent(value, factor, lo, hi, 5.0)
    }

    pub fn with_exponent(value: f64, factor: f64, lo: f64, hi: f64, s: f64) -> Result<Self> {
        if !(factor > 1.0) {
            return invalid(format!("update strength {factor} must exceed 1"));
        }
        if !(lo <= hi) || !(s > 1.0) {
            return invalid("need lo <= hi and s > 1");
        }
        Ok(Self {
            value: value.clamp(lo, hi),
            factor,
            lo,
            hi,
            s,
        })
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn success(&mut self) -> f64 {
        self.value = (self.value / self.factor).max(self.lo);
        self.value
    }

    pub fn failure(&mut self) -> f64 {
        self.value = (self.value * self.factor.powf(1.0 / (self.s - 1.0))).min(self.hi);
        self.value
    }

    /// Nearest integer, halves rounding up, never below 1.
    pub fn rounded(&self) -> usize {
        let fl = self.value.floor();
        let r = if self.value - fl < 0.5 { fl } else { fl + 1.0 };
        (r as usize).max(1)
    }
}

/// The self-adjusting GA's λ rule: shrink on strict improvement, grow otherwise.
pub fn ga_lambda_update(state: &mut OneFifthState, outcome: Outcome) -> f64 {
    match outcome {
        Outcome::Improved => state.success(),
        Outcome::Equal | Outcome::Worse => state.failure(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DoublingScheme {
    /// Reset to 1 after a success.
    Reset,
    /// Halve after a success.
    Halve,
    /// Divide by the number of successes.
    Jansen,
}

/// Doubles λ when no offspring succeeded, otherwise shrinks it per `scheme`.
pub fn offspring_doubling_update(lambda: usize, successes: usize, scheme: DoublingScheme) -> usize {
    if successes == 0 {
        return 2 * lambda;
    }
    match scheme {
        DoublingScheme::Reset => 1,
        DoublingScheme::Halve => (lambda / 2).max(1),
        DoublingScheme::Jansen => (lambda / successes).max(1),
    }
}

/// Which half of the 2-rate offspring produced the winner.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RateHalf {
    /// Rate `r/(2n)`.
    Low,
    /// Rate `2r/n`.
    High,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwoRateBranch {
    Halve,
    Double,
    Inherit,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TwoRateState {
    r: f64,
    n: usize,
}

impl TwoRateState {
    pub fn new(r_init: f64, n: usize) -> Result<Self> {
        if n < 8 {
            return invalid(format!("2-rate control needs n >= 8, got {n}"));
        }
        let s = Self { r: 0.0, n };
        Ok(Self {
            r: r_init.clamp(2.0, s.hi()),
            n,
        })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn hi(&self) -> f64 {
        self.n as f64 / 4.0
    }

    pub fn low_rate(&self) -> f64 {
        self.r / (2.0 * self.n as f64)
    }

    pub fn high_rate(&self) -> f64 {
        2.0 * self.r / self.n as f64
    }

    pub fn apply(&mut self, branch: TwoRateBranch, winner: RateHalf) -> f64 {
        let halve = match branch {
            TwoRateBranch::Halve => true,
            TwoRateBranch::Double => false,
            TwoRateBranch::Inherit => winner == RateHalf::Low,
        };
        self.r = if halve {
            (self.r / 2.0).max(2.0)
        } else {
            (2.0 * self.r).min(self.hi())
        };
        self.r
    }
}

/// Random branch: halve or double with probability 1/4 each, otherwise
/// follow the winner.
pub fn two_rate_branch(rng: &mut RandomSource) -> TwoRateBranch {
    match rng.below(4) {
        0 => TwoRateBranch::Halve,
        1 => TwoRateBranch::Double,
        _ => TwoRateBranch::Inherit,
    }
}

pub fn two_rate_update(state: &mut TwoRateState, winner: RateHalf, rng: &mut RandomSource) -> f64 {
    let branch = two_rate_branch(rng);
    state.apply(branch, winner)
}

/// `p_min + (p_max - p_min)(i-1)/μ` for rank `i` (1 = best).
pub fn rank_based_rate(rank: usize, mu: usize, p_min: f64, p_max: f64) -> Result<f64> {
    if mu == 0 {
        return invalid("population size must be positive");
    }
    if rank < 1 || rank > mu {
        return invalid(format!("rank {rank} outside [1..{mu}]"));
    }
    Ok(p_min + (p_max - p_min) * (rank - 1) as f64 / mu as f64)
}

/// Cycle length of [`time_dependent_rate`]: `ceil(log2 n) - 1`, at least 1.
pub fn time_dependent_period(n: usize) -> usize {
    let log = (usize::BITS - (n.max(1) - 1).leading_zeros()) as usize;
    log.saturating_sub(1).max(1)
}

/// Rate `2^k/n` with `k = (t-1) mod K`, cycling through `1/n, 2/n, ...` while
/// staying at most 1/2.
pub fn time_dependent_rate(t: u64, n: usize) -> f64 {
    let k = (t.max(1) - 1) % time_dependent_period(n) as u64;
    (1u64 << k) as f64 / n as f64
}

/// `1/(f+1)` for LeadingOnes value `f`.
pub fn fitness_dependent_rate_lo(f: usize) -> f64 {
    1.0 / (f as f64 + 1.0)
}

/// `max(1/n, ln λ / (n ln(en/(n-f))))` for the (1+λ) EA on OneMax.
pub fn fitness_dependent_rate_opl(f: usize, lambda: f64, n: usize) -> Result<f64> {
    if f >= n {
        return invalid(format!("fitness {f} must be below n = {n}"));
    }
    let nf = n as f64;
    let d = (n - f) as f64;
    let p = lambda.ln() / (nf * (std::f64::consts::E * nf / d).ln());
    Ok(p.max(1.0 / nf))
}

/// `ceil(sqrt(n/(n-f)))`, capped at `n`.
pub fn fitness_dependent_lambda_ga(f: usize, n: usize) -> Result<usize> {
    if f >= n {
        return invalid(format!("fitness {f} must be below n = {n}"));
    }
    let l = (n as f64 / (n - f) as f64).sqrt();
    // guard against sqrt of a perfect square landing just above the integer
    let r = l.round();
    let l = if (l - r).abs() < 1e-9 { r } else { l.ceil() };
    Ok((l as usize).clamp(1, n))
}

/// Child rate `r/A` or `rA` with probability 1/2 each, clamped to `[lo, hi]`.
pub fn self_adaptive_child_rate(r: f64, factor: f64, lo: f64, hi: f64, rng: &mut RandomSource) -> f64 {
    let child = if rng.coin(0.5) { r / factor } else { r * factor };
    child.clamp(lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ga_lambda_examples() {
        let mut s = OneFifthState::new(4.0, 1.5, 1.0, 100.0).unwrap();
        assert!((ga_lambda_update(&mut s, Outcome::Improved) - 8.0 / 3.0).abs() < 1e-12);
        let mut s = OneFifthState::new(1.0, 1.5, 1.0, 100.0).unwrap();
        assert_eq!(ga_lambda_update(&mut s, Outcome::Improved), 1.0);
        let mut s = OneFifthState::new(100.0, 1.5, 1.0, 100.0).unwrap();
        assert_eq!(ga_lambda_update(&mut s, Outcome::Worse), 100.0);
        assert!(OneFifthState::new(1.0, 1.0, 1.0, 2.0).is_err());
    }

    #[test]
    fn one_fifth_neutrality() {
        let mut s = OneFifthState::new(10.0, 1.5, 1.0, 1e9).unwrap();
        s.success();
        for _ in 0..4 {
            s.failure();
        }
        assert!((s.value() - 10.0).abs() < 1e-12);
    }

    #[test]
    fn rounding_rule() {
        let mk = |v| OneFifthState::new(v, 1.5, 1.0, 100.0).unwrap().rounded();
        assert_eq!(mk(2.49), 2);
        assert_eq!(mk(2.5), 3);
        assert_eq!(mk(1.0), 1);
    }

    #[test]
    fn doubling_examples() {
        for scheme in [DoublingScheme::Reset, DoublingScheme::Halve, DoublingScheme::Jansen] {
            assert_eq!(offspring_doubling_update(8, 0, scheme), 16);
        }
        assert_eq!(offspring_doubling_update(8, 3, DoublingScheme::Jansen), 2);
        assert_eq!(offspring_doubling_update(1, 5, DoublingScheme::Halve), 1);
        assert_eq!(offspring_doubling_update(8, 3, DoublingScheme::Reset), 1);
    }

    #[test]
    fn two_rate_examples() {
        let mut s = TwoRateState::new(2.0, 64).unwrap();
        assert_eq!(s.apply(TwoRateBranch::Halve, RateHalf::High), 2.0);
        let mut s = TwoRateState::new(16.0, 64).unwrap();
        assert_eq!(s.apply(TwoRateBranch::Double, RateHalf::Low), 16.0);
        let mut s = TwoRateState::new(8.0, 64).unwrap();
        assert_eq!(s.apply(TwoRateBranch::Inherit, RateHalf::High), 16.0);
    }

    #[test]
    fn two_rate_branch_frequencies() {
        let mut rng = RandomSource::new(1, 0);
        let draws = 1_000_000;
        let mut c = [0usize; 3];
        for _ in 0..draws {
            c[two_rate_branch(&mut rng) as usize] += 1;
        }
        for (count, p) in c.iter().zip([0.25, 0.25, 0.5]) {
            let se = (p * (1.0 - p) / draws as f64).sqrt();
            assert!((*count as f64 / draws as f64 - p).abs() < 3.0 * se);
        }
    }

    #[test]
    fn rank_rate_examples() {
        assert_eq!(rank_based_rate(1, 5, 0.01, 1.0).unwrap(), 0.01);
        let top = rank_based_rate(5, 5, 0.01, 1.0).unwrap();
        assert!((top - (0.01 + 0.99 * 4.0 / 5.0)).abs() < 1e-15);
        assert!((rank_based_rate(2, 2, 0.1, 1.0).unwrap() - 0.55).abs() < 1e-15);
        assert!(rank_based_rate(1, 0, 0.1, 1.0).is_err());
    }

    #[test]
    fn time_dependent_cycle() {
        assert_eq!(time_dependent_period(16), 3);
        let rates: Vec<f64> = (1..=7).map(|t| time_dependent_rate(t, 16)).collect();
        assert_eq!(rates, vec![1.0 / 16.0, 2.0 / 16.0, 4.0 / 16.0, 1.0 / 16.0, 2.0 / 16.0, 4.0 / 16.0, 1.0 / 16.0]);
        for n in 2..300 {
            for t in 1..40 {
                assert!(time_dependent_rate(t, n) <= 0.5 + 1e-15);
            }
        }
    }

    #[test]
    fn fitness_dependent_maps() {
        assert_eq!(fitness_dependent_rate_lo(0), 1.0);
        let p = fitness_dependent_rate_opl(0, std::f64::consts::E, 50).unwrap();
        assert!((p - 1.0 / 50.0).abs() < 1e-15);
        assert!(fitness_dependent_rate_opl(50, 2.0, 50).is_err());
        assert_eq!(fitness_dependent_lambda_ga(99, 100).unwrap(), 10);
        assert_eq!(fitness_dependent_lambda_ga(0, 100).unwrap(), 1);
        assert!(fitness_dependent_lambda_ga(100, 100).is_err());
    }

    #[test]
    fn self_adaptive_examples() {
        let mut rng = RandomSource::new(2, 0);
        let mut seen = [0usize; 2];
        for _ in 0..1000 {
            let r = self_adaptive_child_rate(64.0, 32.0, 32.0, 1024.0, &mut rng);
            assert!(r == 32.0 || r == 1024.0);
            seen[(r == 1024.0) as usize] += 1;
            let r = self_adaptive_child_rate(8.0, 2.0, 2.0, 64.0, &mut rng);
            assert!(r == 4.0 || r == 16.0);
            let r = self_adaptive_child_rate(2.0, 2.0, 2.0, 64.0, &mut rng);
            assert!(r == 2.0 || r == 4.0);
        }
        assert!(seen[0] > 400 && seen[1] > 400);
    }

    proptest! {
        #[test]
        fn capped_states_stay_in_bounds(ops in proptest::collection::vec(0u8..6, 1..2000), seed in any::<u64>()) {
            let mut rng = RandomSource::new(seed, 0);
            let mut fifth = OneFifthState::new(5.0, 1.5, 1.0, 64.0).unwrap();
            let mut two = TwoRateState::new(4.0, 256).unwrap();
            let mut rate = 8.0;
            for op in ops {
                match op {
                    0 => { fifth.success(); }
                    1 => { fifth.failure(); }
                    2 => { two_rate_update(&mut two, RateHalf::Low, &mut rng); }
                    3 => { two_rate_update(&mut two, RateHalf::High, &mut rng); }
                    _ => { rate = self_adaptive_child_rate(rate, 2.0, 2.0, 64.0, &mut rng); }
                }
                prop_assert!((1.0..=64.0).contains(&fifth.value()));
                prop_assert!((2.0..=64.0).contains(&two.r()));
                prop_assert!((2.0..=64.0).contains(&rate));
            }
        }
    }
}
