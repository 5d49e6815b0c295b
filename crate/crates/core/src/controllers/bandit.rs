use std::collections::VecDeque;

use crate::error::{invalid, Result};
use crate::rng::RandomSource;

/// Raw gain divided by the dimension, clamped to `[0, 1]`.
pub fn normalized_reward(gain: f64, n: usize) -> f64 {
    (gain / n as f64).clamp(0.0, 1.0)
}

/// Operator-selection statistics for probability matching, adaptive pursuit
/// and (windowed) UCB.
#[derive(Clone, Debug)]
pub struct PortfolioStats {
    confidence: Vec<f64>,
    prob: Vec<f64>,
    p_min: f64,
    p_max: f64,
    alpha: f64,
    beta: f64,
    c_ucb: f64,
    window: Option<usize>,
    history: VecDeque<(usize, f64)>,
    plays: Vec<u64>,
    reward_sum: Vec<f64>,
}

impl PortfolioStats {
    pub fn new(k: usize, p_min: f64, alpha: f64, beta: f64, c_ucb: f64, window: Option<usize>) -> Result<Self> {
        if k == 0 {
            return invalid("empty portfolio");
        }
        if !(0.0..=1.0 / k as f64).contains(&p_min) {
            return invalid(format!("p_min {p_min} must lie in [0, 1/{k}]"));
        }
        if !(0.0..=1.0).contains(&alpha) || !(0.0..=1.0).contains(&beta) {
            return invalid("alpha and beta must lie in [0, 1]");
        }
        if window == Some(0) {
            return invalid("window length must be positive");
        }
        Ok(Self {
            confidence: vec![0.0; k],
            prob: vec![1.0 / k as f64; k],
            p_min,
            p_max: 1.0 - (k - 1) as f64 * p_min,
            alpha,
            beta,
            c_ucb,
            window,
            history: VecDeque::new(),
            plays: vec![0; k],
            reward_sum: vec![0.0; k],
        })
    }

    /// Defaults: `p_min = 0.05`, `α = β = 0.3`, `c = 1`, window 50.
    pub fn with_defaults(k: usize) -> Result<Self> {
        Self::new(k, 0.05_f64.min(1.0 / k as f64), 0.3, 0.3, 1.0, Some(50))
    }

    pub fn len(&self) -> usize {
        self.prob.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prob.is_empty()
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.prob
    }

    pub fn confidences(&self) -> &[f64] {
        &self.confidence
    }

    pub fn p_max(&self) -> f64 {
        self.p_max
    }

    /// Plays of arm `i` within the window.
    pub fn plays(&self, i: usize) -> u64 {
        self.plays[i]
    }

    /// Mean reward of arm `i` within the window (0 if unplayed).
    pub fn empirical_reward(&self, i: usize) -> f64 {
        if self.plays[i] == 0 {
            0.0
        } else {
            self.reward_sum[i] / self.plays[i] as f64
        }
    }

    fn update_confidence(&mut self, i: usize, reward: f64) {
        self.confidence[i] = (1.0 - self.alpha) * self.confidence[i] + self.alpha * reward;
    }

    /// Records a play of arm `i` in the (windowed) play history.
    pub fn record(&mut self, i: usize, reward: f64) {
        self.history.push_back((i, reward));
        self.plays[i] += 1;
        self.reward_sum[i] += reward;
        if let Some(w) = self.window {
            while self.history.len() > w {
                let (j, r) = self.history.pop_front().unwrap();
                self.plays[j] -= 1;
                self.reward_sum[j] -= r;
                if self.plays[j] == 0 {
                    self.reward_sum[j] = 0.0;
                }
            }
        }
    }

    pub fn prob_matching(&mut self, i: usize, reward: f64) {
        self.update_confidence(i, reward);
        self.record(i, reward);
        let k = self.len() as f64;
        let total: f64 = self.confidence.iter().sum();
        for (p, &c) in self.prob.iter_mut().zip(&self.confidence) {
            *p = if total > 0.0 {
                self.p_min + (1.0 - k * self.p_min) * c / total
            } else {
                1.0 / k
            };
        }
    }

    pub fn adaptive_pursuit(&mut self, i: usize, reward: f64) {
        self.update_confidence(i, reward);
        self.record(i, reward);
        let winner = argmax(&self.confidence);
        for (j, p) in self.prob.iter_mut().enumerate() {
            let goal = if j == winner { self.p_max } else { self.p_min };
            *p = (1.0 - self.beta) * *p + self.beta * goal;
        }
    }

    /// Draws an arm from the current probabilities.
    pub fn sample(&self, rng: &mut RandomSource) -> usize {
        let u = rng.unit();
        let mut acc = 0.0;
        for (i, &p) in self.prob.iter().enumerate() {
            acc += p;
            if u < acc {
                return i;
            }
        }
        self.len() - 1
    }

    /// Unplayed arms first (lowest index), then `ER(i) + sqrt(c ln(2 Σn / n_i))`.
    pub fn ucb_select(&self) -> usize {
        if let Some(i) = self.plays.iter().position(|&c| c == 0) {
            return i;
        }
        let total: u64 = self.plays.iter().sum();
        let scores: Vec<f64> = (0..self.len())
            .map(|i| {
                let bonus = (self.c_ucb * (2.0 * total as f64 / self.plays[i] as f64).ln()).sqrt();
                self.empirical_reward(i) + bonus
            })
            .collect();
        argmax(&scores)
    }
}

/// First index of the maximum.
pub(crate) fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for i in 1..v.len() {
        if v[i] > v[best] {
            best = i;
        }
    }
    best
}

/// Time-discounted average progress per mutation strength, with ε-greedy
/// selection. Strengths are `1..=k`.
///
/// Every iteration discounts all stored sums by `1 - δ`. The discount of an
/// arm is applied lazily when it is next played, which gives the same ratios
/// without touching all `k` arms per iteration.
#[derive(Clone, Debug)]
pub struct VelocityTable {
    num: Vec<f64>,
    den: Vec<f64>,
    last: Vec<u64>,
    time: u64,
    delta: f64,
    epsilon: f64,
}

impl VelocityTable {
    pub fn new(k: usize, delta: f64, epsilon: f64) -> Result<Self> {
        if k == 0 {
            return invalid("need at least one strength");
        }
        if !(0.0..=1.0).contains(&delta) || !(0.0..=1.0).contains(&epsilon) {
            return invalid("delta and epsilon must lie in [0, 1]");
        }
        Ok(Self {
            num: vec![0.0; k],
            den: vec![0.0; k],
            last: vec![0; k],
            time: 0,
            delta,
            epsilon,
        })
    }

    pub fn k(&self) -> usize {
        self.num.len()
    }

    pub fn update(&mut self, strength: usize, progress: f64) {
        let i = strength - 1;
        self.time += 1;
        let decay = if self.den[i] == 0.0 {
            0.0
        } else {
            (1.0 - self.delta).powf((self.time - self.last[i]) as f64)
        };
        self.num[i] = decay * self.num[i] + progress;
        self.den[i] = decay * self.den[i] + 1.0;
        self.last[i] = self.time;
    }

    /// Current velocity; `+inf` for a strength never observed.
    pub fn velocity(&self, strength: usize) -> f64 {
        let i = strength - 1;
        if self.den[i] == 0.0 {
            f64::INFINITY
        } else {
            self.num[i] / self.den[i]
        }
    }

    pub fn greedy(&self) -> usize {
        let v: Vec<f64> = (1..=self.k()).map(|r| self.velocity(r)).collect();
        argmax(&v) + 1
    }

    pub fn select(&self, rng: &mut RandomSource) -> usize {
        if rng.coin(self.epsilon) {
            rng.below(self.k()) + 1
        } else {
            self.greedy()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn probability_matching_symmetry() {
        let mut s = PortfolioStats::with_defaults(4).unwrap();
        for i in 0..4 {
            s.prob_matching(i, 0.5);
        }
        for &p in s.probabilities() {
            assert!((p - 0.25).abs() < 1e-12);
        }
        assert!(PortfolioStats::with_defaults(0).is_err());
    }

    #[test]
    fn adaptive_pursuit_converges_to_p_max() {
        let mut s = PortfolioStats::new(3, 0.1, 0.3, 0.3, 1.0, None).unwrap();
        let mut prev = s.probabilities()[1];
        for _ in 0..200 {
            s.adaptive_pursuit(1, 1.0);
            let p = s.probabilities()[1];
            assert!(p >= prev - 1e-15);
            prev = p;
        }
        assert!((prev - s.p_max()).abs() < 1e-12);
        assert!((s.p_max() - 0.8).abs() < 1e-15);
    }

    #[test]
    fn ucb_example() {
        let mut s = PortfolioStats::new(2, 0.0, 0.3, 0.3, 1.0, Some(50)).unwrap();
        for _ in 0..10 {
            s.record(0, 0.5);
        }
        s.record(1, 0.5);
        // independent evaluation of both scores
        let a = 0.5 + (22.0f64 / 10.0).ln().sqrt();
        let b = 0.5 + 22.0f64.ln().sqrt();
        assert!(b > a);
        assert_eq!(s.ucb_select(), 1);
    }

    #[test]
    fn ucb_plays_every_arm_first_and_window_forgets() {
        let mut s = PortfolioStats::new(3, 0.0, 0.3, 0.3, 1.0, Some(4)).unwrap();
        assert_eq!(s.ucb_select(), 0);
        s.record(0, 1.0);
        assert_eq!(s.ucb_select(), 1);
        for _ in 0..4 {
            s.record(1, 0.0);
        }
        assert_eq!(s.plays(0), 0);
        assert_eq!(s.ucb_select(), 0);
    }

    #[test]
    fn distributions_stay_normalized_under_fuzz() {
        let mut rng = RandomSource::new(3, 0);
        let mut pm = PortfolioStats::new(4, 0.05, 0.3, 0.3, 1.0, Some(50)).unwrap();
        let mut ap = PortfolioStats::new(4, 0.05, 0.3, 0.3, 1.0, Some(50)).unwrap();
        for _ in 0..100_000 {
            let i = pm.sample(&mut rng);
            pm.prob_matching(i, rng.unit());
            let j = ap.sample(&mut rng);
            ap.adaptive_pursuit(j, rng.unit());
            for s in [&pm, &ap] {
                let total: f64 = s.probabilities().iter().sum();
                assert!((total - 1.0).abs() < 1e-12);
                for &p in s.probabilities() {
                    assert!(p >= 0.05 - 1e-12 && p <= s.p_max() + 1e-12);
                }
            }
        }
    }

    #[test]
    fn velocity_examples() {
        let mut t = VelocityTable::new(3, 0.2, 0.0).unwrap();
        t.update(2, 5.0);
        assert_eq!(t.velocity(2), 5.0);
        t.update(2, 1.0);
        assert!((t.velocity(2) - (0.8 * 5.0 + 1.0) / 1.8).abs() < 1e-12);

        let mut t = VelocityTable::new(3, 1.0, 0.0).unwrap();
        t.update(1, 4.0);
        t.update(1, 7.0);
        assert_eq!(t.velocity(1), 7.0);
    }

    #[test]
    fn velocity_matches_discounted_average() {
        // direct evaluation of the discounted ratio over the full history
        let mut rng = RandomSource::new(4, 0);
        let delta = 0.05;
        let mut t = VelocityTable::new(4, delta, 0.0).unwrap();
        let mut hist: Vec<(usize, f64)> = Vec::new();
        for _ in 0..300 {
            let r = rng.below(4) + 1;
            let g = rng.unit() * 3.0;
            t.update(r, g);
            hist.push((r, g));
        }
        let now = hist.len();
        for r in 1..=4 {
            let (mut num, mut den) = (0.0, 0.0);
            for (s, &(rs, g)) in hist.iter().enumerate() {
                if rs == r {
                    let w = (1.0f64 - delta).powi((now - 1 - s) as i32);
                    num += w * g;
                    den += w;
                }
            }
            assert!((t.velocity(r) - num / den).abs() < 1e-9);
        }
    }

    #[test]
    fn unobserved_strengths_are_explored_first() {
        let mut t = VelocityTable::new(3, 0.1, 0.0).unwrap();
        t.update(1, 10.0);
        assert_eq!(t.greedy(), 2);
        t.update(2, 1.0);
        t.update(3, 1.0);
        assert_eq!(t.greedy(), 1);
    }

    #[test]
    fn greedy_is_scale_invariant() {
        let mut rng = RandomSource::new(5, 0);
        for _ in 0..1000 {
            let mut a = VelocityTable::new(5, 0.1, 0.0).unwrap();
            let mut b = a.clone();
            // powers of two keep the scaled sums exact
            let c = 2f64.powi(rng.below(8) as i32 - 4);
            for _ in 0..20 {
                let r = rng.below(5) + 1;
                let g = (rng.below(4)) as f64;
                a.update(r, g);
                b.update(r, c * g);
            }
            assert_eq!(a.greedy(), b.greedy());
        }
    }
}
