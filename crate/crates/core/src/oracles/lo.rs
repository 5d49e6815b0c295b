use statrs::function::gamma::ln_gamma;

use crate::error::{invalid, Result};

/// Expected optimization time of the (1+1) EA with static rate `p` on
/// LeadingOnes: `(2p^2)^-1 ((1-p)^(1-n) - (1-p))`.
pub fn lo_expected_time(n: usize, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return invalid(format!("rate {p} outside (0, 1)"));
    }
    let q = 1.0 - p;
    Ok(((1.0 - n as f64) * q.ln()).exp_m1() / (2.0 * p * p) + p / (2.0 * p * p))
}

fn ln_choose(a: usize, b: usize) -> f64 {
    ln_gamma(a as f64 + 1.0) - ln_gamma(b as f64 + 1.0) - ln_gamma((a - b) as f64 + 1.0)
}

/// Probability that flipping `k` distinct bits improves a LeadingOnes value of
/// `i < n`: `C(n-i-1, k-1) / C(n, k)`.
pub fn lo_improvement_probability(n: usize, i: usize, k: usize) -> f64 {
    if k == 0 || k > n || i >= n || k - 1 > n - i - 1 {
        return 0.0;
    }
    // exact product form for the small strengths used in practice
    if k <= 8 {
        let mut num = 1.0;
        let mut den = 1.0;
        for j in 0..k - 1 {
            num *= (n - i - 1 - j) as f64;
        }
        for j in 0..k {
            den *= (n - j) as f64;
        }
        return num * k as f64 / den;
    }
    (ln_choose(n - i - 1, k - 1) - ln_choose(n, k)).exp()
}

/// Expected fixed-target times of RLS variants on LeadingOnes.
///
/// Every level `i < n` is visited with probability 1/2 (the bits behind the
/// first disagreement stay uniform), and the waiting time at level `i` is
/// `1/q_{i,k}`.
#[derive(Clone, Debug)]
pub struct LoFixedTarget {
    pub n: usize,
    pub strengths: Vec<usize>,
    /// `per_strength[s][a]`: expected time to reach LO value `a` with strength
    /// `strengths[s]`, `a` in `0..=n`.
    pub per_strength: Vec<Vec<f64>>,
    /// Same for the variant using the best strength at every level.
    pub best: Vec<f64>,
    /// Best strength per level `0..n` (ties go to the smaller strength).
    pub best_strength: Vec<usize>,
}

impl LoFixedTarget {
    pub fn total(&self, s: usize) -> f64 {
        self.per_strength[s][self.n]
    }

    pub fn best_total(&self) -> f64 {
        self.best[self.n]
    }
}

pub fn lo_fixed_target_dp(n: usize, strengths: &[usize]) -> Result<LoFixedTarget> {
    if strengths.is_empty() || strengths.iter().any(|&k| k == 0 || k > n) {
        return invalid(format!("strengths must be a non-empty subset of [1..{n}]"));
    }
    let mut per_strength = vec![vec![0.0; n + 1]; strengths.len()];
    let mut best = vec![0.0; n + 1];
    let mut best_strength = Vec::with_capacity(n);
    for i in 0..n {
        let mut top = (0.0, strengths[0]);
        for (s, &k) in strengths.iter().enumerate() {
            let q = lo_improvement_probability(n, i, k);
            per_strength[s][i + 1] = per_strength[s][i] + if q > 0.0 { 0.5 / q } else { f64::INFINITY };
            if q > top.0 || (q == top.0 && k < top.1) {
                top = (q, k);
            }
        }
        best_strength.push(top.1);
        best[i + 1] = best[i] + if top.0 > 0.0 { 0.5 / top.0 } else { f64::INFINITY };
    }
    Ok(LoFixedTarget {
        n,
        strengths: strengths.to_vec(),
        per_strength,
        best,
        best_strength,
    })
}
