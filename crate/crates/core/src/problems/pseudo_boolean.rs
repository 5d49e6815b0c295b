use rand::seq::SliceRandom;

use super::BitProblem;
use crate::error::{invalid, Result};
use crate::genome::BitString;
use crate::rng::RandomSource;

fn check_len(x: &BitString, n: usize) -> Result<()> {
    if x.len() != n {
        return invalid(format!("length mismatch: {} vs {n}", x.len()));
    }
    Ok(())
}

/// Number of positions where `x` agrees with `z`.
pub fn eval_onemax(x: &BitString, z: &BitString) -> Result<usize> {
    check_len(x, z.len())?;
    Ok(x.len() - x.hamming(z))
}

/// OneMax with respect to a target string (all-ones by default).
#[derive(Clone, Debug)]
pub struct OneMax {
    target: BitString,
}

impl OneMax {
    pub fn new(n: usize) -> Self {
        Self {
            target: BitString::ones(n),
        }
    }

    pub fn with_target(target: BitString) -> Self {
        Self { target }
    }

    pub fn target(&self) -> &BitString {
        &self.target
    }
}

impl BitProblem for OneMax {
    fn name(&self) -> &str {
        "onemax"
    }

    fn dimension(&self) -> usize {
        self.target.len()
    }

    fn evaluate(&self, x: &BitString) -> f64 {
        (x.len() - x.hamming(&self.target)) as f64
    }

    fn evaluate_flipped(&self, parent: &BitString, parent_fitness: f64, flips: &[usize]) -> f64 {
        let delta: i64 = flips
            .iter()
            .map(|&i| if parent.get(i) == self.target.get(i) { -1 } else { 1 })
            .sum();
        parent_fitness + delta as f64
    }

    fn optimum_value(&self) -> Option<f64> {
        Some(self.target.len() as f64)
    }

    fn optimizer(&self) -> Option<BitString> {
        Some(self.target.clone())
    }
}

/// A LeadingOnes instance: target `z` and the order in which positions are
/// compared (`order[j]` is the position compared `j`-th).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LOInstance {
    target: BitString,
    order: Vec<usize>,
}

impl LOInstance {
    pub fn new(target: BitString, order: Vec<usize>) -> Result<Self> {
        let n = target.len();
        if order.len() != n {
            return invalid(format!("permutation length {} vs target length {n}", order.len()));
        }
        let mut seen = vec![false; n];
        for &p in &order {
            if p >= n || seen[p] {
                return invalid("order is not a permutation of [0..n)");
            }
            seen[p] = true;
        }
        Ok(Self { target, order })
    }

    /// Target all-ones, identity order.
    pub fn standard(n: usize) -> Self {
        Self {
            target: BitString::ones(n),
            order: (0..n).collect(),
        }
    }

    pub fn target(&self) -> &BitString {
        &self.target
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

/// Length of the longest prefix, in the instance's order, on which `x`
/// agrees with the target.
pub fn eval_leadingones(x: &BitString, inst: &LOInstance) -> Result<usize> {
    check_len(x, inst.len())?;
    Ok(inst
        .order
        .iter()
        .take_while(|&&p| x.get(p) == inst.target.get(p))
        .count())
}

pub fn gen_random_lo_instance(n: usize, rng: &mut RandomSource) -> LOInstance {
    let target = BitString::random(n, rng);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    LOInstance { target, order }
}

#[derive(Clone, Debug)]
pub struct LeadingOnes {
    inst: LOInstance,
    // rank[p] = index of position p in the comparison order
    rank: Vec<usize>,
}

// Above this many flips the incremental path materializes the offspring.
const LO_INCREMENTAL_LIMIT: usize = 32;

impl LeadingOnes {
    pub fn new(n: usize) -> Self {
        Self::from_instance(LOInstance::standard(n))
    }

    pub fn from_instance(inst: LOInstance) -> Self {
        let mut rank = vec![0; inst.len()];
        for (j, &p) in inst.order.iter().enumerate() {
            rank[p] = j;
        }
        Self { inst, rank }
    }

    pub fn instance(&self) -> &LOInstance {
        &self.inst
    }
}

impl BitProblem for LeadingOnes {
    fn name(&self) -> &str {
        "leadingones"
    }

    fn dimension(&self) -> usize {
        self.inst.len()
    }

    fn evaluate(&self, x: &BitString) -> f64 {
        self.inst
            .order
            .iter()
            .take_while(|&&p| x.get(p) == self.inst.target.get(p))
            .count() as f64
    }

    fn evaluate_flipped(&self, parent: &BitString, parent_fitness: f64, flips: &[usize]) -> f64 {
        let n = self.inst.len();
        let lo = parent_fitness as usize;
        if flips.is_empty() || lo == n && flips.is_empty() {
            return parent_fitness;
        }
        if flips.len() > LO_INCREMENTAL_LIMIT {
            let mut y = parent.clone();
            y.flip_all(flips);
            return self.evaluate(&y);
        }
        let first = flips.iter().map(|&p| self.rank[p]).min().unwrap();
        if first < lo {
            return first as f64;
        }
        if first > lo {
            return parent_fitness;
        }
        // the first disagreement was repaired; extend the prefix
        let mut j = lo + 1;
        while j < n {
            let p = self.inst.order[j];
            let bit = parent.get(p) ^ flips.contains(&p);
            if bit != self.inst.target.get(p) {
                break;
            }
            j += 1;
        }
        j as f64
    }

    fn optimum_value(&self) -> Option<f64> {
        Some(self.inst.len() as f64)
    }

    fn optimizer(&self) -> Option<BitString> {
        Some(self.inst.target.clone())
    }
}

/// `Jump_k` on the all-ones target: `k + OM(x)` if `OM(x) <= n-k` or
/// `OM(x) = n`, and `n - OM(x)` inside the gap.
pub fn eval_jump(x: &BitString, k: usize) -> Result<f64> {
    let n = x.len();
    if k < 1 || k > n {
        return invalid(format!("jump gap {k} outside [1..{n}]"));
    }
    Ok(jump_value(x.count_ones(), n, k))
}

fn jump_value(om: usize, n: usize, k: usize) -> f64 {
    if om <= n - k || om == n {
        (k + om) as f64
    } else {
        (n - om) as f64
    }
}

#[derive(Clone, Debug)]
pub struct Jump {
    n: usize,
    k: usize,
}

impl Jump {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k < 1 || k > n {
            return invalid(format!("jump gap {k} outside [1..{n}]"));
        }
        Ok(Self { n, k })
    }
}

impl BitProblem for Jump {
    fn name(&self) -> &str {
        "jump"
    }

    fn dimension(&self) -> usize {
        self.n
    }

    fn evaluate(&self, x: &BitString) -> f64 {
        jump_value(x.count_ones(), self.n, self.k)
    }

    fn optimum_value(&self) -> Option<f64> {
        Some((self.n + self.k) as f64)
    }

    fn optimizer(&self) -> Option<BitString> {
        Some(BitString::ones(self.n))
    }
}

/// `Plateau_k`: OneMax except that values in `[n-k+1..n-1]` read `n-k`.
pub fn eval_plateau(x: &BitString, k: usize) -> Result<f64> {
    let n = x.len();
    if k < 2 || k > n {
        return invalid(format!("plateau width {k} outside [2..{n}]"));
    }
    Ok(plateau_value(x.count_ones(), n, k))
}

fn plateau_value(om: usize, n: usize, k: usize) -> f64 {
    if om <= n - k || om == n {
        om as f64
    } else {
        (n - k) as f64
    }
}

#[derive(Clone, Debug)]
pub struct Plateau {
    n: usize,
    k: usize,
}

impl Plateau {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k < 2 || k > n {
            return invalid(format!("plateau width {k} outside [2..{n}]"));
        }
        Ok(Self { n, k })
    }
}

impl BitProblem for Plateau {
    fn name(&self) -> &str {
        "plateau"
    }

    fn dimension(&self) -> usize {
        self.n
    }

    fn evaluate(&self, x: &BitString) -> f64 {
        plateau_value(x.count_ones(), self.n, self.k)
    }

    fn optimum_value(&self) -> Option<f64> {
        Some(self.n as f64)
    }

    fn optimizer(&self) -> Option<BitString> {
        Some(BitString::ones(self.n))
    }
}

pub fn eval_linear(x: &BitString, weights: &[f64]) -> Result<f64> {
    if x.len() != weights.len() {
        return invalid(format!("length mismatch: {} vs {} weights", x.len(), weights.len()));
    }
    Ok(x.bits()
        .iter()
        .zip(weights)
        .filter(|(&b, _)| b)
        .map(|(_, w)| w)
        .sum())
}

/// i.i.d. uniform weights in `[low, high]`.
pub fn gen_random_linear_weights(n: usize, low: f64, high: f64, rng: &mut RandomSource) -> Result<Vec<f64>> {
    if !(low < high) {
        return invalid(format!("weight range [{low}, {high}] is empty"));
    }
    Ok((0..n).map(|_| low + (high - low) * rng.unit()).collect())
}

/// `x -> sum w_i x_i` with positive weights, maximized by all-ones.
#[derive(Clone, Debug)]
pub struct Linear {
    weights: Vec<f64>,
    total: f64,
}

impl Linear {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|&w| !(w > 0.0)) {
            return invalid("linear weights must be positive");
        }
        let total = eval_linear(&BitString::ones(weights.len()), &weights)?;
        Ok(Self { weights, total })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

impl BitProblem for Linear {
    fn name(&self) -> &str {
        "linear"
    }

    fn dimension(&self) -> usize {
        self.weights.len()
    }

    // Full re-summation keeps the optimum value bit-exact.
    fn evaluate(&self, x: &BitString) -> f64 {
        eval_linear(x, &self.weights).expect("dimension checked by caller")
    }

    fn optimum_value(&self) -> Option<f64> {
        Some(self.total)
    }

    fn optimizer(&self) -> Option<BitString> {
        Some(BitString::ones(self.weights.len()))
    }
}
