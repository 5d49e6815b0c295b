//! Variation operators.
//!
//! Every operator on bit strings exists in two forms: one returning the
//! offspring, and a `*_flips` form returning the flipped positions. The
//! algorithms use the second form so that problems can evaluate the
//! offspring incrementally from the parent. Flip lists never contain a
//! position twice.

use rand::seq::index;

use crate::error::{invalid, Result};
use crate::genome::{BitString, IntString};
use crate::rng::RandomSource;

/// `k` distinct positions of `[0, n)` drawn uniformly without replacement.
pub fn sample_distinct(n: usize, k: usize, rng: &mut RandomSource) -> Vec<usize> {
    debug_assert!(k <= n);
    index::sample(rng, n, k).into_vec()
}

pub fn flip_k_distinct(x: &BitString, k: usize, rng: &mut RandomSource) -> Result<BitString> {
    if k > x.len() {
        return invalid(format!("cannot flip {k} bits of a length-{} string", x.len()));
    }
    let mut y = x.clone();
    y.flip_all(&sample_distinct(x.len(), k, rng));
    Ok(y)
}

/// Positions flipped by standard bit mutation with rate `p`.
///
/// Draws the number of flips from `Bin(n, p)` and then that many distinct
/// positions, which has the same law as `n` independent coin flips.
pub fn standard_bit_flips(n: usize, p: f64, rng: &mut RandomSource) -> Vec<usize> {
    let k = rng.binomial(n as u64, p) as usize;
    sample_distinct(n, k, rng)
}

pub fn standard_bit_mutation(x: &BitString, p: f64, rng: &mut RandomSource) -> Result<BitString> {
    if !(0.0..=1.0).contains(&p) {
        return invalid(format!("mutation rate {p} outside [0, 1]"));
    }
    let mut y = x.clone();
    y.flip_all(&standard_bit_flips(x.len(), p, rng));
    Ok(y)
}

/// Flips bit `i`, then bit `j`, with `i` and `j` independent and uniform.
/// When `i == j` the two flips cancel and the list is empty.
pub fn pair_with_replacement_flips(n: usize, rng: &mut RandomSource) -> Vec<usize> {
    let i = rng.below(n);
    let j = rng.below(n);
    if i == j {
        Vec::new()
    } else {
        vec![i, j]
    }
}

pub fn two_bit_flip_with_replacement(x: &BitString, rng: &mut RandomSource) -> BitString {
    let mut y = x.clone();
    y.flip_all(&pair_with_replacement_flips(x.len(), rng));
    y
}

/// A low-level flip operator as used by the mixing and hyper-heuristic
/// algorithms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlipOperator {
    /// Flip exactly `k` pairwise different bits.
    Distinct(usize),
    /// The two-bit operator that draws both positions with replacement.
    PairWithReplacement,
}

impl FlipOperator {
    pub fn flips(&self, n: usize, rng: &mut RandomSource) -> Vec<usize> {
        match *self {
            FlipOperator::Distinct(k) => sample_distinct(n, k.min(n), rng),
            FlipOperator::PairWithReplacement => pair_with_replacement_flips(n, rng),
        }
    }

    /// The nominal number of flipped bits.
    pub fn strength(&self) -> usize {
        match *self {
            FlipOperator::Distinct(k) => k,
            FlipOperator::PairWithReplacement => 2,
        }
    }

    /// Distribution over flip masks of a length-`n` string, as
    /// `(positions, probability)` pairs. Used by the exact Markov oracles,
    /// so only meant for small `n`.
    pub fn outcomes(&self, n: usize) -> Vec<(Vec<usize>, f64)> {
        match *self {
            FlipOperator::Distinct(k) => {
                let subsets = k_subsets(n, k);
                let p = 1.0 / subsets.len() as f64;
                subsets.into_iter().map(|s| (s, p)).collect()
            }
            FlipOperator::PairWithReplacement => {
                let mut out = vec![(Vec::new(), 1.0 / n as f64)];
                let p = 2.0 / (n * n) as f64;
                for i in 0..n {
                    for j in i + 1..n {
                        out.push((vec![i, j], p));
                    }
                }
                out
            }
        }
    }
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// Positions (among `differing`, where the two parents disagree) at which a
/// biased uniform crossover takes the second parent.
pub fn crossover_flips(differing: &[usize], c: f64, rng: &mut RandomSource) -> Vec<usize> {
    if c >= 1.0 {
        return differing.to_vec();
    }
    differing.iter().copied().filter(|_| rng.coin(c)).collect()
}

/// Takes bit `i` from `second` with probability `c`, from `first` otherwise.
pub fn biased_uniform_crossover(
    first: &BitString,
    second: &BitString,
    c: f64,
    rng: &mut RandomSource,
) -> Result<BitString> {
    if first.len() != second.len() {
        return invalid(format!(
            "crossover of unequal lengths {} and {}",
            first.len(),
            second.len()
        ));
    }
    if !(0.0..=1.0).contains(&c) {
        return invalid(format!("crossover bias {c} outside [0, 1]"));
    }
    let bits = first
        .bits()
        .iter()
        .zip(second.bits())
        .map(|(&a, &b)| if rng.coin(c) { b } else { a })
        .collect();
    Ok(BitString::new(bits))
}

/// How a component step leaving `[0, r-1]` is brought back.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Boundary {
    /// Interval metrics: clamp to the nearest end.
    Clamp,
    /// Ring metric: wrap modulo `r`.
    Wrap,
}

/// `value ± step` brought back into `[0, r-1]`.
pub fn shifted_value(value: u32, step: u32, up: bool, r: u32, boundary: Boundary) -> u32 {
    let v = value as i64;
    let s = step as i64;
    let r = r as i64;
    let raw = if up { v + s } else { v - s };
    let out = match boundary {
        Boundary::Clamp => raw.clamp(0, r - 1),
        Boundary::Wrap => raw.rem_euclid(r),
    };
    out as u32
}

/// Moves coordinate `i` by `floor(v)` down or up with probability 1/2 each.
pub fn component_step(
    x: &IntString,
    i: usize,
    v: f64,
    boundary: Boundary,
    rng: &mut RandomSource,
) -> Result<IntString> {
    if i >= x.len() {
        return invalid(format!("index {i} out of range for length {}", x.len()));
    }
    if !(v >= 1.0) {
        return invalid(format!("velocity {v} below 1"));
    }
    let up = rng.coin(0.5);
    let mut y = x.clone();
    y.set(
        i,
        shifted_value(x.get(i), v.floor() as u32, up, x.alphabet(), boundary),
    );
    Ok(y)
}
