use std::sync::OnceLock;

use statrs::function::gamma::ln_gamma;

use crate::error::{invalid, Result};

fn ln_choose(a: usize, b: usize) -> f64 {
    ln_gamma(a as f64 + 1.0) - ln_gamma(b as f64 + 1.0) - ln_gamma((a - b) as f64 + 1.0)
}

// Terms below this fraction of the running sum are dropped once past the mode.
const NEGLIGIBLE: f64 = 1e-18;

/// `E[max(OM(y) - OM(x), 0)]` when `ℓ` distinct bits of a string with `f`
/// ones out of `n` are flipped.
///
/// The number `i` of flipped zero-bits is hypergeometric; the gain is
/// `2i - ℓ`. Terms are generated by ratio recurrences.
pub fn onemax_drift(n: usize, f: usize, l: usize) -> f64 {
    if l == 0 || l > n || f > n {
        return 0.0;
    }
    let d = n - f;
    let lo = l / 2 + 1;
    let hi = l.min(d);
    if lo > hi {
        return 0.0;
    }
    // the lowest index in the hypergeometric support is max(0, l - f)
    let start = lo.max(l.saturating_sub(f));
    if start > hi {
        return 0.0;
    }
    // start at the mode (or the first positive-gain index if that lies beyond
    // it) so the anchor term never underflows, then walk outwards
    let mode = ((l + 1) as f64 * (d + 1) as f64 / (n + 2) as f64).floor() as usize;
    let pivot = start.max(mode.min(hi));
    let anchor = (ln_choose(d, pivot) + ln_choose(f, l - pivot) - ln_choose(n, l)).exp();
    let mut sum = 0.0;
    let mut term = anchor;
    let mut i = pivot;
    loop {
        let contribution = term * (2 * i - l) as f64;
        sum += contribution;
        if i >= hi || contribution < NEGLIGIBLE * sum {
            break;
        }
        term *= ((d - i) * (l - i)) as f64 / ((i + 1) * (f + i + 1 - l)) as f64;
        i += 1;
    }
    let mut term = anchor;
    let mut i = pivot;
    while i > start {
        term *= (i * (f + i - l)) as f64 / ((d - i + 1) * (l - i + 1)) as f64;
        i -= 1;
        let contribution = term * (2 * i - l) as f64;
        sum += contribution;
        if contribution < NEGLIGIBLE * sum {
            break;
        }
    }
    sum
}

/// The drift-maximizing strength at fitness `f` (ties go to the smaller `ℓ`).
pub fn drift_max_strength(n: usize, f: usize) -> Result<usize> {
    if f >= n {
        return invalid(format!("fitness {f} must be below n = {n}"));
    }
    Ok(argmax_strength(n, f, n))
}

fn argmax_strength(n: usize, f: usize, cap: usize) -> usize {
    let d = n - f;
    // flipping more than 2d bits never gains
    let last = cap.min(n).min(2 * d);
    let eps = 1.0 - 2.0 * d as f64 / n as f64;
    let mut best = (onemax_drift(n, f, 1), 1);
    for l in 2..=last {
        // Hoeffding: the drift is at most l exp(-eps^2 l / 2), decreasing in
        // l once l > 2/eps^2
        if eps > 0.0 {
            let lf = l as f64;
            if lf > 2.0 / (eps * eps) && lf * (-eps * eps * lf / 2.0).exp() < best.0 {
                break;
            }
        }
        let v = onemax_drift(n, f, l);
        if better(v, best.0) {
            best = (v, l);
        }
    }
    best.1
}

// Exact ties (e.g. two neighbouring odd strengths) must not be decided by
// round-off, so a candidate has to win by more than the evaluation error.
fn better(candidate: f64, incumbent: f64) -> bool {
    candidate > incumbent * (1.0 + 1e-10)
}

/// Lazily filled table of drift-maximizing strengths for one `n`, safe to
/// share across concurrent runs.
#[derive(Debug)]
pub struct DriftTable {
    n: usize,
    cap: usize,
    cells: Vec<OnceLock<usize>>,
}

impl DriftTable {
    pub fn new(n: usize) -> Self {
        Self::with_cap(n, n)
    }

    /// Restricts the maximization to strengths `1..=cap`.
    pub fn with_cap(n: usize, cap: usize) -> Self {
        Self {
            n,
            cap: cap.max(1),
            cells: (0..n).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Best strength at fitness `f < n`.
    pub fn strength(&self, f: usize) -> usize {
        *self.cells[f].get_or_init(|| argmax_strength(self.n, f, self.cap))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Enumerates all flip sets of size `l` on `x = 1^f 0^(n-f)`.
    fn exhaustive(n: usize, f: usize, l: usize) -> f64 {
        let mut total = 0.0;
        let mut count = 0u64;
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != l {
                continue;
            }
            let mut gain = 0i64;
            for pos in 0..n {
                if mask >> pos & 1 == 1 {
                    gain += if pos < f { -1 } else { 1 };
                }
            }
            total += gain.max(0) as f64;
            count += 1;
        }
        total / count as f64
    }

    #[test]
    fn examples() {
        for (n, f) in [(10, 3), (7, 0), (7, 7)] {
            assert!((onemax_drift(n, f, 1) - (n - f) as f64 / n as f64).abs() < 1e-13);
        }
        assert!((onemax_drift(10, 5, 2) - 20.0 / 45.0).abs() < 1e-14);
    }

    #[test]
    fn matches_exhaustive_enumeration() {
        for n in 1..=12 {
            for f in 0..=n {
                for l in 1..=n {
                    let a = onemax_drift(n, f, l);
                    let b = exhaustive(n, f, l);
                    assert!((a - b).abs() < 1e-12, "n={n} f={f} l={l}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn max_strength_examples() {
        assert_eq!(drift_max_strength(300, 220).unwrap(), 1);
        assert_eq!(drift_max_strength(300, 0).unwrap(), 300);
        assert!(drift_max_strength(300, 300).is_err());
        // from f >= n/2 the maximizer is odd; below, flipping all n bits wins
        for f in 6..12 {
            assert_eq!(drift_max_strength(12, f).unwrap() % 2, 1);
        }
        for f in 0..6 {
            assert_eq!(drift_max_strength(12, f).unwrap(), 12);
        }
        // exact tie between 5 and 7 at f = n/2
        assert_eq!(drift_max_strength(12, 6).unwrap(), 5);
    }

    #[test]
    fn one_bit_from_two_thirds() {
        let n = 300;
        for f in (2 * n + 2) / 3..n {
            assert_eq!(drift_max_strength(n, f).unwrap(), 1);
        }
    }

    #[test]
    fn pruned_argmax_matches_full_scan() {
        for n in [50, 137, 200] {
            for f in 0..n {
                let mut best = (0.0, 0);
                for l in 1..=n {
                    let v = onemax_drift(n, f, l);
                    if v > best.0 * (1.0 + 1e-10) {
                        best = (v, l);
                    }
                }
                let got = drift_max_strength(n, f).unwrap();
                assert_eq!(got, best.1, "n={n} f={f}");
                if 2 * f >= n {
                    assert_eq!(got % 2, 1, "n={n} f={f}");
                }
            }
        }
    }

    #[test]
    fn table_is_memoized_and_capped() {
        let t = DriftTable::with_cap(100, 3);
        assert_eq!(t.strength(0), 3);
        assert_eq!(t.strength(99), 1);
        let full = DriftTable::new(100);
        for f in 0..100 {
            assert_eq!(full.strength(f), drift_max_strength(100, f).unwrap());
        }
    }
}
