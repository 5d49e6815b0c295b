use crate::error::{invalid, Result};

fn check(n: usize, d: usize, p: f64) -> Result<()> {
    if d < 1 || d > n {
        return invalid(format!("distance {d} outside [1..{n}]"));
    }
    if !(0.0..=1.0).contains(&p) {
        return invalid(format!("mixing probability {p} outside [0, 1]"));
    }
    Ok(())
}

fn pair_term(n: usize, d: usize) -> f64 {
    if n < 2 {
        0.0
    } else {
        (d * (d - 1)) as f64 / (n * (n - 1)) as f64
    }
}

/// Probability that the 1-bit/2-bit mixture (1-bit with probability `p`)
/// improves OneMax at distance `d`: `p d/n + (1-p) d(d-1)/(n(n-1))`.
pub fn mixed_pd(n: usize, d: usize, p: f64) -> Result<f64> {
    check(n, d, p)?;
    Ok(p * d as f64 / n as f64 + (1.0 - p) * pair_term(n, d))
}

/// Expected distance decrease at distance `d`: `p d/n + 2(1-p) d(d-1)/(n(n-1))`.
pub fn mixed_hd(n: usize, d: usize, p: f64) -> Result<f64> {
    check(n, d, p)?;
    Ok(p * d as f64 / n as f64 + 2.0 * (1.0 - p) * pair_term(n, d))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MixedBounds {
    /// `sum_{d=1}^n 1/p_d`, an upper bound on the expected time from any start.
    pub upper: f64,
    /// `sum_{d=3}^n 1/h_d`, the drift lower bound from distance `n`.
    pub lower: f64,
}

pub fn mixed_bounds(n: usize, p: f64) -> Result<MixedBounds> {
    let mut upper = 0.0;
    let mut lower = 0.0;
    for d in 1..=n {
        let pd = mixed_pd(n, d, p)?;
        upper += if pd > 0.0 { 1.0 / pd } else { f64::INFINITY };
        if d >= 3 {
            lower += 1.0 / mixed_hd(n, d, p)?;
        }
    }
    Ok(MixedBounds { upper, lower })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert!((mixed_pd(10, 1, 0.5).unwrap() - 0.05).abs() < 1e-15);
        for d in 1..=10 {
            assert!((mixed_pd(10, d, 1.0).unwrap() - d as f64 / 10.0).abs() < 1e-15);
        }
        assert_eq!(mixed_pd(10, 1, 0.0).unwrap(), 0.0);
        assert_eq!(mixed_bounds(10, 0.0).unwrap().upper, f64::INFINITY);
        assert!(mixed_pd(10, 0, 0.5).is_err());
        assert!(mixed_hd(10, 3, 1.5).is_err());
    }

    #[test]
    fn bounds_are_ordered() {
        for p in [0.1, 0.5, 0.9, 1.0] {
            let b = mixed_bounds(100, p).unwrap();
            assert!(b.lower < b.upper);
        }
    }
}
