use statrs::statistics::{Data, OrderStatistics, Statistics};

use crate::error::{invalid, Result};
use crate::rng::RandomSource;

pub const BOOTSTRAP_RESAMPLES: usize = 2000;
const BOOTSTRAP_SEED: u64 = 0x5eed_b007;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SummaryStats {
    pub count: usize,
    pub mean: f64,
    /// Sample standard deviation (0 for a single value).
    pub std_dev: f64,
    pub median: f64,
    pub q05: f64,
    pub q95: f64,
    /// Percentile bootstrap 95% interval of the mean.
    pub ci_low: f64,
    pub ci_high: f64,
    pub success_rate: f64,
}

/// Summary of `values`; `successes` of them count as successful runs.
///
/// Quantiles use the median-unbiased estimator. The bootstrap uses a fixed
/// seed, so equal inputs give equal intervals.
pub fn summarize_values(values: &[f64], successes: usize) -> Result<SummaryStats> {
    if values.is_empty() {
        return invalid("cannot summarize an empty sample");
    }
    if values.iter().any(|v| !v.is_finite()) {
        return invalid("sample contains non-finite values");
    }
    let count = values.len();
    let mean = values.mean();
    let std_dev = if count > 1 { values.std_dev() } else { 0.0 };
    let mut data = Data::new(values.to_vec());
    let (median, q05, q95) = (data.median(), data.quantile(0.05), data.quantile(0.95));

    let mut rng = RandomSource::new(BOOTSTRAP_SEED, count as u64);
    let mut means: Vec<f64> = (0..BOOTSTRAP_RESAMPLES)
        .map(|_| (0..count).map(|_| values[rng.below(count)]).sum::<f64>() / count as f64)
        .collect();
    means.sort_by(f64::total_cmp);
    let pick = |q: f64| means[((q * (BOOTSTRAP_RESAMPLES - 1) as f64).round() as usize).min(BOOTSTRAP_RESAMPLES - 1)];
    // a degenerate sample gives a zero-width interval; rounding must not push it off the mean
    let ci_low = pick(0.025).min(mean);
    let ci_high = pick(0.975).max(mean);

    Ok(SummaryStats {
        count,
        mean,
        std_dev,
        median,
        q05,
        q95,
        ci_low,
        ci_high,
        success_rate: successes as f64 / count as f64,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleComparison {
    pub mean: f64,
    pub oracle: f64,
    pub relative_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl std::fmt::Display for OracleComparison {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} mean {:.6} vs oracle {:.6}: relative error {:.4} (tolerance {})",
            if self.pass { "PASS" } else { "FAIL" },
            self.mean,
            self.oracle,
            self.relative_error,
            self.tolerance
        )
    }
}

/// Passes iff `|mean - oracle| / oracle <= tolerance`.
pub fn compare_to_oracle(stats: &SummaryStats, oracle: f64, tolerance: f64) -> Result<OracleComparison> {
    if oracle == 0.0 || !oracle.is_finite() {
        return invalid(format!("oracle value {oracle} cannot serve as a relative reference"));
    }
    let relative_error = (stats.mean - oracle).abs() / oracle.abs();
    Ok(OracleComparison {
        mean: stats.mean,
        oracle,
        relative_error,
        tolerance,
        pass: relative_error <= tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_sample_is_degenerate() {
        let s = summarize_values(&[4.0; 7], 7).unwrap();
        assert_eq!((s.mean, s.std_dev, s.median, s.q05, s.q95), (4.0, 0.0, 4.0, 4.0, 4.0));
        assert_eq!((s.ci_low, s.ci_high), (4.0, 4.0));
        assert_eq!(s.success_rate, 1.0);
    }

    #[test]
    fn empty_sample_is_an_error() {
        assert!(summarize_values(&[], 0).is_err());
    }

    #[test]
    fn known_moments() {
        let v: Vec<f64> = (1..=100).map(f64::from).collect();
        let s = summarize_values(&v, 50).unwrap();
        assert_eq!(s.mean, 50.5);
        assert!((s.std_dev - (100.0f64 * 101.0 / 12.0).sqrt()).abs() < 1e-9);
        assert_eq!(s.median, 50.5);
        assert!(s.q05 < s.median && s.median < s.q95);
        assert!(s.ci_low < s.mean && s.mean < s.ci_high);
        // standard error is about 2.9, so the interval spans roughly ±5.7
        assert!((s.ci_high - s.ci_low - 11.3).abs() < 2.0);
        assert_eq!(s.success_rate, 0.5);
    }

    #[test]
    fn oracle_comparison() {
        let s = summarize_values(&[124_000.0, 126_500.0], 2).unwrap();
        assert!(compare_to_oracle(&s, 125_000.0, 0.05).unwrap().pass);
        assert!(!compare_to_oracle(&s, 250_000.0, 0.05).unwrap().pass);
        assert!(compare_to_oracle(&s, 0.0, 0.05).is_err());
    }
}
