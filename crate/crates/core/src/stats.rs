//! Binomial confidence intervals and order statistics.

use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Wilson score interval for `successes` out of `trials` at the given two-sided confidence.
pub fn wilson_interval(successes: u64, trials: u64, confidence: f64) -> Result<(f64, f64)> {
    if trials == 0 {
        return Err(Error::domain("Wilson interval needs at least one trial"));
    }
    if successes > trials {
        return Err(Error::domain(format!(
            "successes {successes} exceed trials {trials}"
        )));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::domain(format!(
            "confidence must lie in (0,1), got {confidence}"
        )));
    }
    let z = Normal::new(0.0, 1.0)
        .expect("standard normal")
        .inverse_cdf(1.0 - (1.0 - confidence) / 2.0);
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (center + half).min(1.0) };
    Ok((lo, hi))
}

/// Half the width of the 95% Wilson interval.
pub fn wilson_half_width(successes: u64, trials: u64) -> Result<f64> {
    let (lo, hi) = wilson_interval(successes, trials, 0.95)?;
    Ok((hi - lo) / 2.0)
}

/// Minimum, median and maximum of a sample, ignoring NaN.
pub fn min_median_max(values: &[f64]) -> Option<(f64, f64, f64)> {
    let mut v: Vec<f64> = values.iter().copied().filter(|x| !x.is_nan()).collect();
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len();
    let median = if m % 2 == 1 {
        v[m / 2]
    } else {
        (v[m / 2 - 1] + v[m / 2]) / 2.0
    };
    Some((v[0], median, v[m - 1]))
}
