use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use super::eigen::SpectralData;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapStats {
    pub delta: f64,
    pub argmin_pair: (usize, usize),
    /// delta / √n
    pub normalized_delta: f64,
}

pub fn min_gap(spec: &SpectralData) -> Result<GapStats> {
    min_gap_of(&spec.eigenvalues)
}

/// Smallest pairwise distance between the given eigenvalues, by a full O(n²) scan.
pub fn min_gap_of(eigenvalues: &[Complex<f64>]) -> Result<GapStats> {
    let n = eigenvalues.len();
    if n < 2 {
        return Err(Error::domain(format!("eigenvalue gap needs n >= 2, got {n}")));
    }
    let mut best = (f64::INFINITY, (0, 1));
    for i in 0..n {
        for j in (i + 1)..n {
            let d = (eigenvalues[i] - eigenvalues[j]).norm();
            if d < best.0 {
                best = (d, (i, j));
            }
        }
    }
    Ok(GapStats {
        delta: best.0,
        argmin_pair: best.1,
        normalized_delta: best.0 / (n as f64).sqrt(),
    })
}

/// Empirical CDF of normalized gaps: one row per sample, sorted by value,
/// paired with the fraction of samples at or below it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapCdf {
    pub rows: Vec<(f64, f64)>,
}

impl GapCdf {
    /// Fraction of the sample at or below `s`.
    pub fn at(&self, s: f64) -> f64 {
        let idx = self.rows.partition_point(|&(v, _)| v <= s);
        if idx == 0 {
            0.0
        } else {
            self.rows[idx - 1].1
        }
    }
}

pub fn gap_distribution(sample: &[GapStats]) -> Result<GapCdf> {
    gap_distribution_of(&sample.iter().map(|g| g.normalized_delta).collect::<Vec<_>>())
}

pub fn gap_distribution_of(values: &[f64]) -> Result<GapCdf> {
    if values.is_empty() {
        return Err(Error::domain("gap distribution of an empty sample"));
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::domain("gap sample contains NaN"));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let total = sorted.len() as f64;
    let rows = sorted
        .iter()
        .map(|&s| {
            let count = sorted.partition_point(|&v| v <= s);
            (s, count as f64 / total)
        })
        .collect();
    Ok(GapCdf { rows })
}
