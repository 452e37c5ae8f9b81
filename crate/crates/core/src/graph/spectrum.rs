use nalgebra::{Complex, DMatrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::scc::strongly_connected;
use crate::ensembles::operator_norm;
use crate::error::{Error, Result};
use crate::exact::IntMatrix;
use crate::spectral::{eigenvalues, right_eigenpairs, SpectralData, C64, DEFAULT_TOL};

/// |Im λ| ≤ this · |λ| counts as real.
pub const REAL_TOL: f64 = 1e-8;
/// Modulus gap (relative to ‖adj‖) required for a numerically simple top eigenvalue.
pub const SIMPLE_GAP: f64 = 1e-6;
/// Entries above this count as strictly positive.
pub const POSITIVE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerronReport {
    pub top_eigenvalue: [f64; 2],
    pub top_eigenvalue_is_real: bool,
    pub top_is_simple: bool,
    /// |λ_top| minus the largest other modulus.
    pub modulus_gap: f64,
    /// Smallest real part of the top eigenvector, normalized so its largest entry is positive real.
    pub top_eigenvector_min_entry: f64,
}

impl PerronReport {
    pub fn holds(&self) -> bool {
        self.top_eigenvalue_is_real && self.top_is_simple && self.top_eigenvector_min_entry > POSITIVE_TOL
    }
}

fn check_nonnegative(adj: &DMatrix<f64>) -> Result<()> {
    if !adj.is_square() {
        return Err(Error::domain("matrix must be square"));
    }
    if adj.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
        return Err(Error::domain("Perron check needs a finite nonnegative matrix"));
    }
    Ok(())
}

/// Index of the largest-modulus eigenvalue; among moduli within the
/// simplicity window of the maximum, the one with the largest real part.
pub fn top_index(values: &[C64], norm: f64) -> Option<usize> {
    let max = values.iter().map(|z| z.norm()).fold(f64::NEG_INFINITY, f64::max);
    let window = SIMPLE_GAP * norm.max(f64::MIN_POSITIVE);
    (0..values.len())
        .filter(|&i| values[i].norm() >= max - window)
        .max_by(|&i, &j| values[i].re.total_cmp(&values[j].re))
}

pub fn perron_check(adj: &DMatrix<f64>, spec: &SpectralData) -> Result<PerronReport> {
    check_nonnegative(adj)?;
    if spec.n() != adj.nrows() {
        return Err(Error::domain("spectral data does not match the matrix"));
    }
    perron_from_pairs(&spec.eigenvalues, &spec.right_eigenvectors, spec.norm)
}

/// Perron check that decomposes `adj` itself (right eigenvectors only).
pub fn perron_check_matrix(adj: &DMatrix<f64>) -> Result<PerronReport> {
    check_nonnegative(adj)?;
    let (values, vectors, _) = right_eigenpairs(adj, DEFAULT_TOL)?;
    perron_from_pairs(&values, &vectors, operator_norm(adj))
}

fn perron_from_pairs(values: &[C64], vectors: &[nalgebra::DVector<C64>], norm: f64) -> Result<PerronReport> {
    let top = top_index(values, norm).ok_or_else(|| Error::domain("empty spectrum"))?;
    let lambda = values[top];
    let second = values
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != top)
        .map(|(_, z)| z.norm())
        .fold(0.0, f64::max);
    let gap = lambda.norm() - second;
    let v = crate::spectral::normalize_phase(vectors[top].clone());
    let min_entry = v.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
    Ok(PerronReport {
        top_eigenvalue: [lambda.re, lambda.im],
        top_eigenvalue_is_real: lambda.im.abs() <= REAL_TOL * lambda.norm(),
        top_is_simple: values.len() == 1 || gap > SIMPLE_GAP * norm,
        modulus_gap: gap,
        top_eigenvector_min_entry: min_entry,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutlierReport {
    pub radius: f64,
    /// Eigenvalues with |λ| > (1+δ)√n.
    pub outside_count: usize,
    /// The single eigenvalue outside, when there is exactly one.
    pub outlier: Option<[f64; 2]>,
    /// |outlier − pn|
    pub distance_to_pn: Option<f64>,
}

pub fn outlier_check(adj: &DMatrix<f64>, p: f64, delta: f64) -> Result<OutlierReport> {
    outlier_from_eigenvalues(&eigenvalues(adj)?, p, delta)
}

pub fn outlier_from_eigenvalues(values: &[C64], p: f64, delta: f64) -> Result<OutlierReport> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::domain(format!("edge probability must lie in (0,1], got {p}")));
    }
    if !(delta > 0.0) {
        return Err(Error::domain(format!("delta must be positive, got {delta}")));
    }
    let n = values.len() as f64;
    let radius = (1.0 + delta) * n.sqrt();
    let outside: Vec<C64> = values.iter().copied().filter(|z| z.norm() > radius).collect();
    let (outlier, distance) = match outside.as_slice() {
        [z] => (Some([z.re, z.im]), Some((z - Complex::new(p * n, 0.0)).norm())),
        _ => (None, None),
    };
    Ok(OutlierReport {
        radius,
        outside_count: outside.len(),
        outlier,
        distance_to_pn: distance,
    })
}

/// A − pJ with loops, A − p(J − I) without.
pub fn centered_adjacency(adj: &DMatrix<f64>, p: f64, loops: bool) -> Result<DMatrix<f64>> {
    if !adj.is_square() {
        return Err(Error::domain("adjacency matrix must be square"));
    }
    if !loops && (0..adj.nrows()).any(|i| adj[(i, i)] != 0.0) {
        return Err(Error::domain("loops = false but the diagonal is nonzero"));
    }
    Ok(DMatrix::from_fn(adj.nrows(), adj.ncols(), |i, j| {
        if i == j && !loops {
            0.0
        } else {
            adj[(i, j)] - p
        }
    }))
}

/// Exact centered adjacency for rational p, as rows of rationals.
pub fn centered_adjacency_exact(adj: &IntMatrix, p: &BigRational, loops: bool) -> Result<Vec<Vec<BigRational>>> {
    if !adj.is_square() {
        return Err(Error::domain("adjacency matrix must be square"));
    }
    let n = adj.rows();
    if !loops && (0..n).any(|i| *adj.get(i, i) != BigInt::from(0)) {
        return Err(Error::domain("loops = false but the diagonal is nonzero"));
    }
    Ok((0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let a = BigRational::from_integer(adj.get(i, j).clone());
                    if i == j && !loops {
                        a
                    } else {
                        a - p
                    }
                })
                .collect()
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DigraphReport {
    pub schema_version: u32,
    pub n: usize,
    pub strongly_connected: bool,
    pub scc_count: usize,
    pub perron: PerronReport,
    pub outlier: OutlierReport,
}

/// All digraph checks from one decomposition of `adj`.
pub fn digraph_report(adj: &DMatrix<f64>, p: f64, delta: f64) -> Result<DigraphReport> {
    let (sc, count) = strongly_connected(adj)?;
    let (values, vectors, _) = right_eigenpairs(adj, DEFAULT_TOL)?;
    let perron = perron_from_pairs(&values, &vectors, operator_norm(adj))?;
    let outlier = outlier_from_eigenvalues(&values, p, delta)?;
    Ok(DigraphReport {
        schema_version: crate::SCHEMA_VERSION,
        n: adj.nrows(),
        strongly_connected: sc,
        scc_count: count,
        perron,
        outlier,
    })
}
