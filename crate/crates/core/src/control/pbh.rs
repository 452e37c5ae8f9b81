use nalgebra::{Complex, DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::kalman::{check_pair, integer_vector, kalman_exact, kalman_matrix, kalman_numeric_rank, exact_rank};
use crate::error::{Error, Result};
use crate::exact::IntMatrix;
use crate::spectral::{eigen_decompose, SpectralData, DEFAULT_TOL};

/// Overlaps at or below this fraction of ‖b‖ count as orthogonal.
pub const PBH_TOL: f64 = 1e-8;
/// Eigenvalues closer than this (relative to max(1, ‖A‖)) are treated as one cluster.
const CLUSTER_TOL: f64 = 1e-6;
/// Singular values of A − μI below this (relative) count toward the eigenspace dimension.
const EIGENSPACE_TOL: f64 = 1e-8;

/// min over left eigenvectors w of |wᵀb| / ‖b‖.
///
/// Numerically repeated eigenvalues are grouped and the dimension of the
/// left null space of A − μI is measured at the cluster mean μ. Dimension two
/// or more means some left eigenvector is orthogonal to b, so the overlap is
/// exactly 0. Dimension one (a defective eigenvalue) uses the null vector
/// from the SVD, which is far more accurate than the split numeric
/// eigenvectors.
pub fn pbh_min_overlap(a: &DMatrix<f64>, b: &DVector<f64>, spec: &SpectralData) -> Result<f64> {
    check_pair(a, b)?;
    if spec.n() != a.nrows() {
        return Err(Error::domain("spectral data does not match the state matrix"));
    }
    let bnorm = b.norm();
    if bnorm == 0.0 {
        return Err(Error::domain("PBH overlap of the zero input vector"));
    }
    let bc = b.map(|x| Complex::new(x, 0.0));
    let scale = spec.norm.max(1.0);
    let mut min_overlap = f64::INFINITY;
    let mut visited = vec![false; spec.n()];
    for i in 0..spec.n() {
        if visited[i] {
            continue;
        }
        let cluster: Vec<usize> = (i..spec.n())
            .filter(|&j| !visited[j] && (spec.eigenvalues[j] - spec.eigenvalues[i]).norm() <= CLUSTER_TOL * scale)
            .collect();
        for &j in &cluster {
            visited[j] = true;
        }
        if cluster.len() >= 2 {
            let mu = cluster.iter().map(|&j| spec.eigenvalues[j]).sum::<Complex<f64>>() / cluster.len() as f64;
            let (dim, null) = left_null_space(a, mu, scale);
            if dim >= 2 {
                return Ok(0.0);
            }
            if let (1, Some(w)) = (dim, null) {
                min_overlap = min_overlap.min(w.dot(&bc).norm() / (w.norm() * bnorm));
                continue;
            }
        }
        for &j in &cluster {
            let w = &spec.left_eigenvectors[j];
            min_overlap = min_overlap.min(w.dot(&bc).norm() / (w.norm() * bnorm));
        }
    }
    Ok(min_overlap)
}

/// Dimension of {w : wᵀ(A − μI) = 0} and, when it is one, that vector.
fn left_null_space(a: &DMatrix<f64>, mu: Complex<f64>, scale: f64) -> (usize, Option<DVector<Complex<f64>>>) {
    let n = a.nrows();
    let mut m = a.map(|x| Complex::new(x, 0.0));
    for k in 0..n {
        m[(k, k)] -= mu;
    }
    let svd = m.svd(true, false);
    let sv = &svd.singular_values;
    let dim = sv.iter().filter(|&&s| s <= EIGENSPACE_TOL * scale).count();
    if dim != 1 {
        return (dim, None);
    }
    let k = sv.imin();
    // u*(A − μI) = σv* with σ ≈ 0, so w = conj(u) satisfies wᵀ(A − μI) ≈ 0.
    let u = svd.u.expect("requested").column(k).map(|z| z.conj());
    (1, Some(u))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ControlMode {
    Numeric,
    Exact,
    Pbh,
    All,
}

impl std::str::FromStr for ControlMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "numeric" => Ok(ControlMode::Numeric),
            "exact" => Ok(ControlMode::Exact),
            "pbh" => Ok(ControlMode::Pbh),
            "all" => Ok(ControlMode::All),
            other => Err(Error::config(format!("unknown controllability mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlTolerances {
    /// Singular-value threshold; `None` applies n·σ₁·ε to the column-scaled Kalman matrix.
    pub rank_tol: Option<f64>,
    pub pbh_tol: f64,
    pub eigen_tol: f64,
}

impl Default for ControlTolerances {
    fn default() -> Self {
        ControlTolerances {
            rank_tol: None,
            pbh_tol: PBH_TOL,
            eigen_tol: DEFAULT_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControllabilityReport {
    pub schema_version: u32,
    pub n: usize,
    pub mode: ControlMode,
    pub numeric_rank: Option<usize>,
    pub exact_rank: Option<usize>,
    pub pbh_min_overlap: Option<f64>,
    pub verdict_numeric: Option<bool>,
    pub verdict_exact: Option<bool>,
    pub verdict_pbh: Option<bool>,
    /// Threshold actually applied to the singular values.
    pub rank_tol_used: Option<f64>,
    pub tolerances: ControlTolerances,
    /// Disagreements between verdicts, recorded rather than resolved.
    pub warnings: Vec<String>,
}

impl ControllabilityReport {
    /// The exact verdict when present, otherwise the numeric one, otherwise PBH.
    pub fn controllable(&self) -> bool {
        self.verdict_exact
            .or(self.verdict_numeric)
            .or(self.verdict_pbh)
            .unwrap_or(false)
    }
}

pub fn is_controllable(a: &DMatrix<f64>, b: &DVector<f64>, mode: ControlMode) -> Result<ControllabilityReport> {
    is_controllable_with(a, b, mode, &ControlTolerances::default())
}

pub fn is_controllable_with(
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    mode: ControlMode,
    tol: &ControlTolerances,
) -> Result<ControllabilityReport> {
    check_pair(a, b)?;
    let n = a.nrows();
    let want = |m: ControlMode| mode == m || mode == ControlMode::All;
    let mut report = ControllabilityReport {
        schema_version: crate::SCHEMA_VERSION,
        n,
        mode,
        numeric_rank: None,
        exact_rank: None,
        pbh_min_overlap: None,
        verdict_numeric: None,
        verdict_exact: None,
        verdict_pbh: None,
        rank_tol_used: None,
        tolerances: *tol,
        warnings: vec![],
    };

    if want(ControlMode::Numeric) || want(ControlMode::Exact) {
        let k = kalman_matrix(a, b)?;
        if want(ControlMode::Numeric) {
            let (rank, used) = kalman_numeric_rank(&k.columns, tol.rank_tol);
            report.numeric_rank = Some(rank);
            report.rank_tol_used = Some(used);
            report.verdict_numeric = Some(rank == n);
        }
        if want(ControlMode::Exact) {
            match &k.exact_columns {
                Some(exact) => {
                    let rank = exact_rank(exact)?;
                    report.exact_rank = Some(rank);
                    report.verdict_exact = Some(rank == n);
                }
                None if mode == ControlMode::Exact => {
                    return Err(Error::config("exact mode needs integer A and b"));
                }
                None => report
                    .warnings
                    .push("exact path skipped: inputs are not integers".into()),
            }
        }
    }
    if want(ControlMode::Pbh) {
        if b.norm() == 0.0 {
            report.pbh_min_overlap = Some(0.0);
            report.verdict_pbh = Some(false);
        } else {
            let spec = eigen_decompose(a, tol.eigen_tol)?;
            let overlap = pbh_min_overlap(a, b, &spec)?;
            report.pbh_min_overlap = Some(overlap);
            report.verdict_pbh = Some(overlap > tol.pbh_tol);
        }
    }
    let verdicts = [
        ("numeric", report.verdict_numeric),
        ("exact", report.verdict_exact),
        ("pbh", report.verdict_pbh),
    ];
    for (i, (na, va)) in verdicts.iter().enumerate() {
        for (nb, vb) in &verdicts[i + 1..] {
            if let (Some(x), Some(y)) = (va, vb) {
                if x != y {
                    report
                        .warnings
                        .push(format!("{na} verdict {x} disagrees with {nb} verdict {y}"));
                }
            }
        }
    }
    Ok(report)
}

/// Exact controllability of an integer pair without floating point.
pub fn is_controllable_exact(a: &IntMatrix, b: &[num_bigint::BigInt]) -> Result<(usize, bool)> {
    let k = kalman_exact(a, b)?;
    let rank = exact_rank(&k)?;
    Ok((rank, rank == a.rows()))
}

/// Controllability of (A, e_i) for every basis vector.
pub fn minimal_controllability_scan(a: &DMatrix<f64>, mode: ControlMode) -> Result<Vec<ControllabilityReport>> {
    if !a.is_square() {
        return Err(Error::domain("state matrix must be square"));
    }
    let n = a.nrows();
    (0..n)
        .map(|i| {
            let mut e = DVector::zeros(n);
            e[i] = 1.0;
            is_controllable(a, &e, mode)
        })
        .collect()
}

/// Whether A and b have integer entries, so the exact path applies.
pub fn is_integer_pair(a: &DMatrix<f64>, b: &DVector<f64>) -> bool {
    IntMatrix::from_f64(a).is_some() && integer_vector(b).is_some()
}
