use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{bareiss_rank, rational_to_integer_rows, IntMatrix, IntMatrixRecord};

/// Largest dimension accepted by the exact rank path.
pub const EXACT_RANK_MAX_N: usize = 64;

/// (b, Ab, …, A^{n−1}b), in floating point and, for integer inputs, exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct KalmanMatrix {
    pub columns: DMatrix<f64>,
    pub exact_columns: Option<IntMatrix>,
}

impl KalmanMatrix {
    pub fn exact(&self) -> bool {
        self.exact_columns.is_some()
    }

    pub fn to_record(&self) -> KalmanRecord {
        KalmanRecord {
            n: self.columns.nrows(),
            exact: self.exact_columns.as_ref().map(IntMatrixRecord::from),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KalmanRecord {
    pub n: usize,
    pub exact: Option<IntMatrixRecord>,
}

pub(crate) fn check_pair(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<()> {
    if !a.is_square() {
        return Err(Error::domain("state matrix must be square"));
    }
    if b.len() != a.nrows() {
        return Err(Error::domain(format!(
            "input vector has length {}, state dimension is {}",
            b.len(),
            a.nrows()
        )));
    }
    if a.iter().chain(b.iter()).any(|x| !x.is_finite()) {
        return Err(Error::domain("non-finite entries in (A, b)"));
    }
    Ok(())
}

/// Builds the Kalman matrix column by column. When every entry of A and b is
/// an integer the exact big-integer columns are built as well.
pub fn kalman_matrix(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<KalmanMatrix> {
    check_pair(a, b)?;
    let n = a.nrows();
    let mut columns = DMatrix::zeros(n, n);
    if n > 0 {
        columns.set_column(0, b);
        for j in 1..n {
            let next = a * columns.column(j - 1);
            columns.set_column(j, &next);
        }
    }
    let exact_columns = match (IntMatrix::from_f64(a), integer_vector(b)) {
        (Some(ai), Some(bi)) => Some(kalman_exact(&ai, &bi)?),
        _ => None,
    };
    Ok(KalmanMatrix {
        columns,
        exact_columns,
    })
}

pub(crate) fn integer_vector(b: &DVector<f64>) -> Option<Vec<BigInt>> {
    let as_matrix = DMatrix::from_column_slice(b.len(), 1, b.as_slice());
    IntMatrix::from_f64(&as_matrix).map(|m| m.column(0))
}

/// Exact Kalman matrix of an integer pair.
pub fn kalman_exact(a: &IntMatrix, b: &[BigInt]) -> Result<IntMatrix> {
    if !a.is_square() || a.rows() != b.len() {
        return Err(Error::domain("Kalman matrix needs square A and matching b"));
    }
    let n = a.rows();
    let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    if n > 0 {
        cols.push(b.to_vec());
    }
    for j in 1..n {
        let next = a.mul_vec(&cols[j - 1])?;
        cols.push(next);
    }
    Ok(IntMatrix::from_fn(n, n, |i, j| cols[j][i].clone()))
}

/// Default rank threshold: max(rows, cols) · σ₁ · ε.
pub fn default_rank_tol(rows: usize, cols: usize, sigma_max: f64) -> f64 {
    rows.max(cols) as f64 * sigma_max * f64::EPSILON
}

/// Number of singular values above `tol` (default: [`default_rank_tol`]).
pub fn numeric_rank(m: &DMatrix<f64>, tol: Option<f64>) -> usize {
    numeric_rank_with_tol(m, tol).0
}

/// Rank together with the threshold that was applied.
pub fn numeric_rank_with_tol(m: &DMatrix<f64>, tol: Option<f64>) -> (usize, f64) {
    if m.is_empty() {
        return (0, tol.unwrap_or(0.0));
    }
    let sv = m.clone().svd(false, false).singular_values;
    let tau = tol.unwrap_or_else(|| default_rank_tol(m.nrows(), m.ncols(), sv.max()));
    (sv.iter().filter(|&&s| s > tau).count(), tau)
}

/// Rank of a Kalman matrix after scaling each column to unit length, which
/// leaves the rank unchanged and removes the geometric growth of A^j b.
pub fn kalman_numeric_rank(k: &DMatrix<f64>, tol: Option<f64>) -> (usize, f64) {
    let mut scaled = k.clone();
    for mut col in scaled.column_iter_mut() {
        let norm = col.norm();
        if norm > 0.0 && norm.is_finite() {
            col /= norm;
        }
    }
    numeric_rank_with_tol(&scaled, tol)
}

fn check_cap(rows: usize, cols: usize) -> Result<()> {
    if rows.max(cols) > EXACT_RANK_MAX_N {
        return Err(Error::config(format!(
            "exact rank is capped at dimension {EXACT_RANK_MAX_N}, got {rows}x{cols}"
        )));
    }
    Ok(())
}

/// Rank over ℚ of an integer matrix.
pub fn exact_rank(m: &IntMatrix) -> Result<usize> {
    check_cap(m.rows(), m.cols())?;
    Ok(bareiss_rank(m))
}

/// Rank over ℚ of a rational matrix given by rows.
pub fn exact_rank_rational(rows: &[Vec<BigRational>]) -> Result<usize> {
    let m = rational_to_integer_rows(rows)?;
    exact_rank(&m)
}
