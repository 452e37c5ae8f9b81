use std::fmt;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense matrix of exact integers, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    /// Builds a matrix from rows of machine integers. All rows must share a length.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::domain("ragged integer matrix rows"));
        }
        Ok(Self::from_fn(rows.len(), cols, |i, j| BigInt::from(rows[i][j])))
    }

    /// Exact conversion of a floating-point matrix whose entries are all integers
    /// representable without rounding (|x| ≤ 2⁵³). Returns `None` otherwise.
    pub fn from_f64(m: &DMatrix<f64>) -> Option<Self> {
        const LIMIT: f64 = 9_007_199_254_740_992.0;
        if m.iter().any(|x| !x.is_finite() || x.fract() != 0.0 || x.abs() > LIMIT) {
            return None;
        }
        Some(Self::from_fn(m.nrows(), m.ncols(), |i, j| {
            BigInt::from(m[(i, j)] as i64)
        }))
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).to_f64().unwrap_or(f64::NAN)
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn trace(&self) -> BigInt {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// Entries as `i64` when every entry fits.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.data.iter().map(ToPrimitive::to_i64).collect()
    }

    /// Rows as decimal strings; entries of Kalman matrices routinely exceed 64 bits.
    pub fn to_decimal_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(ToString::to_string).collect())
            .collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::domain(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::domain(format!(
                "vector of length {} does not match {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Largest absolute entry, in bits.
    pub fn max_bits(&self) -> u64 {
        self.data.iter().map(BigInt::bits).max().unwrap_or(0)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.rows).map(|i| self.row(i)))
            .finish()
    }
}

/// Exact-integer rendering used by CSV/JSON export.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct IntMatrixRecord {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<String>>,
}

impl From<&IntMatrix> for IntMatrixRecord {
    fn from(m: &IntMatrix) -> Self {
        IntMatrixRecord {
            rows: m.rows,
            cols: m.cols,
            entries: m.to_decimal_rows(),
        }
    }
}

/// Rank over ℚ by fraction-free (Bareiss) elimination.
///
/// Every intermediate entry is a minor of the input, so the divisions by the
/// previous pivot are exact. Pivot columns with no nonzero candidate are
/// skipped, which keeps the divisions exact for rank-deficient input.
pub fn bareiss_rank(m: &IntMatrix) -> usize {
    bareiss(m).0
}

/// Determinant of a square matrix via Bareiss elimination.
pub fn bareiss_determinant(m: &IntMatrix) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::domain("determinant of a non-square matrix"));
    }
    let (rank, det) = bareiss(m);
    Ok(if rank < m.rows() { BigInt::zero() } else { det })
}

fn bareiss(m: &IntMatrix) -> (usize, BigInt) {
    let (rows, cols) = (m.rows, m.cols);
    let mut a: Vec<Vec<BigInt>> = (0..rows).map(|i| m.row(i).to_vec()).collect();
    let mut prev = BigInt::one();
    let mut rank = 0;
    let mut sign = 1i32;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        if pivot != rank {
            a.swap(pivot, rank);
            sign = -sign;
        }
        let (top, bottom) = a.split_at_mut(rank + 1);
        let prow = &top[rank];
        let p = &prow[col];
        for row in bottom.iter_mut() {
            let factor = row[col].clone();
            for j in col + 1..cols {
                let v = p * &row[j] - &factor * &prow[j];
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
            row[col] = BigInt::zero();
        }
        prev = p.clone();
        rank += 1;
    }
    let det = if sign < 0 { -prev } else { prev };
    (rank, det)
}

/// Clears denominators row by row; row scaling by a nonzero constant preserves rank.
pub fn rational_to_integer_rows(rows: &[Vec<BigRational>]) -> Result<IntMatrix> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(Error::domain("ragged rational matrix rows"));
    }
    let mut out = IntMatrix::zeros(rows.len(), cols);
    for (i, row) in rows.iter().enumerate() {
        let lcm = row
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        for (j, x) in row.iter().enumerate() {
            let scaled = x * BigRational::from_integer(lcm.clone());
            debug_assert!(scaled.is_integer());
            out.set(i, j, scaled.to_integer());
        }
    }
    Ok(out)
}

/// Absolute-value bound on entries, used for documented growth caps.
pub fn max_abs(values: &[BigInt]) -> BigInt {
    values.iter().map(|v| v.abs()).max().unwrap_or_default()
}
