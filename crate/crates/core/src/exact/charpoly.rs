use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::matrix::IntMatrix;
use super::poly::IntPoly;

/// Characteristic polynomial det(xI − A) by the Faddeev–LeVerrier recurrence.
///
/// With c_n = 1 and M_1 = I the recurrence is
/// c_{n−k} = −tr(A M_k) / k and M_{k+1} = A M_k + c_{n−k} I.
/// Because every c_j of an integer matrix is an integer, the M_k stay integral
/// and each division by k is exact, so the whole computation stays in ℤ.
pub fn faddeev_leverrier(a: &IntMatrix) -> IntPoly {
    assert!(a.is_square(), "characteristic polynomial of a non-square matrix");
    let n = a.rows();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::from(1);
    if n == 0 {
        return IntPoly::new(coeffs);
    }
    let small = a.to_i64();
    let mut m = IntMatrix::identity(n);
    for k in 1..=n {
        let am = match &small {
            Some(entries) => mul_small_left(entries, &m, n),
            None => a.mul(&m).expect("square operands"),
        };
        let trace = am.trace();
        let c = -(trace / BigInt::from(k));
        if k < n {
            m = am;
            for i in 0..n {
                let d = m.get(i, i) + &c;
                m.set(i, i, d);
            }
        }
        coeffs[n - k] = c;
    }
    IntPoly::new(coeffs)
}

/// A·M where A has machine-integer entries. Unit entries become in-place
/// additions, which dominates for sign and 0/1 matrices.
fn mul_small_left(a: &[i64], m: &IntMatrix, n: usize) -> IntMatrix {
    let mut out = IntMatrix::zeros(n, n);
    let mut row_acc: Vec<BigInt> = vec![BigInt::zero(); n];
    for i in 0..n {
        for acc in row_acc.iter_mut() {
            acc.set_zero();
        }
        for k in 0..n {
            let coef = a[i * n + k];
            if coef == 0 {
                continue;
            }
            let mrow = m.row(k);
            match coef {
                1 => row_acc.iter_mut().zip(mrow).for_each(|(acc, x)| *acc += x),
                -1 => row_acc.iter_mut().zip(mrow).for_each(|(acc, x)| *acc -= x),
                c => row_acc
                    .iter_mut()
                    .zip(mrow)
                    .for_each(|(acc, x)| *acc += x * c),
            }
        }
        for (j, acc) in row_acc.iter_mut().enumerate() {
            out.set(i, j, std::mem::take(acc));
        }
    }
    out
}

/// Bit length of the largest coefficient, reported alongside the polynomial.
pub fn coefficient_bits(p: &IntPoly) -> u64 {
    p.coefficients().iter().map(BigInt::bits).max().unwrap_or(0)
}

/// Convenience for diagnostics on small polynomials.
pub fn coefficients_f64(p: &IntPoly) -> Vec<f64> {
    p.coefficients()
        .iter()
        .map(|c| c.to_f64().unwrap_or(f64::NAN))
        .collect()
}
