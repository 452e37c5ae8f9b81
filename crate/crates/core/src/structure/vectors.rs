use nalgebra::{Complex, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CVector = DVector<Complex<f64>>;

/// Distance from a vector to the set of ⌈an⌉-sparse vectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompressibilityReport {
    pub a: f64,
    pub b: f64,
    /// ⌈an⌉, the number of coordinates the nearest sparse vector keeps.
    pub kept: usize,
    pub tail_norm: f64,
    pub compressible: bool,
}

/// ⌈an⌉, treating products within 1e-9 of an integer as that integer so that
/// a = 0.25, n = 20 keeps exactly 5.
pub fn sparsity_count(a: f64, n: usize) -> usize {
    let x = a * n as f64;
    let k = if (x - x.round()).abs() < 1e-9 {
        x.round()
    } else {
        x.ceil()
    };
    (k.max(0.0) as usize).min(n)
}

pub fn compressibility(v: &CVector, a: f64, b: f64) -> Result<CompressibilityReport> {
    if v.is_empty() {
        return Err(Error::domain("compressibility of an empty vector"));
    }
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::domain(format!("sparsity fraction must lie in (0,1), got {a}")));
    }
    if !(b > 0.0) {
        return Err(Error::domain(format!("distance threshold must be positive, got {b}")));
    }
    let kept = sparsity_count(a, v.len());
    let mut mags: Vec<f64> = v.iter().map(|z| z.norm_sqr()).collect();
    mags.sort_by(|x, y| y.total_cmp(x));
    // Sum the small end first for accuracy.
    let tail_norm = mags[kept..].iter().rev().sum::<f64>().sqrt();
    Ok(CompressibilityReport {
        a,
        b,
        kept,
        tail_norm,
        compressible: tail_norm <= b,
    })
}

/// Values of d(z) below this are treated as round-off and clamped to zero.
pub const CORRELATION_CLAMP: f64 = 1e-9;

/// √(‖x‖²‖y‖² − (x·y)²) for z = x + iy.
pub fn real_imag_correlation(z: &CVector) -> Result<f64> {
    if z.iter().all(|c| *c == Complex::new(0.0, 0.0)) {
        return Err(Error::domain("real-imaginary correlation of the zero vector"));
    }
    let (mut xx, mut yy, mut xy) = (0.0, 0.0, 0.0);
    for c in z.iter() {
        xx += c.re * c.re;
        yy += c.im * c.im;
        xy += c.re * c.im;
    }
    let gram = xx * yy - xy * xy;
    if gram < -CORRELATION_CLAMP {
        return Err(Error::Numerical {
            message: "negative Gram determinant in real-imaginary correlation".into(),
            worst_residual: -gram,
        });
    }
    Ok(gram.max(0.0).sqrt())
}

/// Number of coordinates with modulus outside [1/B, B].
pub fn delocalized_check(b: &CVector, bound: f64) -> Result<usize> {
    if !(bound >= 1.0) {
        return Err(Error::domain(format!("delocalization bound must be >= 1, got {bound}")));
    }
    let lo = 1.0 / bound;
    Ok(b.iter()
        .filter(|c| {
            let m = c.norm();
            !(lo..=bound).contains(&m)
        })
        .count())
}

/// Coordinatewise product.
pub fn hadamard(b: &CVector, v: &CVector) -> Result<CVector> {
    if b.len() != v.len() {
        return Err(Error::domain(format!(
            "Hadamard product of lengths {} and {}",
            b.len(),
            v.len()
        )));
    }
    Ok(b.component_mul(v))
}

/// Lifts a real vector to a complex one.
pub fn complexify(v: &DVector<f64>) -> CVector {
    v.map(|x| Complex::new(x, 0.0))
}
