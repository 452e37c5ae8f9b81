use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{IntMatrix, IntMatrixRecord};
use crate::seed::{stream_rng, Stream};

/// An integer pair (A, b) with a left eigenvector w orthogonal to b.
#[derive(Debug, Clone, PartialEq)]
pub struct UncontrollablePair {
    pub a: IntMatrix,
    pub b: Vec<BigInt>,
    /// wᵀA = λ wᵀ and wᵀb = 0, both exactly.
    pub certificate: Vec<BigInt>,
    pub eigenvalue: BigInt,
}

impl UncontrollablePair {
    pub fn a_f64(&self) -> DMatrix<f64> {
        self.a.to_f64()
    }

    pub fn b_f64(&self) -> DVector<f64> {
        DVector::from_iterator(self.b.len(), self.b.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)))
    }

    /// Re-checks wᵀA = λwᵀ, wᵀb = 0 and w ≠ 0 in exact arithmetic.
    pub fn verify(&self) -> bool {
        let n = self.a.rows();
        let w = &self.certificate;
        if w.iter().all(Zero::is_zero) {
            return false;
        }
        let wa = self.a.transpose().mul_vec(w).expect("square");
        let eig_ok = (0..n).all(|j| wa[j] == &self.eigenvalue * &w[j]);
        let orth: BigInt = w.iter().zip(&self.b).map(|(x, y)| x * y).sum();
        eig_ok && orth.is_zero()
    }

    pub fn to_record(&self) -> UncontrollableRecord {
        let s = |v: &[BigInt]| v.iter().map(ToString::to_string).collect();
        UncontrollableRecord {
            a: IntMatrixRecord::from(&self.a),
            b: s(&self.b),
            certificate: s(&self.certificate),
            eigenvalue: self.eigenvalue.to_string(),
        }
    }
}

fn small<R: Rng>(rng: &mut R) -> BigInt {
    BigInt::from(rng.random_range(-3i64..=3))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UncontrollableRecord {
    pub a: IntMatrixRecord,
    pub b: Vec<String>,
    pub certificate: Vec<String>,
    pub eigenvalue: String,
}

/// Builds A = P⁻¹TP with T block upper triangular (last row λe_nᵀ) and P a
/// product of integer shears, so both P and P⁻¹ are integer. Then w = Pᵀe_n
/// is an integer left eigenvector, and b is a random integer vector projected
/// to wᵀb = 0 by b ← (w·w)b − (w·b)w.
pub fn construct_uncontrollable(n: usize, seed: u64) -> Result<UncontrollablePair> {
    if n < 2 {
        return Err(Error::domain(format!("uncontrollable construction needs n >= 2, got {n}")));
    }
    let mut rng = stream_rng(seed, Stream::Auxiliary);

    let mut t = IntMatrix::zeros(n, n);
    for i in 0..n - 1 {
        for j in 0..n {
            t.set(i, j, small(&mut rng));
        }
    }
    let lambda = small(&mut rng);
    t.set(n - 1, n - 1, lambda.clone());

    let mut p = IntMatrix::identity(n);
    let mut p_inv = IntMatrix::identity(n);
    for _ in 0..2 * n {
        let i = rng.random_range(0..n);
        let mut j = rng.random_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = if rng.random::<bool>() { 1i64 } else { -1 };
        // P ← E P adds c·row j to row i; P⁻¹ ← P⁻¹ E⁻¹ subtracts c·column i from column j.
        for k in 0..n {
            let v = p.get(i, k) + p.get(j, k) * c;
            p.set(i, k, v);
            let w = p_inv.get(k, j) - p_inv.get(k, i) * c;
            p_inv.set(k, j, w);
        }
    }
    debug_assert_eq!(p.mul(&p_inv).expect("square"), IntMatrix::identity(n));
    let a = p_inv.mul(&t)?.mul(&p)?;
    let w: Vec<BigInt> = p.row(n - 1).to_vec();
    let ww: BigInt = w.iter().map(|x| x * x).sum();

    let b = loop {
        let raw: Vec<BigInt> = (0..n).map(|_| small(&mut rng)).collect();
        let wb: BigInt = w.iter().zip(&raw).map(|(x, y)| x * y).sum();
        let b: Vec<BigInt> = raw.iter().zip(&w).map(|(r, wi)| &ww * r - &wb * wi).collect();
        if b.iter().any(|x| !x.is_zero()) {
            break b;
        }
    };
    let pair = UncontrollablePair {
        a,
        b,
        certificate: w,
        eigenvalue: lambda,
    };
    debug_assert!(pair.verify());
    Ok(pair)
}
