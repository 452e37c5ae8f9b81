use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Univariate polynomial over ℤ, coefficients stored lowest degree first.
///
/// The zero polynomial has an empty coefficient list and degree `None`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coefficients(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    /// Horner evaluation at an integer point.
    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// gcd of the coefficients, nonnegative.
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.leading().is_some_and(Signed::is_negative) {
            c = -c;
        }
        Self::new(self.coeffs.iter().map(|x| x / &c).collect())
    }

    /// Pseudo-remainder of `self` by `divisor`: lc(divisor)^k · self mod divisor
    /// for some k ≥ 0, computed without leaving ℤ.
    pub fn pseudo_remainder(&self, divisor: &IntPoly) -> IntPoly {
        let dd = divisor.degree().expect("pseudo-remainder by the zero polynomial");
        let lc = divisor.leading().unwrap();
        let mut r = self.coeffs.clone();
        while r.len() > dd && !r.is_empty() {
            let top = r.len() - 1;
            let lead = r[top].clone();
            let shift = top - dd;
            for c in r.iter_mut() {
                *c *= lc;
            }
            for (k, d) in divisor.coeffs.iter().enumerate() {
                r[shift + k] -= &lead * d;
            }
            debug_assert!(r[top].is_zero());
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        IntPoly::new(r)
    }

    /// Greatest common divisor over ℚ, returned as a primitive integer polynomial
    /// with positive leading coefficient. Uses the primitive pseudo-remainder sequence.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let (mut a, mut b) = if self.degree() >= other.degree() {
            (self.primitive_part(), other.primitive_part())
        } else {
            (other.primitive_part(), self.primitive_part())
        };
        while !b.is_zero() {
            let r = a.pseudo_remainder(&b);
            a = b;
            b = r.primitive_part();
        }
        a.primitive_part()
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            let show_mag = !mag.is_one() || k == 0;
            if show_mag {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_detects_repeated_roots() {
        // (x-1)^2 (x+2)
        let p = IntPoly::from_i64(&[2, -3, 0, 1]);
        let g = p.gcd(&p.derivative());
        assert_eq!(g, IntPoly::from_i64(&[-1, 1]));
        // x^2 - 1 is squarefree
        let q = IntPoly::from_i64(&[-1, 0, 1]);
        assert_eq!(q.gcd(&q.derivative()).degree(), Some(0));
    }

    #[test]
    fn gcd_of_nonmonic_inputs() {
        // (2x+1)(x-3) and (2x+1)(x+5)
        let a = IntPoly::from_i64(&[-3, -5, 2]);
        let b = IntPoly::from_i64(&[5, 11, 2]);
        assert_eq!(a.gcd(&b), IntPoly::from_i64(&[1, 2]));
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(IntPoly::from_i64(&[1, -2, 1]).to_string(), "x^2 - 2x + 1");
        assert_eq!(IntPoly::from_i64(&[-2, 0, 0, 1]).to_string(), "x^3 - 2");
        assert_eq!(IntPoly::default().to_string(), "0");
    }

    #[test]
    fn eval_and_derivative() {
        let p = IntPoly::from_i64(&[-2, 0, 0, 1]);
        assert_eq!(p.eval(&BigInt::from(2)), BigInt::from(6));
        assert_eq!(p.derivative(), IntPoly::from_i64(&[0, 0, 3]));
    }
}
