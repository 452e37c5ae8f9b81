use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{bareiss_determinant, faddeev_leverrier, IntMatrix, IntPoly};

/// Largest dimension accepted by the exact characteristic-polynomial path.
pub const CHARPOLY_MAX_N: usize = 128;

/// Monic integer characteristic polynomial det(xI − A), coefficients low to high.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharPoly {
    poly: IntPoly,
}

impl CharPoly {
    pub fn coefficients(&self) -> &[BigInt] {
        self.poly.coefficients()
    }

    pub fn degree(&self) -> usize {
        self.poly.degree().unwrap_or(0)
    }

    pub fn as_poly(&self) -> &IntPoly {
        &self.poly
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.poly.eval(x)
    }

    pub fn to_record(&self) -> CharPolyRecord {
        CharPolyRecord {
            degree: self.degree(),
            coefficients: self.coefficients().iter().map(BigInt::to_string).collect(),
        }
    }
}

impl std::fmt::Display for CharPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.poly.fmt(f)
    }
}

/// Coefficients as decimal strings, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharPolyRecord {
    pub degree: usize,
    pub coefficients: Vec<String>,
}

impl TryFrom<CharPolyRecord> for CharPoly {
    type Error = Error;

    fn try_from(r: CharPolyRecord) -> Result<Self> {
        let coeffs = r
            .coefficients
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(|e| Error::Parse(format!("coefficient {s:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        let poly = IntPoly::new(coeffs);
        if !poly.is_monic() || poly.degree() != Some(r.degree) {
            return Err(Error::Parse("characteristic polynomial must be monic of the stated degree".into()));
        }
        Ok(CharPoly { poly })
    }
}

fn check_dimension(a: &IntMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::domain("characteristic polynomial needs a square matrix"));
    }
    if a.rows() > CHARPOLY_MAX_N {
        return Err(Error::config(format!(
            "exact characteristic polynomial is capped at n = {CHARPOLY_MAX_N}, got {}",
            a.rows()
        )));
    }
    Ok(())
}

/// Exact characteristic polynomial, cross-checked at x = 0 against a
/// fraction-free determinant.
pub fn charpoly_exact(a: &IntMatrix) -> Result<CharPoly> {
    check_dimension(a)?;
    let poly = faddeev_leverrier(a);
    let mut det = bareiss_determinant(a)?;
    if a.rows() % 2 == 1 {
        det = -det;
    }
    if poly.eval(&BigInt::from(0)) != det {
        return Err(Error::Numerical {
            message: "characteristic polynomial disagrees with the exact determinant".into(),
            worst_residual: f64::INFINITY,
        });
    }
    Ok(CharPoly { poly })
}

/// True iff all eigenvalues are distinct, decided by gcd(p, p′) over ℚ.
pub fn simple_spectrum_exact(a: &IntMatrix) -> Result<bool> {
    let p = charpoly_exact(a)?;
    Ok(is_squarefree(p.as_poly()))
}

pub fn is_squarefree(p: &IntPoly) -> bool {
    p.gcd(&p.derivative()).degree().unwrap_or(0) == 0
}
