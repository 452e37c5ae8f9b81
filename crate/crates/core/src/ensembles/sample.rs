use nalgebra::{Complex, DMatrix};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::atom::AtomDistribution;
use crate::error::{Error, Result};
use crate::exact::IntMatrix;
use crate::seed::{entry_rng, Stream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Diagonal {
    #[default]
    Iid,
    Zero,
}

/// Which random object a spec describes. Exactly one is active by construction.
#[derive(Debug, Clone, PartialEq)]
pub enum EnsembleKind {
    /// Entries iid copies of `atom`; the matrix is N − λ√n·I when `shift` is set.
    Iid {
        atom: AtomDistribution,
        diagonal: Diagonal,
        shift: Option<Complex<f64>>,
    },
    /// Adjacency matrix of a directed Erdős–Rényi graph.
    Digraph { p: f64, loops: bool },
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSpec {
    pub n: usize,
    pub kind: EnsembleKind,
}

impl EnsembleSpec {
    pub fn iid(n: usize, atom: AtomDistribution) -> Self {
        EnsembleSpec {
            n,
            kind: EnsembleKind::Iid {
                atom,
                diagonal: Diagonal::Iid,
                shift: None,
            },
        }
    }

    pub fn digraph(n: usize, p: f64, loops: bool) -> Self {
        EnsembleSpec {
            n,
            kind: EnsembleKind::Digraph { p, loops },
        }
    }

    pub fn with_zero_diagonal(mut self) -> Self {
        if let EnsembleKind::Iid { diagonal, .. } = &mut self.kind {
            *diagonal = Diagonal::Zero;
        }
        self
    }

    pub fn with_shift(mut self, lambda: Complex<f64>) -> Self {
        if let EnsembleKind::Iid { shift, .. } = &mut self.kind {
            *shift = Some(lambda);
        }
        self
    }

    pub fn is_digraph(&self) -> bool {
        matches!(self.kind, EnsembleKind::Digraph { .. })
    }

    /// Whether every sample of this ensemble is an integer matrix.
    pub fn is_integer_valued(&self) -> bool {
        match &self.kind {
            EnsembleKind::Digraph { .. } => true,
            EnsembleKind::Iid { atom, shift, .. } => {
                atom.is_integer_valued()
                    && shift.is_none_or(|s| {
                        let d = s * (self.n as f64).sqrt();
                        d.re.fract() == 0.0 && d.im == 0.0
                    })
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::domain("matrix dimension must be at least 1"));
        }
        match &self.kind {
            EnsembleKind::Digraph { p, .. } if !(*p > 0.0 && *p < 1.0) => Err(Error::domain(
                format!("edge probability must lie in (0,1), got {p}"),
            )),
            EnsembleKind::Iid {
                shift: Some(s), ..
            } if !(s.re.is_finite() && s.im.is_finite()) => {
                Err(Error::domain("shift must be finite"))
            }
            _ => Ok(()),
        }
    }
}

/// A sampled square matrix; complex only when the shift has an imaginary part.
#[derive(Debug, Clone, PartialEq)]
pub enum SampledMatrix {
    Real(DMatrix<f64>),
    Complex(DMatrix<Complex<f64>>),
}

impl SampledMatrix {
    pub fn into_real(self) -> Result<DMatrix<f64>> {
        match self {
            SampledMatrix::Real(m) => Ok(m),
            SampledMatrix::Complex(_) => Err(Error::config(
                "operation needs a real matrix but the ensemble has a complex shift",
            )),
        }
    }

    pub fn as_real(&self) -> Option<&DMatrix<f64>> {
        match self {
            SampledMatrix::Real(m) => Some(m),
            SampledMatrix::Complex(_) => None,
        }
    }

    pub fn to_complex(&self) -> DMatrix<Complex<f64>> {
        match self {
            SampledMatrix::Real(m) => m.map(|x| Complex::new(x, 0.0)),
            SampledMatrix::Complex(m) => m.clone(),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            SampledMatrix::Real(m) => m.nrows(),
            SampledMatrix::Complex(m) => m.nrows(),
        }
    }
}

/// Samples N (or N − λ√n·I) with entries keyed by (seed, row, column).
pub fn sample_iid_matrix(spec: &EnsembleSpec, seed: u64) -> Result<SampledMatrix> {
    spec.validate()?;
    let EnsembleKind::Iid {
        atom,
        diagonal,
        shift,
    } = &spec.kind
    else {
        return Err(Error::config(
            "sample_iid_matrix needs an atom ensemble, not a digraph ensemble",
        ));
    };
    let n = spec.n;
    let mut m = DMatrix::from_fn(n, n, |i, j| {
        if i == j && *diagonal == Diagonal::Zero {
            0.0
        } else {
            atom.sample(&mut entry_rng(seed, Stream::IidEntry, i, j))
        }
    });
    match shift {
        None => Ok(SampledMatrix::Real(m)),
        Some(lambda) => {
            // √n is taken in floating point.
            let d = lambda * (n as f64).sqrt();
            if d.im == 0.0 {
                for i in 0..n {
                    m[(i, i)] -= d.re;
                }
                Ok(SampledMatrix::Real(m))
            } else {
                let mut c = m.map(|x| Complex::new(x, 0.0));
                for i in 0..n {
                    c[(i, i)] -= d;
                }
                Ok(SampledMatrix::Complex(c))
            }
        }
    }
}

/// 0/1 adjacency matrix of a directed Erdős–Rényi graph; entry (i, j) is the edge i → j.
pub fn sample_digraph_adjacency(n: usize, p: f64, loops: bool, seed: u64) -> Result<DMatrix<f64>> {
    EnsembleSpec::digraph(n, p, loops).validate()?;
    Ok(DMatrix::from_fn(n, n, |i, j| {
        if i == j && !loops {
            return 0.0;
        }
        let u: f64 = entry_rng(seed, Stream::GraphEntry, i, j).random();
        if u < p {
            1.0
        } else {
            0.0
        }
    }))
}

/// Samples whichever ensemble the spec names as a real matrix.
pub fn sample_matrix(spec: &EnsembleSpec, seed: u64) -> Result<DMatrix<f64>> {
    match &spec.kind {
        EnsembleKind::Digraph { p, loops } => sample_digraph_adjacency(spec.n, *p, *loops, seed),
        EnsembleKind::Iid { .. } => sample_iid_matrix(spec, seed)?.into_real(),
    }
}

/// Samples an integer-valued ensemble as an exact integer matrix.
pub fn sample_integer_matrix(spec: &EnsembleSpec, seed: u64) -> Result<IntMatrix> {
    if !spec.is_integer_valued() {
        return Err(Error::config(format!(
            "ensemble with atom {} is not integer valued",
            describe(spec)
        )));
    }
    let m = sample_matrix(spec, seed)?;
    IntMatrix::from_f64(&m).ok_or_else(|| Error::config("sampled entries are not exact integers"))
}

fn describe(spec: &EnsembleSpec) -> String {
    match &spec.kind {
        EnsembleKind::Iid { atom, .. } => atom.name().to_string(),
        EnsembleKind::Digraph { .. } => "digraph".to_string(),
    }
}
