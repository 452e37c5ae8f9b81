//! Random ensembles: atom laws, iid and shifted iid matrices, directed
//! Erdős–Rényi adjacency matrices, the (q, T) assumption parameters and the
//! operator-norm event.

mod assumption;
mod atom;
mod block;
mod sample;

use nalgebra::{Complex, DMatrix};

pub use assumption::{assumption_params, AssumptionParams, ExactLaw};
pub use atom::{AtomDistribution, AtomKind};
pub use block::{EnsembleBlock, GraphBlock};
pub use sample::{
    sample_digraph_adjacency, sample_iid_matrix, sample_integer_matrix, sample_matrix, Diagonal,
    EnsembleKind, EnsembleSpec, SampledMatrix,
};

use crate::error::{Error, Result};

pub const EVENT_SLACK: f64 = 1e-12;

/// Largest singular value.
pub fn operator_norm(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.max()
}

pub fn operator_norm_complex(m: &DMatrix<Complex<f64>>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.max()
}

/// The event ‖M − centered‖ ≤ K√n, with `centered` defaulting to zero.
///
/// The comparison allows a relative slack of [`EVENT_SLACK`] so that cases on
/// the boundary (rank-one matrices with exact norms) are not decided by SVD
/// round-off.
pub fn event_ek(m: &DMatrix<f64>, k: f64, centered: Option<&DMatrix<f64>>) -> Result<bool> {
    if !(k > 0.0) {
        return Err(Error::domain(format!("K must be positive, got {k}")));
    }
    if !m.is_square() {
        return Err(Error::domain("event_ek needs a square matrix"));
    }
    let n = m.nrows() as f64;
    let norm = match centered {
        None => operator_norm(m),
        Some(c) => {
            if c.shape() != m.shape() {
                return Err(Error::domain(format!(
                    "centering matrix is {:?}, expected {:?}",
                    c.shape(),
                    m.shape()
                )));
            }
            operator_norm(&(m - c))
        }
    };
    Ok(norm <= k * n.sqrt() * (1.0 + EVENT_SLACK))
}
