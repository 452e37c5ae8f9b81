//! Eigendecomposition with residual checks, eigenvalue gaps and the exact
//! simple-spectrum decision for integer matrices.

mod charpoly;
mod eigen;
mod gaps;

pub use charpoly::{
    charpoly_exact, is_squarefree, simple_spectrum_exact, CharPoly, CharPolyRecord, CHARPOLY_MAX_N,
};
pub use eigen::{
    eigen_decompose, eigenvalues, normalize_phase, right_eigenpairs, SpectralData, SpectralRecord,
    C64, DEFAULT_TOL, PAIRING_COLLISION,
};
pub use gaps::{gap_distribution, gap_distribution_of, min_gap, min_gap_of, GapCdf, GapStats};
