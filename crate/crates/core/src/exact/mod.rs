//! Exact integer linear algebra: dense integer matrices, fraction-free
//! elimination, integer polynomials and the characteristic polynomial.

mod charpoly;
mod matrix;
mod poly;

pub use charpoly::{coefficient_bits, coefficients_f64, faddeev_leverrier};
pub use matrix::{
    bareiss_determinant, bareiss_rank, max_abs, rational_to_integer_rows, IntMatrix,
    IntMatrixRecord,
};
pub use poly::IntPoly;
