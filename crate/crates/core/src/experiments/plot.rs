//! Plain CSV tables for external plotting tools.

use nalgebra::Complex;

use crate::spectral::GapCdf;

/// Eigenvalues divided by √n, one `re,im,radius` row each.
pub fn scatter_csv(eigenvalues: &[Complex<f64>]) -> String {
    let scale = (eigenvalues.len() as f64).sqrt();
    let mut out = String::from("re,im,radius\n");
    for z in eigenvalues {
        let w = z / scale;
        out.push_str(&format!("{},{},{}\n", w.re, w.im, w.norm()));
    }
    out
}

/// Empirical CDF rows `s,fraction`, nondecreasing in both columns.
pub fn gap_cdf_csv(cdf: &GapCdf) -> String {
    let mut out = String::from("s,fraction\n");
    for (s, f) in &cdf.rows {
        out.push_str(&format!("{s},{f}\n"));
    }
    out
}
