//! Eigendecomposition with residual checks, eigenvalue gaps and the exact
//! simple-spectrum test.
//!
//!     cargo run --release --example spectrum

use rmt_lab::ensembles::{sample_integer_matrix, sample_matrix, AtomDistribution, EnsembleSpec};
use rmt_lab::exact::IntMatrix;
use rmt_lab::experiments::scatter_csv;
use rmt_lab::spectral::{
    charpoly_exact, eigen_decompose, gap_distribution, min_gap, simple_spectrum_exact, DEFAULT_TOL,
};

fn main() -> rmt_lab::Result<()> {
    let spec = EnsembleSpec::iid(60, AtomDistribution::gaussian(1.0)?);
    let a = sample_matrix(&spec, 7)?;
    let eig = eigen_decompose(&a, DEFAULT_TOL)?;
    println!(
        "n = {}, ||A|| = {:.3}, worst relative residual = {:.2e}",
        eig.n(),
        eig.norm,
        eig.worst_residual()
    );
    let gap = min_gap(&eig)?;
    println!(
        "smallest gap {:.4e} between eigenvalues {} and {}",
        gap.delta, gap.argmin_pair.0, gap.argmin_pair.1
    );

    let scatter = scatter_csv(&eig.eigenvalues);
    let head: Vec<&str> = scatter.lines().take(4).collect();
    println!("scatter (first rows):\n{}", head.join("\n"));

    // Gap distribution over a handful of samples.
    let gaps = (0..20)
        .map(|s| min_gap(&eigen_decompose(&sample_matrix(&spec, s)?, DEFAULT_TOL)?))
        .collect::<rmt_lab::Result<Vec<_>>>()?;
    let cdf = gap_distribution(&gaps)?;
    println!("P(normalized gap <= 0.05) ~ {:.2}", cdf.at(0.05));

    // Exact path: integer matrices only.
    let signs = EnsembleSpec::iid(12, AtomDistribution::rademacher());
    let m = sample_integer_matrix(&signs, 3)?;
    let p = charpoly_exact(&m)?;
    println!("charpoly of a 12x12 sign matrix: {p}");
    println!("simple spectrum: {}", simple_spectrum_exact(&m)?);

    let repeated = IntMatrix::identity(3);
    println!("identity has a simple spectrum: {}", simple_spectrum_exact(&repeated)?);
    Ok(())
}
