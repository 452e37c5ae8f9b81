//! Sampling matrices: iid atoms, zero diagonals, shifts and digraphs.
//!
//!     cargo run --example sample_ensembles

use nalgebra::Complex;
use rmt_lab::ensembles::{
    assumption_params, event_ek, operator_norm, sample_digraph_adjacency, sample_matrix,
    AtomDistribution, EnsembleSpec,
};

fn main() -> rmt_lab::Result<()> {
    let n = 6;
    let seed = 2024;

    let signs = EnsembleSpec::iid(n, AtomDistribution::rademacher());
    let a = sample_matrix(&signs, seed)?;
    println!("Rademacher, n = {n}:\n{a}");
    // Same seed, same matrix, regardless of where or how often it is drawn.
    assert_eq!(a, sample_matrix(&signs, seed)?);

    let hollow = EnsembleSpec::iid(n, AtomDistribution::gaussian(1.0)?).with_zero_diagonal();
    let g = sample_matrix(&hollow, seed)?;
    println!("Gaussian with zero diagonal, trace = {:.3e}", g.trace());

    // N − λ√n·I for a real λ stays real.
    let shifted = EnsembleSpec::iid(n, AtomDistribution::rademacher()).with_shift(Complex::new(0.5, 0.0));
    println!("trace after shift = {}", sample_matrix(&shifted, seed)?.trace());

    for atom in [
        AtomDistribution::rademacher(),
        AtomDistribution::uniform_pm(1.0)?,
        AtomDistribution::gaussian(1.0)?,
        AtomDistribution::centered_bernoulli(0.3)?,
    ] {
        let p = assumption_params(&atom);
        println!(
            "{:>20}: q = {:.4}, T = {:.4}, satisfied = {}",
            atom.name(),
            p.q,
            p.t,
            p.satisfied
        );
    }

    let k = 4.0;
    let big = sample_matrix(&EnsembleSpec::iid(200, AtomDistribution::rademacher()), seed)?;
    println!(
        "n = 200: ||N|| / sqrt(n) = {:.3}; operator norm within {k} sqrt(n): {}",
        operator_norm(&big) / 200f64.sqrt(),
        event_ek(&big, k, None)?
    );

    let adj = sample_digraph_adjacency(8, 0.5, false, seed)?;
    println!("digraph adjacency, p = 1/2, no loops:\n{adj}");
    Ok(())
}
