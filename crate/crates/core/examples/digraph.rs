//! Random directed graphs: strong connectivity, the Perron eigenpair and the
//! outlier eigenvalue near p·n.
//!
//!     cargo run --release --example digraph

use rmt_lab::ensembles::sample_digraph_adjacency;
use rmt_lab::experiments::scatter_csv;
use rmt_lab::graph::{digraph_report, scc_labels};
use rmt_lab::spectral::eigenvalues;

fn main() -> rmt_lab::Result<()> {
    let (n, p) = (150, 0.5);
    let adj = sample_digraph_adjacency(n, p, false, 42)?;
    let report = digraph_report(&adj, p, 0.2)?;
    println!("strongly connected: {} ({} components)", report.strongly_connected, report.scc_count);
    println!(
        "top eigenvalue {:?}: real {}, simple {}, eigenvector min entry {:.4}",
        report.perron.top_eigenvalue,
        report.perron.top_eigenvalue_is_real,
        report.perron.top_is_simple,
        report.perron.top_eigenvector_min_entry
    );
    println!(
        "{} eigenvalue(s) outside radius {:.2}; distance to pn = {:?}",
        report.outlier.outside_count, report.outlier.radius, report.outlier.distance_to_pn
    );

    let scatter = scatter_csv(&eigenvalues(&adj)?);
    let outside = scatter
        .lines()
        .skip(1)
        .filter(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap() > 1.2)
        .count();
    println!("scatter rows beyond radius 1.2 after scaling: {outside}");

    let sparse = sample_digraph_adjacency(300, 0.01, false, 42)?;
    let (_, count) = scc_labels(&sparse)?;
    println!("p = 0.01, n = 300: {count} strongly connected components");
    Ok(())
}
