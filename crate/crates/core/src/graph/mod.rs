//! Directed graph checks: strong connectivity, the Perron eigenpair, the
//! outlier eigenvalue near pn, and centering of adjacency matrices.

mod scc;
mod spectrum;

pub use scc::{scc_labels, strongly_connected, validate_adjacency};
pub use spectrum::{
    centered_adjacency, centered_adjacency_exact, digraph_report, outlier_check,
    outlier_from_eigenvalues, perron_check, perron_check_matrix, top_index, DigraphReport,
    OutlierReport, PerronReport, POSITIVE_TOL, REAL_TOL, SIMPLE_GAP,
};
