mod common;

use nalgebra::DMatrix;
use proptest::prelude::*;
use rmt_lab::ensembles::sample_digraph_adjacency;
use rmt_lab::graph::{
    centered_adjacency, outlier_check, perron_check_matrix, scc_labels, strongly_connected,
};

use common::cfg;

fn adjacency(n: std::ops::RangeInclusive<usize>, density: f64) -> impl Strategy<Value = DMatrix<f64>> {
    n.prop_flat_map(move |n| {
        proptest::collection::vec(proptest::bool::weighted(density), n * n)
            .prop_map(move |v| DMatrix::from_iterator(n, n, v.into_iter().map(|e| if e { 1.0 } else { 0.0 })))
    })
}

/// Reachability by Floyd–Warshall closure.
fn closure(adj: &DMatrix<f64>) -> Vec<Vec<bool>> {
    let n = adj.nrows();
    let mut r: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i == j || adj[(i, j)] != 0.0).collect()).collect();
    for k in 0..n {
        for i in 0..n {
            if r[i][k] {
                for j in 0..n {
                    if r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
    }
    r
}

fn permute(adj: &DMatrix<f64>, perm: &[usize]) -> DMatrix<f64> {
    let n = adj.nrows();
    DMatrix::from_fn(n, n, |i, j| adj[(perm[i], perm[j])])
}

proptest! {
    #![proptest_config(cfg(200))]

    #[test]
    fn components_match_mutual_reachability(adj in adjacency(1..=25, 0.12)) {
        let reach = closure(&adj);
        let (labels, count) = scc_labels(&adj).unwrap();
        let n = adj.nrows();
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(labels[i] == labels[j], reach[i][j] && reach[j][i]);
            }
        }
        let mut distinct = labels.clone();
        distinct.sort_unstable();
        distinct.dedup();
        prop_assert_eq!(distinct.len(), count);
        prop_assert_eq!(strongly_connected(&adj).unwrap().0, count == 1);
    }
}

proptest! {
    #![proptest_config(cfg(40))]

    #[test]
    fn perron_report_is_permutation_invariant(seed in any::<u64>(), shift in 1usize..40) {
        let adj = sample_digraph_adjacency(40, 0.5, false, seed).unwrap();
        let perm: Vec<usize> = (0..40).map(|i| (i * 7 + shift) % 40).collect();
        let a = perron_check_matrix(&adj).unwrap();
        let b = perron_check_matrix(&permute(&adj, &perm)).unwrap();
        prop_assert!((a.top_eigenvalue[0] - b.top_eigenvalue[0]).abs() <= 1e-9 * a.top_eigenvalue[0].abs());
        prop_assert_eq!(a.holds(), b.holds());
        prop_assert!((a.top_eigenvector_min_entry - b.top_eigenvector_min_entry).abs() <= 1e-9);
    }
}

#[test]
fn perron_on_small_graphs() {
    let cycle = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
    let r = perron_check_matrix(&cycle).unwrap();
    assert!(r.top_eigenvalue_is_real);
    assert!(!r.top_is_simple);
    assert!(r.top_eigenvector_min_entry > 0.0);

    let complete = DMatrix::from_fn(5, 5, |i, j| if i == j { 0.0 } else { 1.0 });
    let r = perron_check_matrix(&complete).unwrap();
    assert!((r.top_eigenvalue[0] - 4.0).abs() < 1e-12 && r.holds());
}

#[test]
fn outlier_sits_near_pn() {
    for seed in 0..5 {
        let adj = sample_digraph_adjacency(200, 0.5, false, seed).unwrap();
        let r = outlier_check(&adj, 0.5, 0.2).unwrap();
        assert_eq!(r.outside_count, 1);
        assert!(r.distance_to_pn.unwrap() <= 3.0 * 200f64.sqrt());
        // Removing the mean leaves nothing outside the disk.
        let centered = centered_adjacency(&adj, 0.5, false).unwrap();
        let values = rmt_lab::spectral::eigenvalues(&centered).unwrap();
        let radius = 1.2 * 200f64.sqrt();
        assert!(values.iter().all(|z| z.norm() <= radius));
    }
}

#[test]
fn sparse_graphs_split_into_components() {
    let adj = sample_digraph_adjacency(300, 0.002, false, 1).unwrap();
    let (connected, count) = strongly_connected(&adj).unwrap();
    assert!(!connected && count > 100);
}

#[test]
fn rejects_non_adjacency_input() {
    let bad = DMatrix::from_row_slice(2, 2, &[0.0, 2.0, 1.0, 0.0]);
    assert!(scc_labels(&bad).is_err());
    let rect = DMatrix::<f64>::zeros(2, 3);
    assert!(strongly_connected(&rect).is_err());
}
