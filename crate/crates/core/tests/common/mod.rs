#![allow(dead_code)]

use nalgebra::{Complex, DMatrix, DVector};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

/// Deterministic proptest settings: a fixed seed and no failure files.
pub fn cfg(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(0x5eed_2024),
        failure_persistence: None,
        ..Config::default()
    }
}

pub fn int_matrix(n: std::ops::RangeInclusive<usize>, bound: i64) -> impl Strategy<Value = DMatrix<f64>> {
    n.prop_flat_map(move |n| {
        proptest::collection::vec(-bound..=bound, n * n)
            .prop_map(move |v| DMatrix::from_iterator(n, n, v.into_iter().map(|x| x as f64)))
    })
}

pub fn float_matrix(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = DMatrix<f64>> {
    n.prop_flat_map(|n| {
        proptest::collection::vec(-1.0f64..1.0, n * n).prop_map(move |v| DMatrix::from_vec(n, n, v))
    })
}

/// Random complex vector of unit norm (rejects near-zero draws).
pub fn unit_complex(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = DVector<Complex<f64>>> {
    n.prop_flat_map(|n| proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n))
        .prop_filter("nonzero", |v| v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-3)
        .prop_map(|v| {
            let z = DVector::from_iterator(v.len(), v.into_iter().map(|(a, b)| Complex::new(a, b)));
            let norm = z.norm();
            z.map(|c| c / norm)
        })
}

pub fn unit_real(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = DVector<f64>> {
    n.prop_flat_map(|n| proptest::collection::vec(-1.0f64..1.0, n))
        .prop_filter("nonzero", |v| v.iter().map(|a| a * a).sum::<f64>() > 1e-3)
        .prop_map(|v| {
            let z = DVector::from_vec(v);
            let norm = z.norm();
            z / norm
        })
}
