mod common;

use nalgebra::{Complex, DMatrix};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rmt_lab::ensembles::{operator_norm, sample_matrix, AtomDistribution, EnsembleSpec};
use rmt_lab::exact::{bareiss_determinant, IntMatrix};
use rmt_lab::spectral::{
    charpoly_exact, eigen_decompose, eigenvalues, gap_distribution_of, min_gap, min_gap_of,
    simple_spectrum_exact, DEFAULT_TOL,
};

use common::{cfg, float_matrix, int_matrix};

/// det(xI − A) by fraction-free elimination, independent of the charpoly recurrence.
fn det_shifted(a: &IntMatrix, x: i64) -> BigInt {
    let n = a.rows();
    let m = IntMatrix::from_fn(n, n, |i, j| {
        let d = if i == j { BigInt::from(x) } else { BigInt::from(0) };
        d - a.get(i, j)
    });
    bareiss_determinant(&m).unwrap()
}

fn brute_min_gap(values: &[Complex<f64>]) -> f64 {
    let mut best = f64::INFINITY;
    for (i, a) in values.iter().enumerate() {
        for (j, b) in values.iter().enumerate() {
            if i != j {
                best = best.min((a - b).norm());
            }
        }
    }
    best
}

proptest! {
    #![proptest_config(cfg(64))]

    #[test]
    fn eigenvalues_are_closed_under_conjugation(a in float_matrix(2..=12)) {
        let values = eigenvalues(&a).unwrap();
        let scale = operator_norm(&a).max(1.0);
        for z in &values {
            let partner = values.iter().map(|w| (w - z.conj()).norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(partner <= 1e-8 * scale, "no conjugate for {z}: {partner}");
        }
    }

    #[test]
    fn trace_and_determinant_match(a in int_matrix(1..=8, 3)) {
        let values = eigenvalues(&a).unwrap();
        let scale = operator_norm(&a).max(1.0);
        let sum: Complex<f64> = values.iter().sum();
        prop_assert!((sum.re - a.trace()).abs() <= 1e-6 * scale && sum.im.abs() <= 1e-6 * scale);
        let exact = IntMatrix::from_f64(&a).unwrap();
        let det = bareiss_determinant(&exact).unwrap().to_f64().unwrap();
        let product: Complex<f64> = values.iter().product();
        let tol = 1e-6 * det.abs().max(scale.powi(a.nrows() as i32) * 1e-6).max(1.0);
        prop_assert!((product.re - det).abs() <= tol, "product {product} vs det {det}");
    }

    #[test]
    fn residual_contract_holds(a in float_matrix(1..=16)) {
        let spec = eigen_decompose(&a, DEFAULT_TOL).unwrap();
        let scale = spec.norm.max(1.0);
        let ac = a.map(|x| Complex::new(x, 0.0));
        for i in 0..spec.n() {
            let (lambda, v, w) = (spec.eigenvalues[i], &spec.right_eigenvectors[i], &spec.left_eigenvectors[i]);
            prop_assert!((v.norm() - 1.0).abs() <= 1e-12);
            prop_assert!((w.norm() - 1.0).abs() <= 1e-12);
            // Recomputed here rather than trusting the stored residuals.
            prop_assert!((&ac * v - v * lambda).norm() <= DEFAULT_TOL * scale);
            prop_assert!((ac.transpose() * w - w * lambda).norm() <= DEFAULT_TOL * scale);
        }
    }

    #[test]
    fn charpoly_agrees_with_shifted_determinants(a in int_matrix(1..=10, 4)) {
        let m = IntMatrix::from_f64(&a).unwrap();
        let p = charpoly_exact(&m).unwrap();
        prop_assert_eq!(p.degree(), m.rows());
        prop_assert_eq!(p.coefficients().last().unwrap(), &BigInt::from(1));
        for x in [-1i64, 0, 1, 2, -3] {
            prop_assert_eq!(p.eval(&BigInt::from(x)), det_shifted(&m, x));
        }
    }

    #[test]
    fn repeated_roots_have_small_numeric_gaps(a in int_matrix(2..=12, 3)) {
        let m = IntMatrix::from_f64(&a).unwrap();
        if !simple_spectrum_exact(&m).unwrap() {
            let gap = min_gap_of(&eigenvalues(&a).unwrap()).unwrap();
            prop_assert!(gap.delta <= 1e-6 * operator_norm(&a).max(1.0));
        }
    }

    #[test]
    fn min_gap_is_the_pairwise_minimum(a in float_matrix(2..=30)) {
        let spec = eigen_decompose(&a, DEFAULT_TOL).unwrap();
        let gap = min_gap(&spec).unwrap();
        let mut shuffled = spec.eigenvalues.clone();
        shuffled.reverse();
        prop_assert_eq!(gap.delta, brute_min_gap(&shuffled));
        let (i, j) = gap.argmin_pair;
        prop_assert_eq!((spec.eigenvalues[i] - spec.eigenvalues[j]).norm(), gap.delta);
    }

    #[test]
    fn gap_cdf_is_monotone_and_total(values in proptest::collection::vec(0.0f64..10.0, 1..100)) {
        let cdf = gap_distribution_of(&values).unwrap();
        prop_assert_eq!(cdf.rows.len(), values.len());
        prop_assert!(cdf.rows.windows(2).all(|w| w[0].0 <= w[1].0 && w[0].1 <= w[1].1));
        let max = values.iter().copied().fold(f64::MIN, f64::max);
        prop_assert_eq!(cdf.at(max), 1.0);
        for &s in &values {
            let count = values.iter().filter(|&&v| v <= s).count();
            prop_assert_eq!(cdf.at(s), count as f64 / values.len() as f64);
        }
    }
}

#[test]
fn duplicated_blocks_are_not_simple() {
    let spec = EnsembleSpec::iid(4, AtomDistribution::rademacher());
    for seed in 0..20 {
        let b = sample_matrix(&spec, seed).unwrap();
        let mut a = DMatrix::zeros(8, 8);
        a.view_mut((0, 0), (4, 4)).copy_from(&b);
        a.view_mut((4, 4), (4, 4)).copy_from(&b);
        let exact = IntMatrix::from_f64(&a).unwrap();
        assert!(!simple_spectrum_exact(&exact).unwrap());
        let gap = min_gap_of(&eigenvalues(&a).unwrap()).unwrap();
        assert!(gap.delta <= 1e-6 * operator_norm(&a));
    }
}

#[test]
fn random_gaussian_residuals() {
    let spec = EnsembleSpec::iid(20, AtomDistribution::gaussian(1.0).unwrap());
    for seed in 0..10 {
        let a = sample_matrix(&spec, seed).unwrap();
        let data = eigen_decompose(&a, DEFAULT_TOL).unwrap();
        assert!(data.worst_residual() <= DEFAULT_TOL * data.norm.max(1.0));
        assert_eq!(data.n(), 20);
    }
}

#[test]
fn companion_matrix_recovers_its_polynomial() {
    // Companion matrix of x^4 - 3x^2 + 2x - 7.
    let coeffs = [-7i64, 2, -3, 0];
    let m = IntMatrix::from_fn(4, 4, |i, j| {
        if j == 3 {
            BigInt::from(-coeffs[i])
        } else if i == j + 1 {
            BigInt::from(1)
        } else {
            BigInt::from(0)
        }
    });
    let p = charpoly_exact(&m).unwrap();
    let got: Vec<i64> = p.coefficients().iter().map(|c| c.to_i64().unwrap()).collect();
    assert_eq!(got, vec![-7, 2, -3, 0, 1]);
}

#[test]
fn charpoly_respects_the_size_cap() {
    let big = IntMatrix::identity(129);
    assert!(matches!(charpoly_exact(&big), Err(rmt_lab::Error::Config(_))));
}
