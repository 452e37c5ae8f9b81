mod common;

use nalgebra::{Complex, DMatrix, DVector};
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use rmt_lab::ensembles::AtomDistribution;
use rmt_lab::structure::{
    compressibility, complexify, delocalized_check, hadamard, is_complex_witness, is_real_witness,
    lattice_distance, lcd_complex, lcd_real, levy_exact, levy_from_samples, levy_mc, draw_sums,
    real_imag_correlation, sparsity_count, CVector, LcdQuery,
};

use common::{cfg, unit_complex, unit_real};

type C64 = Complex<f64>;

fn svd_product(z: &CVector) -> f64 {
    let v = DMatrix::from_fn(2, z.len(), |i, j| if i == 0 { z[j].re } else { z[j].im });
    let s = v.singular_values();
    s[0] * s[1]
}

/// Smallest ℓ₂ norm left outside any support of size k, by enumerating supports.
fn brute_tail(v: &[f64], k: usize) -> f64 {
    fn rec(v: &[f64], start: usize, left: usize, chosen: &mut Vec<usize>, best: &mut f64) {
        if left == 0 {
            let tail: f64 = (0..v.len()).filter(|i| !chosen.contains(i)).map(|i| v[i] * v[i]).sum();
            *best = best.min(tail.sqrt());
            return;
        }
        for i in start..=v.len() - left {
            chosen.push(i);
            rec(v, i + 1, left - 1, chosen, best);
            chosen.pop();
        }
    }
    let mut best = f64::INFINITY;
    rec(v, 0, k.min(v.len()), &mut Vec::new(), &mut best);
    best
}

/// All 2ⁿ Rademacher sums with their (equal) probabilities.
fn rademacher_sums(z: &CVector) -> Vec<C64> {
    let n = z.len();
    (0..1u32 << n)
        .map(|mask| (0..n).map(|i| if mask >> i & 1 == 1 { z[i] } else { -z[i] }).sum())
        .collect()
}

/// Largest fraction of points in a closed disk of radius t: centers at every
/// point and at both circumcenters of every pair within 2t.
fn brute_disk(points: &[C64], t: f64) -> f64 {
    let eps = 1e-9;
    let mut centers: Vec<C64> = points.to_vec();
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            let d = (b - a).norm();
            if d > 0.0 && d <= 2.0 * t {
                let mid = (a + b) / 2.0;
                let h = (t * t - d * d / 4.0).max(0.0).sqrt();
                let normal = C64::new(-(b - a).im, (b - a).re) / d;
                centers.push(mid + normal * h);
                centers.push(mid - normal * h);
            }
        }
    }
    let best = centers
        .iter()
        .map(|c| points.iter().filter(|p| (*p - c).norm() <= t + eps).count())
        .max()
        .unwrap_or(0);
    best as f64 / points.len() as f64
}

fn brute_window(points: &[f64], t: f64) -> f64 {
    let eps = 1e-9;
    let best = points
        .iter()
        .map(|a| points.iter().filter(|b| **b >= *a - eps && **b <= a + 2.0 * t + eps).count())
        .max()
        .unwrap_or(0);
    best as f64 / points.len() as f64
}

proptest! {
    #![proptest_config(cfg(100))]

    #[test]
    fn correlation_is_the_product_of_singular_values(z in unit_complex(2..=50)) {
        let d = real_imag_correlation(&z).unwrap();
        prop_assert!((d - svd_product(&z)).abs() <= 1e-10);
    }

    #[test]
    fn lcd_lower_bound_is_at_least_l(v in unit_real(1..=20), l in 0.5f64..6.0) {
        let q = LcdQuery::with_l(l, v.len());
        let b = lcd_real(&v, &q).unwrap();
        prop_assert!(b.lower >= l);
        if let Some(w) = b.witness {
            prop_assert!(b.lower <= w);
            prop_assert!(is_real_witness(&v, w, &q));
        }
    }

    #[test]
    fn hadamard_obeys_hoelder(b in unit_complex(1..=20), seed in 0u64..1000) {
        let v = complexify(&DVector::from_fn(b.len(), |i, _| ((i as u64 * 7 + seed) % 11) as f64 - 5.0));
        let h = hadamard(&b, &v).unwrap();
        let max_b = b.iter().map(|c| c.norm()).fold(0.0, f64::max);
        prop_assert!(h.norm() <= max_b * v.norm() + 1e-12);
    }
}

proptest! {
    #![proptest_config(cfg(40))]

    #[test]
    fn compressibility_matches_exhaustive_supports(
        v in proptest::collection::vec(-1.0f64..1.0, 1..=16),
        a in 0.05f64..0.6,
        b in 0.0f64..1.0,
    ) {
        let z = complexify(&DVector::from_vec(v.clone()));
        let report = compressibility(&z, a, b).unwrap();
        let k = sparsity_count(a, v.len());
        let tail = brute_tail(&v, k);
        prop_assert!((report.tail_norm - tail).abs() <= 1e-12);
        prop_assert_eq!(report.compressible, tail <= b);
    }

    #[test]
    fn levy_exact_matches_point_enumeration(z in unit_complex(1..=7), t in 0.01f64..1.5) {
        let est = levy_exact(&z, t, &AtomDistribution::rademacher()).unwrap();
        let sums = rademacher_sums(&z);
        prop_assert!((est.value - brute_disk(&sums, t)).abs() <= 1e-12);
        let rational = est.exact.as_ref().unwrap();
        prop_assert!((est.value - rational_f64(rational)).abs() <= 1e-15);
    }

    #[test]
    fn levy_exact_real_matches_window_scan(v in unit_real(1..=10), t in 0.01f64..1.0) {
        let z = complexify(&v);
        let est = levy_exact(&z, t, &AtomDistribution::rademacher()).unwrap();
        let sums: Vec<f64> = rademacher_sums(&z).iter().map(|c| c.re).collect();
        prop_assert!((est.value - brute_window(&sums, t)).abs() <= 1e-12);
    }

    #[test]
    fn levy_is_monotone_in_t(z in unit_complex(1..=6), t1 in 0.0f64..1.0, dt in 0.0f64..1.0) {
        let atom = AtomDistribution::rademacher();
        let t2 = t1 + dt;
        prop_assert!(levy_exact(&z, t1, &atom).unwrap().value <= levy_exact(&z, t2, &atom).unwrap().value);
        // Same draws for both radii.
        let draws = draw_sums(&z, &atom, 2000, 9);
        let a = levy_from_samples(&z, &draws, t1).unwrap().value;
        let b = levy_from_samples(&z, &draws, t2).unwrap().value;
        prop_assert!(a <= b);
    }
}

fn rational_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap()
}

#[test]
fn hand_derived_small_ball_values() {
    let atom = AtomDistribution::rademacher();
    let e1 = complexify(&DVector::from_vec(vec![1.0, 0.0]));
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let diag = complexify(&DVector::from_vec(vec![h, h]));
    let half = BigRational::new(1.into(), 2.into());
    assert_eq!(levy_exact(&e1, 0.5, &atom).unwrap().exact, Some(half.clone()));
    assert_eq!(levy_exact(&diag, 0.1, &atom).unwrap().exact, Some(half));
    assert_eq!(
        levy_exact(&diag, 2f64.sqrt(), &atom).unwrap().exact,
        Some(BigRational::from_integer(1.into()))
    );
    let mc = levy_mc(&diag, 0.1, &atom, 100_000, 3).unwrap();
    assert!((mc.value - 0.5).abs() <= 0.02);
}

#[test]
fn enumeration_cap_is_a_config_error() {
    let z = complexify(&DVector::from_element(24, 1.0 / 24f64.sqrt()));
    let err = levy_exact(&z, 0.1, &AtomDistribution::rademacher()).unwrap_err();
    assert!(matches!(err, rmt_lab::Error::Config(_)));
}

#[test]
fn gaussian_atoms_do_not_concentrate_at_zero_radius() {
    let z = complexify(&DVector::from_vec(vec![0.6, 0.8]));
    let est = levy_mc(&z, 0.0, &AtomDistribution::gaussian(1.0).unwrap(), 5000, 1).unwrap();
    assert!(est.value <= 10.0 / 5000.0);
    let wide = levy_mc(&z, 1e6, &AtomDistribution::gaussian(1.0).unwrap(), 5000, 1).unwrap();
    assert_eq!(wide.value, 1.0);
}

#[test]
fn delocalization_counts() {
    let c = |v: Vec<f64>| complexify(&DVector::from_vec(v));
    assert_eq!(delocalized_check(&c(vec![1.0; 7]), 1.0).unwrap(), 0);
    let mut e1 = vec![0.0; 10];
    e1[0] = 1.5;
    assert_eq!(delocalized_check(&c(e1), 2.0).unwrap(), 9);
    assert_eq!(delocalized_check(&c(vec![3.0, 1.0, 0.4, 1.0, 1.0]), 2.0).unwrap(), 2);
}

/// First θ on a grid of step `step` in [from, to] with dist(θv, ℤⁿ) below the threshold.
fn grid_crossing(v: &DVector<f64>, q: &LcdQuery, from: f64, to: f64, step: f64) -> Option<f64> {
    let steps = ((to - from) / step).ceil() as usize;
    (0..=steps)
        .map(|k| from + k as f64 * step)
        .find(|&theta| lattice_distance(v.iter().map(|x| theta * x)) < q.threshold(theta))
}

#[test]
fn diagonal_lcd_matches_fine_grid() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let v = DVector::from_vec(vec![h, h]);
    let q = LcdQuery::with_l(2.0, 2);
    let b = lcd_real(&v, &q).unwrap();
    let w = b.witness.expect("witness below the cap");
    assert!(w > 2.0 && w < 2.8);
    let oracle = grid_crossing(&v, &q, 2.0, 2.8, 1e-6).unwrap();
    assert!((w - oracle).abs() <= 1e-6, "witness {w} vs grid {oracle}");
    assert!(b.lower <= oracle + 1e-6);
}

#[test]
fn real_lcd_brackets_contain_the_grid_crossing() {
    let mut runner = proptest::test_runner::TestRunner::new(cfg(20));
    runner
        .run(&unit_real(2..=4), |v| {
            let q = LcdQuery::with_l(1.5, v.len());
            let b = lcd_real(&v, &q).unwrap();
            let step = 1e-5;
            match grid_crossing(&v, &q, q.l, q.theta_max, step) {
                // A solution found by the grid cannot lie below the certified lower end.
                Some(theta) => prop_assert!(b.lower <= theta + step),
                None => prop_assert!(b.witness.is_none() || b.witness.unwrap() >= q.theta_max - step),
            }
            Ok(())
        })
        .unwrap();
}

#[test]
fn complex_lcd_matches_planar_grid() {
    // z = (1, i)/√2, so θ ↦ Vᵀθ = (θ₁, θ₂)/√2.
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let z: CVector = DVector::from_vec(vec![C64::new(h, 0.0), C64::new(0.0, h)]);
    let q = LcdQuery::with_l(2.0, 2);
    let b = lcd_complex(&z, &q).unwrap();
    let w = b.witness.expect("witness");
    let p = b.witness_point.unwrap();
    assert!(is_complex_witness(&z, p, &q));

    let step = 2e-3;
    let r = 10.0;
    let cells = (r / step) as i64;
    let mut best = f64::INFINITY;
    for i in -cells..=cells {
        for j in 0..=cells {
            let (t1, t2) = (i as f64 * step, j as f64 * step);
            let norm = t1.hypot(t2);
            if norm >= best || norm <= q.l {
                continue;
            }
            let img = [h * t1, h * t2];
            let dist = lattice_distance(img);
            if dist < q.threshold(h * norm) {
                best = norm;
            }
        }
    }
    assert!(best.is_finite());
    // The grid solution is no smaller than the certified lower end, and the
    // witness is no larger than the grid solution plus one cell diagonal.
    assert!(b.lower <= best + 1e-9, "lower {} vs grid {best}", b.lower);
    assert!(w <= best + step * 2f64.sqrt(), "witness {w} vs grid {best}");
}

#[test]
fn complex_lcd_is_phase_invariant() {
    let mut runner = proptest::test_runner::TestRunner::new(cfg(25));
    runner
        .run(&(unit_complex(2..=4), 0.0f64..std::f64::consts::TAU), |(z, phi)| {
            let q = LcdQuery::with_l(2.0, z.len());
            let rotated = z.map(|c| c * C64::from_polar(1.0, phi));
            let a = lcd_complex(&z, &q).unwrap();
            let b = lcd_complex(&rotated, &q).unwrap();
            prop_assert!(a.overlaps(&b, q.theta_max, 1e-6), "{a:?} vs {b:?}");
            Ok(())
        })
        .unwrap();
}

#[test]
fn complex_search_on_real_vectors_agrees_with_real_search() {
    let mut runner = proptest::test_runner::TestRunner::new(cfg(10));
    runner
        .run(&unit_real(2..=4), |v| {
            let q = LcdQuery::with_l(2.0, v.len());
            let real = lcd_real(&v, &q).unwrap();
            let cplx = lcd_complex(&complexify(&v), &q).unwrap();
            prop_assert!(cplx.overlaps(&real, q.theta_max, 1e-6));
            Ok(())
        })
        .unwrap();
}

/// The small-ball bound ρ(z, t) ≤ (C·L)²/d(z)·(t + √2/D)², with C fitted on a
/// pilot set. A smaller D gives a weaker bound, so it can only remove violations.
#[test]
fn small_ball_bound_is_monotone_in_the_lcd() {
    let atom = AtomDistribution::rademacher();
    let t = 0.05;
    let q = LcdQuery::with_l(2.0, 6);
    let mut draws = proptest::test_runner::TestRunner::new(cfg(1));
    let strategy = unit_complex(6..=6);
    let mut sample = |count: usize| -> Vec<(f64, f64, f64)> {
        let mut out = Vec::new();
        while out.len() < count {
            let z = strategy.new_tree(&mut draws).unwrap().current();
            let d = real_imag_correlation(&z).unwrap();
            if d < 0.1 {
                continue;
            }
            let rho = levy_exact(&z, t, &atom).unwrap().value;
            let lower = lcd_complex(&z, &q).unwrap().lower;
            out.push((rho, d, lower));
        }
        out
    };
    let bound = |c2: f64, d: f64, lcd: f64| c2 * q.l * q.l / d * (t + 2f64.sqrt() / lcd).powi(2);
    let pilot = sample(8);
    let c2 = pilot.iter().map(|&(rho, d, lcd)| rho / bound(1.0, d, lcd)).fold(0.0, f64::max);
    assert!(pilot.iter().all(|&(rho, d, lcd)| rho <= bound(c2, d, lcd) * (1.0 + 1e-12)));
    let fresh = sample(8);
    let violations = |shrink: f64| fresh.iter().filter(|&&(rho, d, lcd)| rho > bound(c2, d, lcd * shrink)).count();
    assert!(violations(0.5) <= violations(1.0));
    assert!(violations(0.25) <= violations(0.5));
}
