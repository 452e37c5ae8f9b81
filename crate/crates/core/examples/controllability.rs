//! Controllability of (A, b): Kalman rank (floating point and exact), the
//! PBH test, certified uncontrollable pairs and steering a state.
//!
//!     cargo run --release --example controllability

use nalgebra::DVector;
use rmt_lab::control::{
    construct_uncontrollable, is_controllable, kalman_matrix, minimal_controllability_scan,
    replay_error, solve_control, ControlMode,
};
use rmt_lab::ensembles::{sample_matrix, AtomDistribution, EnsembleSpec};

fn main() -> rmt_lab::Result<()> {
    let n = 10;
    let a = sample_matrix(&EnsembleSpec::iid(n, AtomDistribution::rademacher()), 11)?;
    let ones = DVector::from_element(n, 1.0);

    let report = is_controllable(&a, &ones, ControlMode::All)?;
    println!(
        "(N, 1): numeric rank {:?}, exact rank {:?}, PBH overlap {:.3e}, controllable {}",
        report.numeric_rank,
        report.exact_rank,
        report.pbh_min_overlap.unwrap_or(f64::NAN),
        report.controllable()
    );
    let k = kalman_matrix(&a, &ones)?;
    if let Some(exact) = &k.exact_columns {
        println!("largest exact Kalman entry has {} bits", exact.max_bits());
    }

    let scan = minimal_controllability_scan(&a, ControlMode::Exact)?;
    let ok = scan.iter().filter(|r| r.controllable()).count();
    println!("basis vectors e_i giving a controllable pair: {ok}/{n}");

    let bad = construct_uncontrollable(6, 5)?;
    assert!(bad.verify());
    let r = is_controllable(&bad.a_f64(), &bad.b_f64(), ControlMode::All)?;
    println!(
        "constructed pair: exact rank {:?} < 6, PBH overlap {:.1e}, eigenvalue {}",
        r.exact_rank,
        r.pbh_min_overlap.unwrap_or(f64::NAN),
        bad.eigenvalue
    );

    let small = sample_matrix(&EnsembleSpec::iid(6, AtomDistribution::gaussian(1.0)?), 3)?;
    let b = DVector::from_element(6, 1.0);
    let x0 = DVector::zeros(6);
    let target = DVector::from_fn(6, |i, _| i as f64);
    let u = solve_control(&small, &b, &x0, &target)?;
    println!(
        "steered 0 -> target in 6 steps, replay error {:.2e}",
        replay_error(&small, &b, &x0, &target, &u)?
    );
    Ok(())
}
