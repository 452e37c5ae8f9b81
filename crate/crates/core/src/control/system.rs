use nalgebra::{DMatrix, DVector};

use super::kalman::{check_pair, kalman_numeric_rank};
use crate::error::{Error, Result};

/// States x(0), …, x(len u) of x(k+1) = A x(k) + u(k) b.
pub fn simulate_lti(
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    x0: &DVector<f64>,
    u: &[f64],
) -> Result<Vec<DVector<f64>>> {
    check_pair(a, b)?;
    if x0.len() != a.nrows() {
        return Err(Error::domain("initial state has the wrong dimension"));
    }
    let mut states = Vec::with_capacity(u.len() + 1);
    states.push(x0.clone());
    for &uk in u {
        let x = states.last().expect("nonempty");
        let next = a * x + b * uk;
        states.push(next);
    }
    Ok(states)
}

/// Inputs u(0..n−1) steering x0 to x_target in n steps:
/// (A^{n−1}b … Ab b)·u = x_target − Aⁿx0.
pub fn solve_control(
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    x0: &DVector<f64>,
    x_target: &DVector<f64>,
) -> Result<DVector<f64>> {
    check_pair(a, b)?;
    let n = a.nrows();
    if x0.len() != n || x_target.len() != n {
        return Err(Error::domain("state vectors have the wrong dimension"));
    }
    // Column k is A^{n−1−k} b.
    let mut k = DMatrix::zeros(n, n);
    if n > 0 {
        k.set_column(n - 1, b);
        for j in (0..n.saturating_sub(1)).rev() {
            let next = a * k.column(j + 1);
            k.set_column(j, &next);
        }
    }
    let (rank, _) = kalman_numeric_rank(&k, None);
    if rank < n {
        return Err(Error::Uncontrollable { rank, n });
    }
    let mut free = x0.clone();
    for _ in 0..n {
        free = a * free;
    }
    let rhs = x_target - free;
    let lu = k.clone().lu();
    let mut u = lu.solve(&rhs).ok_or(Error::Uncontrollable { rank, n })?;
    // One step of iterative refinement.
    let r = &rhs - &k * &u;
    if let Some(du) = lu.solve(&r) {
        u += du;
    }
    Ok(u)
}

/// ‖x(n) − x_target‖ after replaying u from x0.
pub fn replay_error(
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    x0: &DVector<f64>,
    x_target: &DVector<f64>,
    u: &DVector<f64>,
) -> Result<f64> {
    let states = simulate_lti(a, b, x0, u.as_slice())?;
    Ok((states.last().expect("nonempty") - x_target).norm())
}
