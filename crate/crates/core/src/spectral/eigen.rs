//! Dense nonsymmetric eigendecomposition with residual verification.
//!
//! The real Schur form A = Q T Qᵀ comes from nalgebra's implicit double-shift
//! QR. Eigenvectors of the quasi-triangular T are obtained by block back
//! substitution (the approach of LAPACK's `trevc`) and mapped back through Q.
//! Conjugate pairs are produced together from their 2×2 block, so the spectrum
//! of a real matrix is closed under conjugation by construction. Every pair is
//! then checked against ‖Av − λv‖; pairs that miss the tolerance get a few
//! steps of shifted inverse iteration before the decomposition is rejected.

use nalgebra::{Complex, DMatrix, DVector, Schur};
use serde::{Deserialize, Serialize};

use crate::ensembles::operator_norm;
use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

pub const DEFAULT_TOL: f64 = 1e-8;
/// Two candidate left eigenvalues closer than this (relative to max(1, ‖A‖))
/// make a pairing ambiguous; such indices are reported, not resolved.
pub const PAIRING_COLLISION: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    pub eigenvalues: Vec<C64>,
    pub right_eigenvectors: Vec<DVector<C64>>,
    /// `left_eigenvectors[i]` satisfies wᵀA ≈ λ_i wᵀ (no conjugation).
    pub left_eigenvectors: Vec<DVector<C64>>,
    pub residuals: Vec<f64>,
    pub left_residuals: Vec<f64>,
    /// Operator norm of the decomposed matrix.
    pub norm: f64,
    pub tol: f64,
    /// Indices whose left/right pairing was ambiguous.
    pub pairing_collisions: Vec<usize>,
}

impl SpectralData {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn worst_residual(&self) -> f64 {
        self.residuals
            .iter()
            .chain(&self.left_residuals)
            .fold(0.0, |a, &b| a.max(b))
    }

    pub fn to_record(&self) -> SpectralRecord {
        SpectralRecord {
            schema_version: crate::SCHEMA_VERSION,
            n: self.n(),
            eigenvalues: self.eigenvalues.iter().map(|z| [z.re, z.im]).collect(),
            residuals: self.residuals.clone(),
            left_residuals: self.left_residuals.clone(),
            norm: self.norm,
            tol: self.tol,
            pairing_collisions: self.pairing_collisions.clone(),
        }
    }
}

/// JSON form of [`SpectralData`]: eigenvalues as `[re, im]` pairs plus residuals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralRecord {
    pub schema_version: u32,
    pub n: usize,
    pub eigenvalues: Vec<[f64; 2]>,
    pub residuals: Vec<f64>,
    pub left_residuals: Vec<f64>,
    pub norm: f64,
    pub tol: f64,
    pub pairing_collisions: Vec<usize>,
}

/// Right and left eigenpairs of a real square matrix, each with
/// ‖Av − λv‖ ≤ tol·max(1, ‖A‖).
pub fn eigen_decompose(a: &DMatrix<f64>, tol: f64) -> Result<SpectralData> {
    check_input(a, tol)?;
    let n = a.nrows();
    let norm = operator_norm(a);
    let bound = tol * norm.max(1.0);

    let right = verified_pairs(a, bound)?;
    let at = a.transpose();
    let left = verified_pairs(&at, bound)?;

    let (order, collisions) = pair_by_nearest(&right.values, &left.values, norm);
    let mut left_vectors = Vec::with_capacity(n);
    let mut left_residuals = Vec::with_capacity(n);
    for &j in &order {
        left_vectors.push(left.vectors[j].clone());
        left_residuals.push(left.residuals[j]);
    }

    Ok(SpectralData {
        eigenvalues: right.values,
        right_eigenvectors: right.vectors,
        left_eigenvectors: left_vectors,
        residuals: right.residuals,
        left_residuals,
        norm,
        tol,
        pairing_collisions: collisions,
    })
}

/// Right eigenpairs only (skips the transpose decomposition).
pub fn right_eigenpairs(a: &DMatrix<f64>, tol: f64) -> Result<(Vec<C64>, Vec<DVector<C64>>, Vec<f64>)> {
    check_input(a, tol)?;
    let bound = tol * operator_norm(a).max(1.0);
    let p = verified_pairs(a, bound)?;
    Ok((p.values, p.vectors, p.residuals))
}

/// Eigenvalues only, in Schur order.
pub fn eigenvalues(a: &DMatrix<f64>) -> Result<Vec<C64>> {
    check_input(a, DEFAULT_TOL)?;
    let (_, t) = real_schur(a)?;
    Ok(schur_blocks(&t)
        .into_iter()
        .flat_map(|b| block_eigenvalues(&t, b))
        .collect())
}

fn check_input(a: &DMatrix<f64>, tol: f64) -> Result<()> {
    if !a.is_square() {
        return Err(Error::domain("eigendecomposition needs a square matrix"));
    }
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::domain("matrix has non-finite entries"));
    }
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    Ok(())
}

struct Pairs {
    values: Vec<C64>,
    vectors: Vec<DVector<C64>>,
    residuals: Vec<f64>,
}

fn verified_pairs(a: &DMatrix<f64>, bound: f64) -> Result<Pairs> {
    let n = a.nrows();
    if n == 0 {
        return Ok(Pairs {
            values: vec![],
            vectors: vec![],
            residuals: vec![],
        });
    }
    let (q, t) = real_schur(a)?;
    let ac = a.map(|x| C64::new(x, 0.0));
    let (values, mut vectors) = schur_eigenvectors(&q, &t);
    let mut residuals = Vec::with_capacity(n);
    let mut worst = 0.0f64;
    for k in 0..n {
        let mut r = residual(&ac, values[k], &vectors[k]);
        if r > bound {
            if let Some(v) = inverse_iteration(&ac, values[k], &vectors[k]) {
                let r2 = residual(&ac, values[k], &v);
                if r2 < r {
                    vectors[k] = v;
                    r = r2;
                }
            }
        }
        worst = worst.max(r);
        residuals.push(r);
    }
    if worst > bound {
        return Err(Error::Numerical {
            message: format!("eigenpair residual exceeds {bound:e} after refinement"),
            worst_residual: worst,
        });
    }
    Ok(Pairs {
        values,
        vectors,
        residuals,
    })
}

fn residual(a: &DMatrix<C64>, lambda: C64, v: &DVector<C64>) -> f64 {
    (a * v - v * lambda).norm()
}

/// Real Schur form with a fallback for the rare inputs (permutation-like
/// matrices) on which unshifted-exceptional QR stalls: conjugate by a fixed
/// Householder reflection and retry.
fn real_schur(a: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let n = a.nrows();
    let max_iter = 60 * n.max(10);
    if let Some(s) = Schur::try_new(a.clone(), f64::EPSILON, max_iter) {
        return Ok(s.unpack());
    }
    let w = DVector::from_fn(n, |i, _| 1.0 + (i as f64 * 0.7548776662466927).fract());
    let w = w.normalize();
    let h = DMatrix::identity(n, n) - (&w * w.transpose()) * 2.0;
    let b = &h * a * &h;
    let s = Schur::try_new(b, f64::EPSILON, max_iter).ok_or_else(|| Error::Numerical {
        message: "Schur iteration did not converge".into(),
        worst_residual: f64::INFINITY,
    })?;
    let (q, t) = s.unpack();
    Ok((h * q, t))
}

#[derive(Debug, Clone, Copy)]
struct Block {
    start: usize,
    size: usize,
}

fn schur_blocks(t: &DMatrix<f64>) -> Vec<Block> {
    let n = t.nrows();
    let mut blocks = Vec::new();
    let mut i = 0;
    while i < n {
        if i + 1 < n && t[(i + 1, i)] != 0.0 {
            blocks.push(Block { start: i, size: 2 });
            i += 2;
        } else {
            blocks.push(Block { start: i, size: 1 });
            i += 1;
        }
    }
    blocks
}

fn block_eigenvalues(t: &DMatrix<f64>, b: Block) -> Vec<C64> {
    let i = b.start;
    if b.size == 1 {
        return vec![C64::new(t[(i, i)], 0.0)];
    }
    let (p, q, r, s) = (t[(i, i)], t[(i, i + 1)], t[(i + 1, i)], t[(i + 1, i + 1)]);
    let half_trace = (p + s) * 0.5;
    let val = (p - s) * 0.5;
    let discr = r * q + val * val;
    if discr < 0.0 {
        let im = (-discr).sqrt();
        vec![C64::new(half_trace, im), C64::new(half_trace, -im)]
    } else {
        let d = discr.sqrt();
        vec![C64::new(half_trace + d, 0.0), C64::new(half_trace - d, 0.0)]
    }
}

fn schur_eigenvectors(q: &DMatrix<f64>, t: &DMatrix<f64>) -> (Vec<C64>, Vec<DVector<C64>>) {
    let n = t.nrows();
    let blocks = schur_blocks(t);
    let tnorm = t.norm().max(f64::MIN_POSITIVE);
    let smin = (f64::EPSILON * tnorm).max(f64::MIN_POSITIVE * 1e10);
    let qc = q.map(|x| C64::new(x, 0.0));
    let mut values = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    for (bi, &b) in blocks.iter().enumerate() {
        let lambdas = block_eigenvalues(t, b);
        let conjugate_pair = b.size == 2 && lambdas[0].im != 0.0;
        for (li, &lambda) in lambdas.iter().enumerate() {
            if conjugate_pair && li == 1 {
                let partner: &DVector<C64> = vectors.last().expect("pair head computed");
                let conj = partner.map(|z: C64| z.conj());
                values.push(lambda);
                vectors.push(conj);
                continue;
            }
            let y = back_substitute(t, &blocks, bi, lambda, smin);
            let v = &qc * y;
            values.push(lambda);
            vectors.push(normalize_phase(v));
        }
    }
    (values, vectors)
}

/// Solves (T − λI) y = 0 with y supported on blocks 0..=bi.
fn back_substitute(
    t: &DMatrix<f64>,
    blocks: &[Block],
    bi: usize,
    lambda: C64,
    smin: f64,
) -> DVector<C64> {
    let n = t.nrows();
    let mut y = DVector::from_element(n, C64::new(0.0, 0.0));
    let b = blocks[bi];
    let end = b.start + b.size;
    if b.size == 1 {
        y[b.start] = C64::new(1.0, 0.0);
    } else {
        let i = b.start;
        let m00 = C64::new(t[(i, i)], 0.0) - lambda;
        let m01 = C64::new(t[(i, i + 1)], 0.0);
        let m10 = C64::new(t[(i + 1, i)], 0.0);
        let m11 = C64::new(t[(i + 1, i + 1)], 0.0) - lambda;
        let (p, q) = if m00.norm_sqr() + m01.norm_sqr() >= m10.norm_sqr() + m11.norm_sqr() {
            (m00, m01)
        } else {
            (m10, m11)
        };
        if p.norm_sqr() + q.norm_sqr() == 0.0 {
            y[i] = C64::new(1.0, 0.0);
        } else {
            y[i] = -q;
            y[i + 1] = p;
        }
    }
    for blk in blocks[..bi].iter().rev() {
        let j = blk.start;
        let mut rhs = [C64::new(0.0, 0.0); 2];
        for (r, slot) in rhs.iter_mut().enumerate().take(blk.size) {
            let row = j + r;
            let mut acc = C64::new(0.0, 0.0);
            for l in (j + blk.size)..end {
                acc += y[l] * t[(row, l)];
            }
            *slot = -acc;
        }
        if blk.size == 1 {
            let mut d = C64::new(t[(j, j)], 0.0) - lambda;
            if d.norm() < smin {
                d = C64::new(smin, 0.0);
            }
            y[j] = rhs[0] / d;
        } else {
            let m00 = C64::new(t[(j, j)], 0.0) - lambda;
            let m01 = C64::new(t[(j, j + 1)], 0.0);
            let m10 = C64::new(t[(j + 1, j)], 0.0);
            let m11 = C64::new(t[(j + 1, j + 1)], 0.0) - lambda;
            let mut det = m00 * m11 - m01 * m10;
            if det.norm() < smin * smin.max(tnorm_of(&[m00, m01, m10, m11])) {
                det = C64::new(smin * smin.max(tnorm_of(&[m00, m01, m10, m11])), 0.0);
            }
            y[j] = (rhs[0] * m11 - m01 * rhs[1]) / det;
            y[j + 1] = (m00 * rhs[1] - m10 * rhs[0]) / det;
        }
        let big = y.iter().fold(0.0f64, |a, z| a.max(z.norm()));
        if big > 1e100 {
            y /= C64::new(big, 0.0);
        }
    }
    y
}

fn tnorm_of(entries: &[C64]) -> f64 {
    entries.iter().fold(0.0f64, |a, z| a.max(z.norm()))
}

/// Unit norm, with the largest-magnitude entry real and positive.
pub fn normalize_phase(v: DVector<C64>) -> DVector<C64> {
    let norm = v.norm();
    if norm == 0.0 {
        return v;
    }
    let pivot = v
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .expect("nonempty");
    let phase = pivot.conj() / pivot.norm();
    v.map(|z| z * phase / norm)
}

fn inverse_iteration(a: &DMatrix<C64>, lambda: C64, start: &DVector<C64>) -> Option<DVector<C64>> {
    let n = a.nrows();
    let scale = a.iter().fold(0.0f64, |m, z| m.max(z.norm())).max(1.0);
    let shift = lambda + C64::new(1.0, 1.0) * (scale * 1e-13);
    let mut m = a.clone();
    for i in 0..n {
        m[(i, i)] -= shift;
    }
    let lu = m.lu();
    let mut v = start.clone();
    for _ in 0..3 {
        let w = lu.solve(&v)?;
        let nw = w.norm();
        if !nw.is_finite() || nw == 0.0 {
            return None;
        }
        v = w / C64::new(nw, 0.0);
    }
    Some(normalize_phase(v))
}

/// Greedy nearest-eigenvalue pairing of left to right eigenvalues.
/// Returns, for each right index, the matched left index, plus ambiguous indices.
fn pair_by_nearest(right: &[C64], left: &[C64], norm: f64) -> (Vec<usize>, Vec<usize>) {
    let n = right.len();
    let mut used = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut collisions = Vec::new();
    let collide = PAIRING_COLLISION * norm.max(1.0);
    for (i, &lambda) in right.iter().enumerate() {
        let mut best: Option<(usize, f64)> = None;
        let mut second = f64::INFINITY;
        for (j, &mu) in left.iter().enumerate() {
            if used[j] {
                continue;
            }
            let d = (lambda - mu).norm();
            match best {
                Some((_, bd)) if d >= bd => second = second.min(d),
                Some((_, bd)) => {
                    second = bd;
                    best = Some((j, d));
                }
                None => best = Some((j, d)),
            }
        }
        let (j, _) = best.expect("as many left as right eigenvalues");
        if second < collide {
            collisions.push(i);
        }
        used[j] = true;
        order.push(j);
    }
    (order, collisions)
}
