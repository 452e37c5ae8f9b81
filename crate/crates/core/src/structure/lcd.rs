//! Certified brackets on the least common denominator of real and complex
//! unit vectors.
//!
//! Both searches rest on the same observation: θ ↦ dist(θv, ℤⁿ) is Lipschitz
//! (constant ‖v‖, or the top singular value of the 2×n real/imaginary stack
//! in the complex case) while the threshold ρL√log₊(‖θv‖/L) is nondecreasing
//! in ‖θ‖. A cell whose distance at one point exceeds the threshold at its far
//! edge by more than the Lipschitz slack therefore contains no solution.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::vectors::CVector;
use crate::error::{Error, Result};

/// Strict margin a witness must clear: dist + margin < threshold.
pub const WITNESS_MARGIN: f64 = 1e-12;
/// Tolerance on ‖v‖ = 1.
pub const UNIT_TOL: f64 = 1e-10;
/// Largest dimension accepted by the two-dimensional search.
pub const LCD_COMPLEX_MAX_N: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LcdQuery {
    /// Scale L of the threshold.
    pub l: f64,
    pub rho: f64,
    /// Search cap on θ (or ‖θ‖).
    pub theta_max: f64,
    /// Width of the coarse scan cells.
    pub grid_step: f64,
    /// Cells narrower than this are not subdivided further.
    pub refine_width: f64,
    /// Leaf size and stopping gap of the two-dimensional search, whose cost
    /// grows like the inverse square root of this width.
    pub plane_refine_width: f64,
    /// Base of the logarithm inside log₊.
    pub log_base: f64,
}

impl LcdQuery {
    /// Defaults for an atom with parameter q in dimension n: L = √(16/q),
    /// ρ = 1, θ_max = 10√n, grid step 10⁻³, natural logarithm.
    pub fn for_q(q: f64, n: usize) -> Self {
        Self::with_l((16.0 / q).sqrt(), n)
    }

    pub fn with_l(l: f64, n: usize) -> Self {
        LcdQuery {
            l,
            rho: 1.0,
            theta_max: 10.0 * (n as f64).sqrt(),
            grid_step: 1e-3,
            refine_width: 1e-9,
            plane_refine_width: 1e-7,
            log_base: std::f64::consts::E,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("L", self.l),
            ("rho", self.rho),
            ("theta_max", self.theta_max),
            ("grid_step", self.grid_step),
            ("refine_width", self.refine_width),
            ("plane_refine_width", self.plane_refine_width),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain(format!("LCD query {name} must be positive, got {v}")));
            }
        }
        if !(self.log_base > 1.0 && self.log_base.is_finite()) {
            return Err(Error::domain(format!("log base must exceed 1, got {}", self.log_base)));
        }
        Ok(())
    }

    /// ρL√log₊(r/L).
    pub fn threshold(&self, r: f64) -> f64 {
        if r <= self.l {
            return 0.0;
        }
        let lg = (r / self.l).ln() / self.log_base.ln();
        self.rho * self.l * lg.max(0.0).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LcdBracket {
    /// No θ with ‖θ‖ below this satisfies the LCD inequality.
    pub lower: f64,
    /// ‖θ*‖ for a point that satisfies it.
    pub witness: Option<f64>,
    /// The witness point itself: (θ, 0) for real vectors, (θ₁, θ₂) for complex ones.
    pub witness_point: Option<[f64; 2]>,
    pub resolved: bool,
}

impl LcdBracket {
    fn unresolved(lower: f64) -> Self {
        LcdBracket {
            lower,
            witness: None,
            witness_point: None,
            resolved: false,
        }
    }

    /// Upper end of the bracket; the search cap when no witness was found.
    pub fn upper(&self, theta_max: f64) -> f64 {
        self.witness.unwrap_or(theta_max.max(self.lower))
    }

    pub fn overlaps(&self, other: &LcdBracket, theta_max: f64, slack: f64) -> bool {
        self.lower <= other.upper(theta_max) + slack && other.lower <= self.upper(theta_max) + slack
    }
}

/// dist(w, ℤⁿ)
pub fn lattice_distance(w: impl IntoIterator<Item = f64>) -> f64 {
    w.into_iter()
        .map(|x| {
            let d = x - x.round();
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

fn check_unit(norm: f64) -> Result<()> {
    if (norm - 1.0).abs() > UNIT_TOL {
        return Err(Error::domain(format!("LCD needs a unit vector, got norm {norm}")));
    }
    Ok(())
}

/// Whether θ satisfies the LCD inequality for the real vector v with the witness margin.
pub fn is_real_witness(v: &DVector<f64>, theta: f64, q: &LcdQuery) -> bool {
    let f = lattice_distance(v.iter().map(|x| theta * x));
    f + WITNESS_MARGIN < q.threshold(theta.abs() * v.norm())
}

/// Certified bracket on inf{θ > 0 : dist(θv, ℤⁿ) < ρL√log₊(‖θv‖/L)}.
pub fn lcd_real(v: &DVector<f64>, q: &LcdQuery) -> Result<LcdBracket> {
    q.validate()?;
    let norm = v.norm();
    check_unit(norm)?;
    let f = |th: f64| lattice_distance(v.iter().map(|x| th * x));
    let g = |th: f64| q.threshold(th * norm);
    let start = q.l / norm;
    if start >= q.theta_max {
        return Ok(LcdBracket::unresolved(q.theta_max));
    }
    let mut lower: Option<f64> = None;
    let cells = ((q.theta_max - start) / q.grid_step).ceil() as u64;
    for k in 0..cells {
        let a = start + k as f64 * q.grid_step;
        let b = (start + (k + 1) as f64 * q.grid_step).min(q.theta_max);
        if f(a) >= g(b) + norm * (b - a) {
            continue;
        }
        let mut stack = vec![(a, b)];
        while let Some((a, b)) = stack.pop() {
            if f(a) >= g(b) + norm * (b - a) {
                continue;
            }
            if b - a <= q.refine_width {
                let lo = *lower.get_or_insert(a);
                for th in [a, 0.5 * (a + b), b] {
                    if f(th) + WITNESS_MARGIN < g(th) {
                        return Ok(LcdBracket {
                            lower: lo,
                            witness: Some(th),
                            witness_point: Some([th, 0.0]),
                            resolved: true,
                        });
                    }
                }
                continue;
            }
            let mid = 0.5 * (a + b);
            stack.push((mid, b));
            stack.push((a, mid));
        }
    }
    Ok(LcdBracket::unresolved(lower.unwrap_or(q.theta_max)))
}

/// Polar cell [r0, r1] × [φ0, φ1], ordered so the heap pops the smallest r0.
#[derive(Debug, Clone, Copy)]
struct Cell {
    r0: f64,
    r1: f64,
    p0: f64,
    p1: f64,
}

impl Cell {
    fn center(&self) -> (f64, f64) {
        let r = 0.5 * (self.r0 + self.r1);
        let p = 0.5 * (self.p0 + self.p1);
        (r * p.cos(), r * p.sin())
    }

    /// Upper bound on the distance from the center to any point of the cell.
    fn radius(&self) -> f64 {
        0.5 * (self.r1 - self.r0) + 0.5 * self.r1 * (self.p1 - self.p0)
    }

    fn split(&self) -> [Cell; 2] {
        if self.r1 - self.r0 >= self.r1 * (self.p1 - self.p0) {
            let m = 0.5 * (self.r0 + self.r1);
            [Cell { r1: m, ..*self }, Cell { r0: m, ..*self }]
        } else {
            let m = 0.5 * (self.p0 + self.p1);
            [Cell { p1: m, ..*self }, Cell { p0: m, ..*self }]
        }
    }
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .r0
            .total_cmp(&self.r0)
            .then_with(|| other.p0.total_cmp(&self.p0))
    }
}

/// Certified bracket on inf{‖θ‖ : θ ∈ ℝ², dist(Vᵀθ, ℤⁿ) < ρL√log₊(‖Vᵀθ‖/L)}
/// where V stacks the real and imaginary parts of z.
///
/// The search is best-first over polar cells of the half plane (the
/// condition is invariant under θ ↦ −θ), always expanding the cell nearest
/// the origin, and stops once no open cell can beat the best witness by
/// more than the refinement width.
pub fn lcd_complex(z: &CVector, q: &LcdQuery) -> Result<LcdBracket> {
    q.validate()?;
    check_unit(z.norm())?;
    let n = z.len();
    if n > LCD_COMPLEX_MAX_N {
        return Err(Error::config(format!(
            "two-dimensional LCD search is capped at n = {LCD_COMPLEX_MAX_N}, got {n}"
        )));
    }
    let x: Vec<f64> = z.iter().map(|c| c.re).collect();
    let y: Vec<f64> = z.iter().map(|c| c.im).collect();
    let (xx, yy, xy) = x.iter().zip(&y).fold((0.0, 0.0, 0.0), |(a, b, c), (p, r)| {
        (a + p * p, b + r * r, c + p * r)
    });
    let half_tr = 0.5 * (xx + yy);
    let sigma = (half_tr + (0.25 * (xx - yy).powi(2) + xy * xy).sqrt()).sqrt();
    let eval = |t1: f64, t2: f64| {
        let mut dist2 = 0.0;
        let mut norm2 = 0.0;
        for (a, b) in x.iter().zip(&y) {
            let w = t1 * a + t2 * b;
            let d = w - w.round();
            dist2 += d * d;
            norm2 += w * w;
        }
        (dist2.sqrt(), norm2.sqrt())
    };

    let start = q.l / sigma;
    if start >= q.theta_max {
        return Ok(LcdBracket::unresolved(q.theta_max));
    }

    let mut heap = BinaryHeap::new();
    let ring = q.grid_step.max(0.25);
    let mut r0 = start;
    while r0 < q.theta_max {
        let r1 = (r0 + ring).min(q.theta_max);
        let sectors = ((std::f64::consts::PI * r1 / ring).ceil() as usize).max(1);
        let width = std::f64::consts::PI / sectors as f64;
        for s in 0..sectors {
            heap.push(Cell {
                r0,
                r1,
                p0: s as f64 * width,
                p1: (s + 1) as f64 * width,
            });
        }
        r0 = r1;
    }

    let mut best: Option<(f64, [f64; 2])> = None;
    let mut stuck = f64::INFINITY;
    while let Some(cell) = heap.pop() {
        let cutoff = best.map_or(f64::INFINITY, |(r, _)| r);
        if cell.r0 >= cutoff - q.plane_refine_width {
            heap.push(cell);
            break;
        }
        let (c1, c2) = cell.center();
        let (fc, wc) = eval(c1, c2);
        let rad = cell.radius();
        let reach = (sigma * cell.r1).min(wc + sigma * rad);
        let gmax = q.threshold(reach);
        if gmax == 0.0 || fc - sigma * rad >= gmax {
            continue;
        }
        if rad <= q.plane_refine_width {
            stuck = stuck.min(cell.r0);
            if fc + WITNESS_MARGIN < q.threshold(wc) {
                let r = c1.hypot(c2);
                if r < cutoff {
                    best = Some((r, [c1, c2]));
                }
            }
            continue;
        }
        for child in cell.split() {
            heap.push(child);
        }
    }
    let open = heap.peek().map_or(f64::INFINITY, |c| c.r0);
    match best {
        Some((r, point)) => Ok(LcdBracket {
            lower: stuck.min(open).min(r),
            witness: Some(r),
            witness_point: Some(point),
            resolved: true,
        }),
        None => Ok(LcdBracket::unresolved(stuck.min(q.theta_max))),
    }
}

/// Whether θ satisfies the complex LCD inequality with the witness margin.
pub fn is_complex_witness(z: &CVector, theta: [f64; 2], q: &LcdQuery) -> bool {
    let w: Vec<f64> = z.iter().map(|c| theta[0] * c.re + theta[1] * c.im).collect();
    let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    lattice_distance(w) + WITNESS_MARGIN < q.threshold(norm)
}
