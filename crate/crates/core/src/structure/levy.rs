//! Lévy concentration ρ(z, t) = sup_r ℙ(|ξ·z − r| ≤ t).
//!
//! On a finite point set with weights the supremum over centers is a
//! maximum-weight covering problem. On a line it is a sliding window of width
//! 2t. In the plane some optimal disk has a point on its boundary, so it
//! suffices to rotate a disk around each point and sweep the angular arcs in
//! which each neighbor is covered.

use std::collections::HashMap;
use std::f64::consts::PI;

use nalgebra::Complex;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::vectors::CVector;
use crate::ensembles::AtomDistribution;
use crate::error::{Error, Result};
use crate::seed::{stream_rng, Stream};
use crate::stats::wilson_half_width;

/// Largest number of outcomes the exact enumerator will visit.
pub const ENUMERATION_CAP: u64 = 10_000_000;
pub const MIN_MC_SAMPLES: usize = 1000;
/// Relative slack when deciding whether a point lies on a window or disk boundary.
pub const BOUNDARY_SLACK: f64 = 1e-12;
/// Work budget (point-neighbor pairs) for the exact planar sweep on Monte Carlo samples.
const SWEEP_BUDGET: u64 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LevyMode {
    ExactEnumeration,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LevyMethod {
    /// Exact sup over a line.
    SlidingWindow,
    /// Exact sup over the plane.
    DiskSweep,
    /// Max over a lattice of centers with spacing t; a lower bound on the empirical sup.
    GridLowerBound,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevyEstimate {
    pub t: f64,
    pub value: f64,
    pub mode: LevyMode,
    pub method: LevyMethod,
    pub sample_count: u64,
    pub half_width: f64,
    /// Exact probability as a reduced fraction, for enumerations.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "crate::rational::opt_string")]
    pub exact: Option<BigRational>,
}

fn is_real_vector(z: &CVector) -> bool {
    z.iter().all(|c| c.im == 0.0)
}

fn check_t(t: f64) -> Result<()> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::domain(format!("radius must be finite and >= 0, got {t}")));
    }
    Ok(())
}

/// Exact ρ(z, t) for a finite discrete atom by enumerating all outcomes.
pub fn levy_exact(z: &CVector, t: f64, atom: &AtomDistribution) -> Result<LevyEstimate> {
    check_t(t)?;
    let law = atom
        .finite_law()
        .ok_or_else(|| Error::config(format!("atom {} is not finite discrete; use levy_mc", atom.name())))?;
    let n = z.len();
    let k = law.len() as u64;
    let total = (0..n).try_fold(1u64, |acc, _| acc.checked_mul(k).filter(|&x| x <= ENUMERATION_CAP));
    let Some(total) = total else {
        return Err(Error::config(format!(
            "{k}^{n} outcomes exceed the enumeration cap {ENUMERATION_CAP}; use levy_mc"
        )));
    };

    // Integer weights over a common denominator.
    let denom = law.iter().fold(BigInt::one(), |acc, (_, p)| acc.lcm(p.denom()));
    let weights: Vec<u128> = law
        .iter()
        .map(|(_, p)| (p.numer() * (&denom / p.denom())).to_u128())
        .collect::<Option<_>>()
        .ok_or_else(|| Error::config("atom probabilities have an oversized denominator"))?;
    let values: Vec<f64> = law.iter().map(|(v, _)| crate::rational::to_f64(v)).collect();
    let overflow = || Error::config("outcome weights overflow 128 bits; use levy_mc");

    let mut points: Vec<(Complex<f64>, u128)> = Vec::with_capacity(total as usize);
    points.push((Complex::new(0.0, 0.0), 1));
    for zi in z.iter() {
        let mut next = Vec::with_capacity(points.len() * law.len());
        for &(s, w) in &points {
            for (v, &wv) in values.iter().zip(&weights) {
                next.push((s + zi * *v, w.checked_mul(wv).ok_or_else(overflow)?));
            }
        }
        points = next;
    }
    let best = if is_real_vector(z) {
        let line: Vec<(f64, u128)> = points.iter().map(|&(s, w)| (s.re, w)).collect();
        max_window(&line, t)
    } else {
        max_disk(&points, t)
    };
    let denom_n = num_traits::pow(denom, n);
    let exact = BigRational::new(BigInt::from(best), denom_n);
    Ok(LevyEstimate {
        t,
        value: crate::rational::to_f64(&exact),
        mode: LevyMode::ExactEnumeration,
        method: if is_real_vector(z) {
            LevyMethod::SlidingWindow
        } else {
            LevyMethod::DiskSweep
        },
        sample_count: total,
        half_width: 0.0,
        exact: Some(exact),
    })
}

/// Monte Carlo estimate of ρ(z, t) from `samples` draws of ξ·z.
pub fn levy_mc(
    z: &CVector,
    t: f64,
    atom: &AtomDistribution,
    samples: usize,
    seed: u64,
) -> Result<LevyEstimate> {
    check_t(t)?;
    if samples < MIN_MC_SAMPLES {
        return Err(Error::config(format!(
            "Monte Carlo concentration needs at least {MIN_MC_SAMPLES} samples, got {samples}"
        )));
    }
    let draws = draw_sums(z, atom, samples, seed);
    levy_from_samples(z, &draws, t)
}

/// Draws ξ·z for `samples` independent atom vectors ξ.
pub fn draw_sums(z: &CVector, atom: &AtomDistribution, samples: usize, seed: u64) -> Vec<Complex<f64>> {
    let mut rng = stream_rng(seed, Stream::Vector);
    (0..samples)
        .map(|_| {
            z.iter()
                .fold(Complex::new(0.0, 0.0), |acc, zi| acc + zi * atom.sample(&mut rng))
        })
        .collect()
}

/// Empirical concentration of a fixed sample; the same sample at two radii
/// gives monotone values.
pub fn levy_from_samples(z: &CVector, draws: &[Complex<f64>], t: f64) -> Result<LevyEstimate> {
    check_t(t)?;
    let m = draws.len();
    if m == 0 {
        return Err(Error::domain("no samples"));
    }
    let (count, method) = if is_real_vector(z) {
        let line: Vec<(f64, u128)> = draws.iter().map(|s| (s.re, 1)).collect();
        (max_window(&line, t), LevyMethod::SlidingWindow)
    } else {
        let merged = merge_identical(draws);
        if sweep_work(&merged, t) <= SWEEP_BUDGET {
            (max_disk(&merged, t), LevyMethod::DiskSweep)
        } else {
            (grid_lower_bound(draws, t), LevyMethod::GridLowerBound)
        }
    };
    let count = count as u64;
    Ok(LevyEstimate {
        t,
        value: count as f64 / m as f64,
        mode: LevyMode::MonteCarlo,
        method,
        sample_count: m as u64,
        half_width: wilson_half_width(count, m as u64)?,
        exact: None,
    })
}

fn merge_identical(draws: &[Complex<f64>]) -> Vec<(Complex<f64>, u128)> {
    let mut counts: HashMap<(u64, u64), (Complex<f64>, u128)> = HashMap::new();
    for s in draws {
        let key = ((s.re + 0.0).to_bits(), (s.im + 0.0).to_bits());
        counts.entry(key).or_insert((*s, 0)).1 += 1;
    }
    let mut out: Vec<_> = counts.into_values().collect();
    out.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    out
}

fn scale_of<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    xs.into_iter().fold(1.0f64, |m, x| m.max(x.abs()))
}

/// Heaviest set of points inside a closed window of width 2t.
fn max_window(points: &[(f64, u128)], t: f64) -> u128 {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let reach = 2.0 * t + BOUNDARY_SLACK * scale_of(pts.iter().map(|p| p.0));
    let mut best = 0u128;
    let mut acc = 0u128;
    let mut lo = 0;
    for hi in 0..pts.len() {
        acc += pts[hi].1;
        while pts[hi].0 - pts[lo].0 > reach {
            acc -= pts[lo].1;
            lo += 1;
        }
        best = best.max(acc);
    }
    best
}

type Grid = HashMap<(i64, i64), Vec<usize>>;

fn bucket(points: &[(Complex<f64>, u128)], cell: f64) -> Grid {
    let mut grid: Grid = HashMap::new();
    for (i, (p, _)) in points.iter().enumerate() {
        grid.entry(cell_key(*p, cell)).or_default().push(i);
    }
    grid
}

fn cell_key(p: Complex<f64>, cell: f64) -> (i64, i64) {
    ((p.re / cell).floor() as i64, (p.im / cell).floor() as i64)
}

fn neighbors<'a>(grid: &'a Grid, key: (i64, i64)) -> impl Iterator<Item = usize> + 'a {
    (-1..=1).flat_map(move |dx| {
        (-1..=1).flat_map(move |dy| {
            grid.get(&(key.0 + dx, key.1 + dy))
                .into_iter()
                .flat_map(|v| v.iter().copied())
        })
    })
}

fn sweep_work(points: &[(Complex<f64>, u128)], t: f64) -> u64 {
    if t == 0.0 {
        return points.len() as u64;
    }
    let grid = bucket(points, 2.0 * t);
    grid.keys()
        .map(|&key| {
            let own = grid[&key].len() as u64;
            own * neighbors(&grid, key).count() as u64
        })
        .sum()
}

/// Heaviest set of points covered by a closed disk of radius t.
fn max_disk(points: &[(Complex<f64>, u128)], t: f64) -> u128 {
    let scale = scale_of(points.iter().flat_map(|p| [p.0.re, p.0.im]));
    let slack = BOUNDARY_SLACK * scale;
    if t == 0.0 {
        // Only coincident points share a disk of radius zero.
        let grid = bucket(points, slack.max(f64::MIN_POSITIVE));
        return points
            .iter()
            .map(|(p, _)| {
                neighbors(&grid, cell_key(*p, slack.max(f64::MIN_POSITIVE)))
                    .filter(|&j| (points[j].0 - p).norm() <= slack)
                    .map(|j| points[j].1)
                    .sum::<u128>()
            })
            .max()
            .unwrap_or(0);
    }
    let diameter = 2.0 * t;
    let grid = bucket(points, diameter);
    let mut best = 0u128;
    let mut events: Vec<(f64, i8, u128)> = Vec::new();
    for (i, &(p, wp)) in points.iter().enumerate() {
        events.clear();
        let mut always = wp;
        for j in neighbors(&grid, cell_key(p, diameter)) {
            if j == i {
                continue;
            }
            let (q, wq) = points[j];
            let d = (q - p).norm();
            if d <= slack {
                always += wq;
                continue;
            }
            if d > diameter + slack {
                continue;
            }
            let half = (d / diameter).min(1.0).acos();
            let dir = (q - p).arg();
            // Closed arcs: widen by the slack so tangent disks still count.
            let width = 2.0 * (half + slack / diameter);
            let s = (dir - half - slack / diameter).rem_euclid(2.0 * PI);
            let e = s + width;
            if e > 2.0 * PI {
                events.push((s, 0, wq));
                events.push((2.0 * PI, 1, wq));
                events.push((0.0, 0, wq));
                events.push((e - 2.0 * PI, 1, wq));
            } else {
                events.push((s, 0, wq));
                events.push((e, 1, wq));
            }
        }
        // Starts sort before ends at equal angles.
        events.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut acc = 0u128;
        let mut local = 0u128;
        for &(_, kind, w) in &events {
            if kind == 0 {
                acc += w;
                local = local.max(acc);
            } else {
                acc -= w;
            }
        }
        best = best.max(always + local);
    }
    best
}

/// Max over lattice centers (spacing t, anchored at the origin) of the
/// number of samples within distance t.
fn grid_lower_bound(draws: &[Complex<f64>], t: f64) -> u128 {
    if t == 0.0 {
        return merge_identical(draws).iter().map(|p| p.1).max().unwrap_or(0);
    }
    let mut counts: HashMap<(i64, i64), u128> = HashMap::new();
    for s in draws {
        let (kx, ky) = ((s.re / t).round() as i64, (s.im / t).round() as i64);
        for dx in -1..=1 {
            for dy in -1..=1 {
                let c = Complex::new((kx + dx) as f64 * t, (ky + dy) as f64 * t);
                if (s - c).norm() <= t * (1.0 + BOUNDARY_SLACK) {
                    *counts.entry((kx + dx, ky + dy)).or_insert(0) += 1;
                }
            }
        }
    }
    counts.into_values().max().unwrap_or(0)
}

/// Whether a probability computed exactly equals p/q.
pub fn exact_equals(est: &LevyEstimate, numer: i64, denom: i64) -> bool {
    est.exact
        .as_ref()
        .is_some_and(|e| *e == BigRational::new(numer.into(), denom.into()))
}

impl LevyEstimate {
    pub fn is_exact_zero(&self) -> bool {
        self.exact.as_ref().is_some_and(Zero::is_zero)
    }
}
