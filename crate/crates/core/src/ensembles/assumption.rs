//! Extraction of the (q, T) parameters of the non-degeneracy assumption
//!
//! ```text
//! sup_u P(|ξ − u| < 1) ≤ 1 − q
//! P(1 ≤ |ξ − ξ′| ≤ T) ≥ q/2
//! P(|ξ| > T)          ≤ q/2
//! ```
//!
//! q is searched on the dyadic grid 1/2, 1/4, … and T over the positive
//! integers. Finitely supported laws are evaluated exactly in rational
//! arithmetic; uniform and Gaussian laws use closed forms with a safety margin.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use statrs::function::erf::{erf, erfc};

use super::atom::{AtomDistribution, AtomKind};
use crate::rational::to_f64;

/// Smallest q tried is 2^-MAX_Q_EXPONENT.
pub const MAX_Q_EXPONENT: u32 = 30;
/// Largest T tried for continuous laws.
pub const MAX_T: u64 = 100_000;
/// Margin applied to every inequality evaluated in floating point.
pub const FLOAT_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssumptionParams {
    pub q: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub satisfied: bool,
    /// sup_u P(|ξ − u| < 1), the left side of the first inequality.
    pub window_mass: f64,
}

/// Probability queries backing the three inequalities.
trait Law {
    /// sup_u P(|ξ − u| < 1)
    fn window_mass(&self) -> f64;
    /// Smallest positive integer T with P(1 ≤ |ξ−ξ′| ≤ T) ≥ level, if any.
    fn spread_threshold(&self, level: &Level) -> Option<u64>;
    /// Smallest positive integer T with P(|ξ| > T) ≤ level.
    fn tail_threshold(&self, level: &Level) -> Option<u64>;
    /// Whether sup_u P(|ξ − u| < 1) ≤ 1 − q.
    fn window_ok(&self, q: &Level) -> bool;
}

/// A dyadic level 2^-k, kept exact for the rational evaluator.
struct Level {
    exponent: u32,
}

impl Level {
    fn exact(&self) -> BigRational {
        BigRational::new(1.into(), num_traits::pow(num_bigint::BigInt::from(2), self.exponent as usize))
    }
    fn float(&self) -> f64 {
        0.5f64.powi(self.exponent as i32)
    }
}

pub fn assumption_params(atom: &AtomDistribution) -> AssumptionParams {
    match &atom.kind {
        AtomKind::UniformPm { half_width } => search(&UniformLaw { h: *half_width }),
        AtomKind::Gaussian { sigma } => search(&GaussianLaw { sigma: *sigma }),
        _ => search(&ExactLaw::new(
            atom.finite_law().expect("finitely supported kind"),
        )),
    }
}

fn search(law: &dyn Law) -> AssumptionParams {
    let window_mass = law.window_mass();
    for k in 1..=MAX_Q_EXPONENT {
        let q = Level { exponent: k };
        if !law.window_ok(&q) {
            continue;
        }
        let half_q = Level { exponent: k + 1 };
        let (Some(t2), Some(t3)) = (law.spread_threshold(&half_q), law.tail_threshold(&half_q))
        else {
            continue;
        };
        return AssumptionParams {
            q: q.float(),
            t: t2.max(t3) as f64,
            satisfied: true,
            window_mass,
        };
    }
    AssumptionParams {
        q: 0.0,
        t: 0.0,
        satisfied: false,
        window_mass,
    }
}

/// Exact evaluator for a finitely supported law.
pub struct ExactLaw {
    law: Vec<(BigRational, BigRational)>,
    /// (|ξ − ξ′|, probability) sorted by distance.
    diffs: Vec<(BigRational, BigRational)>,
}

impl ExactLaw {
    pub fn new(law: Vec<(BigRational, BigRational)>) -> Self {
        let mut diffs: Vec<(BigRational, BigRational)> = Vec::with_capacity(law.len() * law.len());
        for (a, pa) in &law {
            for (b, pb) in &law {
                diffs.push(((a - b).abs(), pa * pb));
            }
        }
        diffs.sort_by(|x, y| x.0.cmp(&y.0));
        ExactLaw { law, diffs }
    }

    /// sup_u P(|ξ − u| < 1): the heaviest run of atoms spanning strictly less than 2.
    pub fn window_mass_exact(&self) -> BigRational {
        let two = BigRational::from_integer(2.into());
        let mut best = BigRational::zero();
        let mut acc = BigRational::zero();
        let mut lo = 0;
        for hi in 0..self.law.len() {
            acc += &self.law[hi].1;
            while &self.law[hi].0 - &self.law[lo].0 >= two {
                acc -= &self.law[lo].1;
                lo += 1;
            }
            if acc > best {
                best = acc.clone();
            }
        }
        best
    }

    /// P(1 ≤ |ξ − ξ′| ≤ t)
    pub fn spread_mass(&self, t: &BigRational) -> BigRational {
        let one = BigRational::one();
        self.diffs
            .iter()
            .filter(|(d, _)| *d >= one && d <= t)
            .map(|(_, p)| p)
            .sum()
    }

    /// P(|ξ| > t)
    pub fn tail_mass(&self, t: &BigRational) -> BigRational {
        self.law
            .iter()
            .filter(|(v, _)| v.abs() > *t)
            .map(|(_, p)| p)
            .sum()
    }

    /// Checks all three inequalities at (q, T) exactly.
    pub fn holds(&self, q: &BigRational, t: &BigRational) -> bool {
        let half_q = q / BigRational::from_integer(2.into());
        self.window_mass_exact() <= BigRational::one() - q
            && self.spread_mass(t) >= half_q
            && self.tail_mass(t) <= half_q
    }
}

impl Law for ExactLaw {
    fn window_mass(&self) -> f64 {
        to_f64(&self.window_mass_exact())
    }

    fn window_ok(&self, q: &Level) -> bool {
        self.window_mass_exact() <= BigRational::one() - q.exact()
    }

    fn spread_threshold(&self, level: &Level) -> Option<u64> {
        let target = level.exact();
        let one = BigRational::one();
        let mut acc = BigRational::zero();
        for (d, p) in self.diffs.iter().filter(|(d, _)| *d >= one) {
            acc += p;
            if acc >= target {
                return Some(ceil_positive(d));
            }
        }
        None
    }

    fn tail_threshold(&self, level: &Level) -> Option<u64> {
        let target = level.exact();
        // P(|ξ| > T) only drops at integer ceilings of the atom magnitudes.
        let mut candidates: Vec<u64> = self.law.iter().map(|(v, _)| ceil_positive(&v.abs())).collect();
        candidates.push(1);
        candidates.sort_unstable();
        candidates.dedup();
        candidates
            .into_iter()
            .find(|&t| self.tail_mass(&BigRational::from_integer(t.into())) <= target)
    }
}

fn ceil_positive(x: &BigRational) -> u64 {
    let c = x.ceil().to_integer();
    let c: u64 = c.try_into().unwrap_or(u64::MAX);
    c.max(1)
}

struct UniformLaw {
    h: f64,
}

impl UniformLaw {
    /// P(|ξ − ξ′| ≤ s): the difference has the triangular law on [−2h, 2h].
    fn diff_cdf(&self, s: f64) -> f64 {
        let w = 2.0 * self.h;
        if s >= w {
            1.0
        } else if s <= 0.0 {
            0.0
        } else {
            1.0 - (1.0 - s / w).powi(2)
        }
    }
}

impl Law for UniformLaw {
    fn window_mass(&self) -> f64 {
        (1.0 / self.h).min(1.0)
    }
    fn window_ok(&self, q: &Level) -> bool {
        self.window_mass() <= 1.0 - q.float() - FLOAT_MARGIN
    }
    fn spread_threshold(&self, level: &Level) -> Option<u64> {
        let base = self.diff_cdf(1.0);
        (1..=MAX_T).find(|&t| self.diff_cdf(t as f64) - base >= level.float() + FLOAT_MARGIN)
    }
    fn tail_threshold(&self, level: &Level) -> Option<u64> {
        (1..=MAX_T).find(|&t| (1.0 - t as f64 / self.h).max(0.0) <= level.float() - FLOAT_MARGIN)
    }
}

struct GaussianLaw {
    sigma: f64,
}

impl Law for GaussianLaw {
    fn window_mass(&self) -> f64 {
        erf(1.0 / (self.sigma * std::f64::consts::SQRT_2))
    }
    fn window_ok(&self, q: &Level) -> bool {
        self.window_mass() <= 1.0 - q.float() - FLOAT_MARGIN
    }
    fn spread_threshold(&self, level: &Level) -> Option<u64> {
        // ξ − ξ′ ~ N(0, 2σ²)
        let cdf = |s: f64| erf(s / (2.0 * self.sigma));
        let base = cdf(1.0);
        (1..=MAX_T).find(|&t| cdf(t as f64) - base >= level.float() + FLOAT_MARGIN)
    }
    fn tail_threshold(&self, level: &Level) -> Option<u64> {
        (1..=MAX_T).find(|&t| {
            erfc(t as f64 / (self.sigma * std::f64::consts::SQRT_2)) <= level.float() - FLOAT_MARGIN
        })
    }
}
