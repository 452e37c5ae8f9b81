use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, format_rational, to_f64};

/// Shape of a scalar entry law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AtomKind {
    /// ±1 with probability 1/2 each.
    Rademacher,
    /// Uniform on [−half_width, half_width].
    UniformPm { half_width: f64 },
    /// Centered normal with standard deviation `sigma`.
    Gaussian { sigma: f64 },
    /// Bernoulli(p) − p: takes 1 − p with probability p and −p otherwise.
    CenteredBernoulli { p: f64 },
    /// Finitely supported law with exact rational atoms and weights.
    Discrete {
        #[serde(with = "rational::strings")]
        values: Vec<BigRational>,
        #[serde(with = "rational::strings")]
        probs: Vec<BigRational>,
    },
}

/// A scalar entry law together with its symmetry and moment metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomDistribution {
    #[serde(flatten)]
    pub kind: AtomKind,
    pub symmetric: bool,
    pub mean: f64,
    pub variance: f64,
}

impl AtomDistribution {
    pub fn rademacher() -> Self {
        AtomDistribution {
            kind: AtomKind::Rademacher,
            symmetric: true,
            mean: 0.0,
            variance: 1.0,
        }
    }

    pub fn uniform_pm(half_width: f64) -> Result<Self> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::domain(format!(
                "uniform half-width must be positive, got {half_width}"
            )));
        }
        Ok(AtomDistribution {
            kind: AtomKind::UniformPm { half_width },
            symmetric: true,
            mean: 0.0,
            variance: half_width * half_width / 3.0,
        })
    }

    pub fn gaussian(sigma: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::domain(format!("gaussian sigma must be positive, got {sigma}")));
        }
        Ok(AtomDistribution {
            kind: AtomKind::Gaussian { sigma },
            symmetric: true,
            mean: 0.0,
            variance: sigma * sigma,
        })
    }

    pub fn centered_bernoulli(p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::domain(format!("bernoulli p must lie in (0,1), got {p}")));
        }
        Ok(AtomDistribution {
            kind: AtomKind::CenteredBernoulli { p },
            symmetric: p == 0.5,
            mean: 0.0,
            variance: p * (1.0 - p),
        })
    }

    /// Finitely supported law. Probabilities must be nonnegative and sum to one
    /// exactly. Point masses are accepted (they are useful degenerate test
    /// inputs) and are reported by [`AtomDistribution::is_degenerate`].
    pub fn discrete(values: Vec<BigRational>, probs: Vec<BigRational>) -> Result<Self> {
        if values.is_empty() || values.len() != probs.len() {
            return Err(Error::domain(
                "discrete atom needs matching, nonempty value and probability lists",
            ));
        }
        if probs.iter().any(Signed::is_negative) {
            return Err(Error::domain("discrete atom has a negative probability"));
        }
        let total: BigRational = probs.iter().sum();
        if !total.is_one() {
            return Err(Error::domain(format!(
                "discrete probabilities sum to {}, not 1",
                format_rational(&total)
            )));
        }
        let law = merge_law(values.iter().cloned().zip(probs.iter().cloned()));
        let symmetric = law
            .iter()
            .all(|(v, p)| law.get(&-v.clone()).is_some_and(|q| q == p));
        let mean: BigRational = law.iter().map(|(v, p)| v * p).sum();
        let second: BigRational = law.iter().map(|(v, p)| v * v * p).sum();
        let variance = &second - &mean * &mean;
        Ok(AtomDistribution {
            kind: AtomKind::Discrete { values, probs },
            symmetric,
            mean: to_f64(&mean),
            variance: to_f64(&variance),
        })
    }

    /// Uniform law on the given rational values (convenience for tests and configs).
    pub fn uniform_discrete(values: Vec<BigRational>) -> Result<Self> {
        let k = values.len();
        if k == 0 {
            return Err(Error::domain("empty support"));
        }
        let p = BigRational::new(1.into(), (k as i64).into());
        Self::discrete(values, vec![p; k])
    }

    pub fn point_mass(value: BigRational) -> Self {
        Self::discrete(vec![value], vec![BigRational::one()]).expect("valid point mass")
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            AtomKind::Rademacher => "rademacher",
            AtomKind::UniformPm { .. } => "uniform_pm",
            AtomKind::Gaussian { .. } => "gaussian",
            AtomKind::CenteredBernoulli { .. } => "centered_bernoulli",
            AtomKind::Discrete { .. } => "discrete",
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.variance <= 0.0
    }

    /// Exact law as sorted (value, probability) pairs for finitely supported kinds.
    ///
    /// The Bernoulli parameter is converted from its binary floating-point value
    /// exactly, so p = 0.5 yields the atoms ±1/2 with weight 1/2.
    pub fn finite_law(&self) -> Option<Vec<(BigRational, BigRational)>> {
        let law = match &self.kind {
            AtomKind::Rademacher => {
                let half = BigRational::new(1.into(), 2.into());
                merge_law([
                    (-BigRational::one(), half.clone()),
                    (BigRational::one(), half),
                ])
            }
            AtomKind::CenteredBernoulli { p } => {
                let p = rational::from_f64(*p);
                let one = BigRational::one();
                merge_law([(&one - &p, p.clone()), (-p.clone(), one - p)])
            }
            AtomKind::Discrete { values, probs } => {
                merge_law(values.iter().cloned().zip(probs.iter().cloned()))
            }
            AtomKind::UniformPm { .. } | AtomKind::Gaussian { .. } => return None,
        };
        Some(law.into_iter().filter(|(_, p)| !p.is_zero()).collect())
    }

    /// Size of the support for finitely supported kinds.
    pub fn support_size(&self) -> Option<usize> {
        self.finite_law().map(|l| l.len())
    }

    /// True when every draw is an integer, so sampled matrices admit exact paths.
    pub fn is_integer_valued(&self) -> bool {
        self.finite_law()
            .is_some_and(|law| law.iter().all(|(v, _)| v.is_integer()))
    }

    /// One draw.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.kind {
            AtomKind::Rademacher => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            AtomKind::UniformPm { half_width } => rng.random_range(-*half_width..=*half_width),
            AtomKind::Gaussian { sigma } => Normal::new(0.0, *sigma)
                .expect("validated sigma")
                .sample(rng),
            AtomKind::CenteredBernoulli { p } => {
                if rng.random::<f64>() < *p {
                    1.0 - p
                } else {
                    -p
                }
            }
            AtomKind::Discrete { values, probs } => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for (v, p) in values.iter().zip(probs) {
                    acc += to_f64(p);
                    if u < acc {
                        return to_f64(v);
                    }
                }
                // Round-off can leave the cumulative sum a hair below one.
                let last = probs.iter().rposition(|p| !p.is_zero()).unwrap_or(0);
                to_f64(&values[last])
            }
        }
    }
}

fn merge_law(
    pairs: impl IntoIterator<Item = (BigRational, BigRational)>,
) -> BTreeMap<BigRational, BigRational> {
    let mut law: BTreeMap<BigRational, BigRational> = BTreeMap::new();
    for (v, p) in pairs {
        *law.entry(v).or_insert_with(BigRational::zero) += p;
    }
    law
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::parse_rational;
    use crate::seed::{stream_rng, Stream};

    fn r(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn discrete_probabilities_must_sum_to_one() {
        assert!(AtomDistribution::discrete(vec![r("0"), r("1")], vec![r("1/2"), r("1/3")]).is_err());
        assert!(AtomDistribution::discrete(vec![r("0")], vec![r("1"), r("0")]).is_err());
        assert!(AtomDistribution::discrete(vec![r("0"), r("1")], vec![r("3/2"), r("-1/2")]).is_err());
    }

    #[test]
    fn discrete_symmetry_is_exact() {
        let sym = AtomDistribution::discrete(
            vec![r("-2"), r("0"), r("2")],
            vec![r("1/4"), r("1/2"), r("1/4")],
        )
        .unwrap();
        assert!(sym.symmetric);
        assert_eq!(sym.mean, 0.0);
        assert_eq!(sym.variance, 2.0);
        let skew = AtomDistribution::discrete(vec![r("-1"), r("2")], vec![r("2/3"), r("1/3")]).unwrap();
        assert!(!skew.symmetric);
        assert_eq!(skew.mean, 0.0);
    }

    #[test]
    fn rademacher_draws_are_signs() {
        let atom = AtomDistribution::rademacher();
        let mut rng = stream_rng(3, Stream::Vector);
        let mut seen = [false; 2];
        for _ in 0..200 {
            let x = atom.sample(&mut rng);
            assert!(x == 1.0 || x == -1.0);
            seen[(x > 0.0) as usize] = true;
        }
        assert!(seen[0] && seen[1]);
    }

    #[test]
    fn bernoulli_law_is_centered() {
        let atom = AtomDistribution::centered_bernoulli(0.5).unwrap();
        let law = atom.finite_law().unwrap();
        assert_eq!(law, vec![(r("-1/2"), r("1/2")), (r("1/2"), r("1/2"))]);
        assert!(atom.symmetric);
        assert!(!AtomDistribution::centered_bernoulli(0.25).unwrap().symmetric);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(AtomDistribution::gaussian(0.0).is_err());
        assert!(AtomDistribution::uniform_pm(-1.0).is_err());
        assert!(AtomDistribution::centered_bernoulli(1.0).is_err());
    }

    #[test]
    fn point_mass_is_degenerate_and_integer() {
        let atom = AtomDistribution::point_mass(r("1"));
        assert!(atom.is_degenerate());
        assert!(atom.is_integer_valued());
        let mut rng = stream_rng(1, Stream::Vector);
        assert_eq!(atom.sample(&mut rng), 1.0);
    }
}
