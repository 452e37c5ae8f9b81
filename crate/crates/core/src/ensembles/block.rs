use nalgebra::Complex;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::atom::{AtomDistribution, AtomKind};
use super::sample::{Diagonal, EnsembleKind, EnsembleSpec};
use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational};

/// Flat key-value form of an [`EnsembleSpec`], as it appears in the
/// `[ensemble]` section of a campaign file.
///
/// ```toml
/// [ensemble]
/// n = 30
/// atom = "rademacher"      # uniform_pm | gaussian | centered_bernoulli | discrete
/// diagonal = "iid"         # or "zero"
///
/// [ensemble.graph]         # present instead of `atom` for digraph ensembles
/// p = 0.5
/// loops = false
/// ```
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleBlock {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atom: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub half_width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<RationalLit>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probs: Option<Vec<RationalLit>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagonal: Option<Diagonal>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift_re: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift_im: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphBlock>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphBlock {
    pub p: f64,
    #[serde(default)]
    pub loops: bool,
}

/// A rational written either as an integer or as a string such as `"1/3"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalLit {
    Int(i64),
    Text(String),
}

impl RationalLit {
    fn value(&self) -> Result<BigRational> {
        match self {
            RationalLit::Int(i) => Ok(BigRational::from_integer((*i).into())),
            RationalLit::Text(s) => parse_rational(s),
        }
    }
}

impl TryFrom<EnsembleBlock> for EnsembleSpec {
    type Error = Error;

    fn try_from(b: EnsembleBlock) -> Result<Self> {
        let spec = match (&b.atom, &b.graph) {
            (Some(_), Some(_)) => {
                return Err(Error::config(
                    "ensemble sets both `atom` and `[ensemble.graph]`; exactly one is allowed",
                ))
            }
            (None, None) => {
                return Err(Error::config(
                    "ensemble needs either `atom` or an `[ensemble.graph]` section",
                ))
            }
            (None, Some(g)) => {
                let stray = [
                    b.half_width.is_some(),
                    b.sigma.is_some(),
                    b.p.is_some(),
                    b.values.is_some(),
                    b.probs.is_some(),
                    b.diagonal.is_some(),
                    b.shift_re.is_some(),
                    b.shift_im.is_some(),
                ];
                if stray.iter().any(|&s| s) {
                    return Err(Error::config("atom parameters given for a digraph ensemble"));
                }
                EnsembleSpec::digraph(b.n, g.p, g.loops)
            }
            (Some(name), None) => {
                let atom = atom_from_block(name, &b)?;
                let shift = match (b.shift_re, b.shift_im) {
                    (None, None) => None,
                    (re, im) => Some(Complex::new(re.unwrap_or(0.0), im.unwrap_or(0.0))),
                };
                EnsembleSpec {
                    n: b.n,
                    kind: EnsembleKind::Iid {
                        atom,
                        diagonal: b.diagonal.unwrap_or_default(),
                        shift,
                    },
                }
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn atom_from_block(name: &str, b: &EnsembleBlock) -> Result<AtomDistribution> {
    let need = |v: Option<f64>, key: &str| {
        v.ok_or_else(|| Error::config(format!("atom {name} needs `{key}`")))
    };
    let unexpected = |present: bool, key: &str| -> Result<()> {
        if present {
            Err(Error::config(format!("key `{key}` does not apply to atom {name}")))
        } else {
            Ok(())
        }
    };
    let no_discrete = || -> Result<()> {
        unexpected(b.values.is_some(), "values")?;
        unexpected(b.probs.is_some(), "probs")
    };
    match name {
        "rademacher" => {
            no_discrete()?;
            unexpected(b.half_width.is_some(), "half_width")?;
            unexpected(b.sigma.is_some(), "sigma")?;
            unexpected(b.p.is_some(), "p")?;
            Ok(AtomDistribution::rademacher())
        }
        "uniform_pm" => {
            no_discrete()?;
            AtomDistribution::uniform_pm(need(b.half_width, "half_width")?)
        }
        "gaussian" => {
            no_discrete()?;
            AtomDistribution::gaussian(b.sigma.unwrap_or(1.0))
        }
        "centered_bernoulli" => {
            no_discrete()?;
            AtomDistribution::centered_bernoulli(need(b.p, "p")?)
        }
        "discrete" => {
            let values = b
                .values
                .as_ref()
                .ok_or_else(|| Error::config("discrete atom needs `values`"))?
                .iter()
                .map(RationalLit::value)
                .collect::<Result<Vec<_>>>()?;
            let probs = match &b.probs {
                Some(p) => p.iter().map(RationalLit::value).collect::<Result<Vec<_>>>()?,
                None => {
                    let k = values.len().max(1) as i64;
                    vec![BigRational::new(1.into(), k.into()); values.len()]
                }
            };
            AtomDistribution::discrete(values, probs)
        }
        other => Err(Error::config(format!("unknown atom kind {other:?}"))),
    }
}

impl From<&EnsembleSpec> for EnsembleBlock {
    fn from(spec: &EnsembleSpec) -> Self {
        let mut b = EnsembleBlock {
            n: spec.n,
            ..Default::default()
        };
        match &spec.kind {
            EnsembleKind::Digraph { p, loops } => {
                b.graph = Some(GraphBlock {
                    p: *p,
                    loops: *loops,
                })
            }
            EnsembleKind::Iid {
                atom,
                diagonal,
                shift,
            } => {
                b.atom = Some(atom.name().to_string());
                match &atom.kind {
                    AtomKind::Rademacher => {}
                    AtomKind::UniformPm { half_width } => b.half_width = Some(*half_width),
                    AtomKind::Gaussian { sigma } => b.sigma = Some(*sigma),
                    AtomKind::CenteredBernoulli { p } => b.p = Some(*p),
                    AtomKind::Discrete { values, probs } => {
                        let lit = |v: &BigRational| RationalLit::Text(format_rational(v));
                        b.values = Some(values.iter().map(lit).collect());
                        b.probs = Some(probs.iter().map(lit).collect());
                    }
                }
                b.diagonal = Some(*diagonal);
                if let Some(s) = shift {
                    b.shift_re = Some(s.re);
                    b.shift_im = Some(s.im);
                }
            }
        }
        b
    }
}
