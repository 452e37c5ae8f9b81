//! Campaign files.
//!
//! A campaign is a small TOML document. Top-level keys name the run; the
//! `[experiment]` table picks what each trial measures; `[ensemble]` (with an
//! optional `[ensemble.graph]`) describes the random matrix; `[thresholds]`
//! holds every numeric tolerance and the acceptance targets; `[output]` says
//! where files go. Unknown keys anywhere are errors.
//!
//! ```toml
//! name = "allones-30"
//! trials = 200
//! master_seed = 7
//!
//! [experiment]
//! kind = "controllability_allones"
//! mode = "exact"
//!
//! [ensemble]
//! n = 30
//! atom = "rademacher"
//!
//! [thresholds]
//! min_pass = 198
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::control::ControlMode;
use crate::ensembles::{EnsembleBlock, EnsembleSpec};
use crate::error::{Error, Result};
use crate::seed::sha256_hex;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "vector", rename_all = "snake_case")]
pub enum VectorSpec {
    /// The all-ones vector.
    Ones,
    /// The standard basis vector with a 1 at `index` (0-based).
    Basis { index: usize },
    /// Independent random signs.
    Rademacher,
    /// Independent entries uniform on [low, high].
    Uniform { low: f64, high: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Experiment {
    SimpleSpectrum,
    GapDistribution,
    ControllabilityAllones { mode: ControlMode },
    ControllabilityBasis { mode: ControlMode, index: usize },
    ControllabilityRandomB { mode: ControlMode },
    EigvecSmallball { vector: VectorSpec },
    ScaledSmallball { vector: VectorSpec },
    DigraphOutlier,
    DigraphPerron,
    StrongConnectivity,
    SignSymmetrization,
}

impl Experiment {
    pub fn kind(&self) -> &'static str {
        match self {
            Experiment::SimpleSpectrum => "simple_spectrum",
            Experiment::GapDistribution => "gap_distribution",
            Experiment::ControllabilityAllones { .. } => "controllability_allones",
            Experiment::ControllabilityBasis { .. } => "controllability_basis",
            Experiment::ControllabilityRandomB { .. } => "controllability_random_b",
            Experiment::EigvecSmallball { .. } => "eigvec_smallball",
            Experiment::ScaledSmallball { .. } => "scaled_smallball",
            Experiment::DigraphOutlier => "digraph_outlier",
            Experiment::DigraphPerron => "digraph_perron",
            Experiment::StrongConnectivity => "strong_connectivity",
            Experiment::SignSymmetrization => "sign_symmetrization",
        }
    }

    /// Tolerances this experiment reads, with their defaults.
    pub fn default_thresholds(&self) -> &'static [(&'static str, f64)] {
        match self {
            Experiment::SimpleSpectrum => &[("gap_tol", 1e-8)],
            Experiment::GapDistribution => &[("s", 0.0)],
            Experiment::ControllabilityAllones { .. }
            | Experiment::ControllabilityBasis { .. }
            | Experiment::ControllabilityRandomB { .. } => &[("pbh_tol", 1e-8)],
            Experiment::EigvecSmallball { .. } => &[("t", 1e-6), ("outlier_radius", 2.0)],
            Experiment::ScaledSmallball { .. } => {
                &[("t", 1e-6), ("outlier_radius", 2.0), ("bound", 2.0)]
            }
            Experiment::DigraphOutlier => &[("delta", 0.2), ("distance_factor", 3.0)],
            Experiment::DigraphPerron => &[("positive_tol", 1e-10)],
            Experiment::StrongConnectivity | Experiment::SignSymmetrization => &[],
        }
    }

    /// Column names of the per-trial measurements, in output order.
    pub fn measure_names(&self) -> &'static [&'static str] {
        match self {
            Experiment::SimpleSpectrum => &["simple", "exact_path", "delta", "normalized_delta"],
            Experiment::GapDistribution => &["delta", "normalized_delta"],
            Experiment::ControllabilityAllones { .. }
            | Experiment::ControllabilityBasis { .. }
            | Experiment::ControllabilityRandomB { .. } => &[
                "controllable",
                "numeric_rank",
                "exact_rank",
                "pbh_min_overlap",
                "disagreement",
            ],
            Experiment::EigvecSmallball { .. } => {
                &["min_overlap", "argmin_re", "argmin_im", "excluded"]
            }
            Experiment::ScaledSmallball { .. } => &[
                "min_overlap",
                "argmin_re",
                "argmin_im",
                "excluded",
                "delocalized_violations",
            ],
            Experiment::DigraphOutlier => {
                &["outside_count", "outlier_re", "outlier_im", "distance_to_pn"]
            }
            Experiment::DigraphPerron => &[
                "strongly_connected",
                "scc_count",
                "top_re",
                "top_im",
                "top_is_real",
                "top_is_simple",
                "modulus_gap",
                "min_entry",
            ],
            Experiment::StrongConnectivity => &["strongly_connected", "scc_count"],
            Experiment::SignSymmetrization => &["charpoly_equal", "rank_equal", "kalman_rank"],
        }
    }

    fn check_ensemble(&self, spec: &EnsembleSpec) -> Result<()> {
        let needs_digraph = matches!(
            self,
            Experiment::DigraphOutlier | Experiment::DigraphPerron | Experiment::StrongConnectivity
        );
        if let crate::ensembles::EnsembleKind::Iid { shift: Some(s), .. } = &spec.kind {
            if s.im != 0.0 {
                return Err(Error::config("campaigns need a real ensemble (shift_im = 0)"));
            }
        }
        if needs_digraph && !spec.is_digraph() {
            return Err(Error::config(format!(
                "experiment {} needs a digraph ensemble",
                self.kind()
            )));
        }
        let exact = match self {
            Experiment::SignSymmetrization => true,
            Experiment::ControllabilityAllones { mode }
            | Experiment::ControllabilityBasis { mode, .. }
            | Experiment::ControllabilityRandomB { mode } => *mode == ControlMode::Exact,
            _ => false,
        };
        if exact && !spec.is_integer_valued() {
            return Err(Error::config(format!(
                "experiment {} needs an integer-valued ensemble",
                self.kind()
            )));
        }
        if let Experiment::ControllabilityBasis { index, .. } = self {
            if *index >= spec.n {
                return Err(Error::config(format!(
                    "basis index {index} out of range for n = {}",
                    spec.n
                )));
            }
        }
        if let Experiment::EigvecSmallball { vector } | Experiment::ScaledSmallball { vector } = self {
            match vector {
                VectorSpec::Basis { index } if *index >= spec.n => {
                    return Err(Error::config(format!("basis index {index} out of range")))
                }
                VectorSpec::Uniform { low, high } if !(low.is_finite() && high.is_finite() && low <= high) => {
                    return Err(Error::config("uniform vector needs low <= high"))
                }
                _ => {}
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
    pub formats: Vec<OutputFormat>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            dir: None,
            formats: vec![OutputFormat::Csv, OutputFormat::Json],
        }
    }
}

/// Keys that decide acceptance rather than tune a measurement.
pub const ACCEPTANCE_KEYS: [&str; 2] = ["min_pass", "min_pass_fraction"];

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub name: String,
    pub ensemble: EnsembleSpec,
    pub trials: u64,
    pub master_seed: u64,
    pub experiment: Experiment,
    /// Every tolerance the experiment reads, with defaults filled in, plus any acceptance keys.
    pub thresholds: BTreeMap<String, f64>,
    pub output: OutputConfig,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    name: String,
    trials: u64,
    master_seed: u64,
    experiment: ExperimentBlock,
    ensemble: EnsembleBlock,
    #[serde(default)]
    thresholds: BTreeMap<String, f64>,
    #[serde(default)]
    output: Option<RawOutput>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: Option<PathBuf>,
    formats: Option<Vec<OutputFormat>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExperimentBlock {
    kind: String,
    mode: Option<ControlMode>,
    index: Option<usize>,
    vector: Option<String>,
    low: Option<f64>,
    high: Option<f64>,
}

impl ExperimentBlock {
    fn into_experiment(self) -> Result<Experiment> {
        let kind = self.kind.as_str();
        let uses_mode = kind.starts_with("controllability_");
        let uses_vector = matches!(kind, "eigvec_smallball" | "scaled_smallball");
        if self.mode.is_some() && !uses_mode {
            return Err(Error::config(format!("`mode` does not apply to {kind}")));
        }
        if self.vector.is_some() && !uses_vector {
            return Err(Error::config(format!("`vector` does not apply to {kind}")));
        }
        let uses_bounds = uses_vector && self.vector.as_deref() == Some("uniform");
        if (self.low.is_some() || self.high.is_some()) && !uses_bounds {
            return Err(Error::config("`low`/`high` only apply to vector = \"uniform\""));
        }
        let uses_index = kind == "controllability_basis"
            || (uses_vector && self.vector.as_deref() == Some("basis"));
        if self.index.is_some() && !uses_index {
            return Err(Error::config(format!("`index` does not apply here ({kind})")));
        }
        let mode = self.mode.unwrap_or(ControlMode::Exact);
        let vector = || -> Result<VectorSpec> {
            match self.vector.as_deref().unwrap_or("ones") {
                "ones" => Ok(VectorSpec::Ones),
                "rademacher" => Ok(VectorSpec::Rademacher),
                "basis" => Ok(VectorSpec::Basis {
                    index: self.index.unwrap_or(0),
                }),
                "uniform" => Ok(VectorSpec::Uniform {
                    low: self.low.ok_or_else(|| Error::config("uniform vector needs `low`"))?,
                    high: self.high.ok_or_else(|| Error::config("uniform vector needs `high`"))?,
                }),
                other => Err(Error::config(format!("unknown vector {other:?}"))),
            }
        };
        Ok(match kind {
            "simple_spectrum" => Experiment::SimpleSpectrum,
            "gap_distribution" => Experiment::GapDistribution,
            "controllability_allones" => Experiment::ControllabilityAllones { mode },
            "controllability_basis" => Experiment::ControllabilityBasis {
                mode,
                index: self.index.unwrap_or(0),
            },
            "controllability_random_b" => Experiment::ControllabilityRandomB { mode },
            "eigvec_smallball" => Experiment::EigvecSmallball { vector: vector()? },
            "scaled_smallball" => Experiment::ScaledSmallball { vector: vector()? },
            "digraph_outlier" => Experiment::DigraphOutlier,
            "digraph_perron" => Experiment::DigraphPerron,
            "strong_connectivity" => Experiment::StrongConnectivity,
            "sign_symmetrization" => Experiment::SignSymmetrization,
            other => return Err(Error::config(format!("unknown experiment kind {other:?}"))),
        })
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let experiment = raw.experiment.into_experiment()?;
        let ensemble = EnsembleSpec::try_from(raw.ensemble)?;
        let output = match raw.output {
            None => OutputConfig::default(),
            Some(o) => OutputConfig {
                dir: o.dir,
                formats: o.formats.unwrap_or_else(|| OutputConfig::default().formats),
            },
        };
        Self::new(raw.name, ensemble, raw.trials, raw.master_seed, experiment, raw.thresholds, output)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    /// Validates and fills in default thresholds.
    pub fn new(
        name: String,
        ensemble: EnsembleSpec,
        trials: u64,
        master_seed: u64,
        experiment: Experiment,
        mut thresholds: BTreeMap<String, f64>,
        output: OutputConfig,
    ) -> Result<Self> {
        if name.is_empty() || name.contains(['/', '\\']) {
            return Err(Error::config(format!("campaign name {name:?} is not a valid file stem")));
        }
        if trials == 0 {
            return Err(Error::config("a campaign needs at least one trial"));
        }
        ensemble.validate()?;
        experiment.check_ensemble(&ensemble)?;
        let known = experiment.default_thresholds();
        for (key, value) in &thresholds {
            if !ACCEPTANCE_KEYS.contains(&key.as_str()) && !known.iter().any(|(k, _)| k == key) {
                return Err(Error::config(format!(
                    "threshold `{key}` is not used by experiment {}",
                    experiment.kind()
                )));
            }
            if !value.is_finite() {
                return Err(Error::config(format!("threshold `{key}` must be finite")));
            }
        }
        for (key, default) in known {
            thresholds.entry((*key).to_string()).or_insert(*default);
        }
        Ok(ExperimentConfig {
            name,
            ensemble,
            trials,
            master_seed,
            experiment,
            thresholds,
            output,
        })
    }

    /// A tolerance the experiment declared (always present after construction).
    pub fn threshold(&self, key: &str) -> f64 {
        self.thresholds[key]
    }

    /// SHA-256 of the canonical JSON form of everything that affects results
    /// (output location excluded).
    pub fn hash(&self) -> String {
        #[derive(Serialize)]
        struct Canonical<'a> {
            name: &'a str,
            ensemble: EnsembleBlock,
            trials: u64,
            master_seed: u64,
            experiment: &'a Experiment,
            thresholds: &'a BTreeMap<String, f64>,
        }
        let c = Canonical {
            name: &self.name,
            ensemble: EnsembleBlock::from(&self.ensemble),
            trials: self.trials,
            master_seed: self.master_seed,
            experiment: &self.experiment,
            thresholds: &self.thresholds,
        };
        sha256_hex(serde_json::to_string(&c).expect("serializable").as_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
name = "t"
trials = 3
master_seed = 1

[experiment]
kind = "controllability_allones"

[ensemble]
n = 4
atom = "rademacher"
"#;

    #[test]
    fn parses_and_injects_defaults() {
        let c = ExperimentConfig::from_toml_str(BASE).unwrap();
        assert_eq!(c.threshold("pbh_tol"), 1e-8);
        assert_eq!(
            c.experiment,
            Experiment::ControllabilityAllones {
                mode: ControlMode::Exact
            }
        );
        assert_eq!(c.hash(), ExperimentConfig::from_toml_str(BASE).unwrap().hash());
    }

    #[test]
    fn rejects_typos_and_mismatches() {
        let typo = BASE.replace("trials", "trails");
        assert!(ExperimentConfig::from_toml_str(&typo).is_err());
        let stray = format!("{BASE}\n[thresholds]\nt = 0.1\n");
        assert!(ExperimentConfig::from_toml_str(&stray).is_err());
        let graph = BASE.replace("controllability_allones", "digraph_perron");
        assert!(matches!(ExperimentConfig::from_toml_str(&graph), Err(Error::Config(_))));
        let gauss = BASE.replace("\"rademacher\"", "\"gaussian\"");
        assert!(matches!(ExperimentConfig::from_toml_str(&gauss), Err(Error::Config(_))));
        let zero = BASE.replace("trials = 3", "trials = 0");
        assert!(ExperimentConfig::from_toml_str(&zero).is_err());
    }
}
