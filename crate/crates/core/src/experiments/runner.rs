use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use nalgebra::DVector;
use num_bigint::BigInt;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{Experiment, ExperimentConfig, VectorSpec, ACCEPTANCE_KEYS};
use crate::control::{is_controllable_exact, is_controllable_with, ControlTolerances};
use crate::ensembles::{sample_matrix, EnsembleKind};
use crate::error::{Error, Result};
use crate::exact::IntMatrix;
use crate::graph::{outlier_check, perron_check_matrix, strongly_connected};
use crate::seed::{derive_child_seed, derive_trial_seed, stream_rng, Stream};
use crate::spectral::{
    charpoly_exact, eigenvalues, min_gap_of, right_eigenpairs, simple_spectrum_exact, DEFAULT_TOL,
};
use crate::stats::{min_median_max, wilson_interval};
use crate::structure::{complexify, delocalized_check};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_index: u64,
    pub derived_seed: u64,
    pub pass: bool,
    /// Error tag when the trial failed to evaluate.
    pub error: Option<String>,
    pub error_message: Option<String>,
    pub measures: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub count: usize,
    pub min: f64,
    pub median: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcceptanceCheck {
    pub key: String,
    pub required: f64,
    pub observed: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignSummary {
    pub schema_version: u32,
    pub name: String,
    pub experiment: String,
    pub config_hash: String,
    pub master_seed: u64,
    pub trial_count: u64,
    pub pass_count: u64,
    pub pass_fraction: f64,
    pub wilson_interval_95: (f64, f64),
    pub error_count: u64,
    pub error_tags: BTreeMap<String, u64>,
    pub aggregates: BTreeMap<String, Aggregate>,
    pub acceptance: Vec<AcceptanceCheck>,
    pub accepted: bool,
    /// Seconds spent running trials. Left out of record files, which must be
    /// byte-identical across runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Campaign {
    pub records: Vec<TrialRecord>,
    pub summary: CampaignSummary,
}

/// Runs every trial of `config` on a pool of `workers` threads.
///
/// Each trial is a pure function of its derived seed, and results are
/// collected in trial order, so the records do not depend on `workers`.
pub fn run_campaign(config: &ExperimentConfig, workers: usize) -> Result<Campaign> {
    let workers = workers.max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::config(format!("cannot start {workers} worker threads: {e}")))?;
    let start = Instant::now();
    let records: Vec<TrialRecord> = pool.install(|| {
        (0..config.trials)
            .into_par_iter()
            .map(|i| run_trial(config, i))
            .collect()
    });
    let mut summary = summarize(config, &records)?;
    summary.wall_time = Some(start.elapsed().as_secs_f64());
    Ok(Campaign { records, summary })
}

/// Evaluates one trial; errors and panics become a failed record.
pub fn run_trial(config: &ExperimentConfig, index: u64) -> TrialRecord {
    let seed = derive_trial_seed(config.master_seed, index);
    let outcome = catch_unwind(AssertUnwindSafe(|| evaluate(config, seed)));
    let (pass, measures, error, error_message) = match outcome {
        Ok(Ok((pass, measures))) => (pass, measures, None, None),
        Ok(Err(e)) => (false, BTreeMap::new(), Some(e.tag().to_string()), Some(e.to_string())),
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "trial panicked".into());
            (false, BTreeMap::new(), Some("panic".into()), Some(msg))
        }
    };
    TrialRecord {
        trial_index: index,
        derived_seed: seed,
        pass,
        error,
        error_message,
        measures,
    }
}

type Outcome = (bool, BTreeMap<String, f64>);

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

fn evaluate(config: &ExperimentConfig, seed: u64) -> Result<Outcome> {
    let spec = &config.ensemble;
    let a = sample_matrix(spec, seed)?;
    let n = spec.n;
    let mut m = BTreeMap::new();
    let pass = match &config.experiment {
        Experiment::SimpleSpectrum => {
            let gaps = min_gap_of(&eigenvalues(&a)?)?;
            m.insert("delta".into(), gaps.delta);
            m.insert("normalized_delta".into(), gaps.normalized_delta);
            let simple = match IntMatrix::from_f64(&a).filter(|_| spec.is_integer_valued()) {
                Some(exact) => {
                    m.insert("exact_path".into(), 1.0);
                    simple_spectrum_exact(&exact)?
                }
                None => {
                    m.insert("exact_path".into(), 0.0);
                    let scale = crate::ensembles::operator_norm(&a).max(1.0);
                    gaps.delta > config.threshold("gap_tol") * scale
                }
            };
            m.insert("simple".into(), flag(simple));
            simple
        }
        Experiment::GapDistribution => {
            let gaps = min_gap_of(&eigenvalues(&a)?)?;
            m.insert("delta".into(), gaps.delta);
            m.insert("normalized_delta".into(), gaps.normalized_delta);
            gaps.normalized_delta >= config.threshold("s")
        }
        Experiment::ControllabilityAllones { mode }
        | Experiment::ControllabilityBasis { mode, .. }
        | Experiment::ControllabilityRandomB { mode } => {
            let b = match &config.experiment {
                Experiment::ControllabilityBasis { index, .. } => {
                    draw_vector(&VectorSpec::Basis { index: *index }, n, seed)
                }
                Experiment::ControllabilityRandomB { .. } => {
                    draw_vector(&VectorSpec::Rademacher, n, seed)
                }
                _ => DVector::from_element(n, 1.0),
            };
            let tol = ControlTolerances {
                pbh_tol: config.threshold("pbh_tol"),
                ..ControlTolerances::default()
            };
            let report = is_controllable_with(&a, &b, *mode, &tol)?;
            if let Some(r) = report.numeric_rank {
                m.insert("numeric_rank".into(), r as f64);
            }
            if let Some(r) = report.exact_rank {
                m.insert("exact_rank".into(), r as f64);
            }
            if let Some(o) = report.pbh_min_overlap {
                m.insert("pbh_min_overlap".into(), o);
            }
            let disagreements = report.warnings.iter().filter(|w| w.contains("disagrees")).count();
            m.insert("disagreement".into(), disagreements as f64);
            m.insert("controllable".into(), flag(report.controllable()));
            report.controllable()
        }
        Experiment::EigvecSmallball { vector } | Experiment::ScaledSmallball { vector } => {
            let b = draw_vector(vector, n, seed);
            if matches!(config.experiment, Experiment::ScaledSmallball { .. }) {
                let violations = delocalized_check(&complexify(&b), config.threshold("bound"))?;
                m.insert("delocalized_violations".into(), violations as f64);
            }
            let (values, vectors, _) = right_eigenpairs(&a, DEFAULT_TOL)?;
            let cutoff = spec
                .is_digraph()
                .then(|| config.threshold("outlier_radius") * (n as f64).sqrt());
            let mut best: Option<(f64, usize)> = None;
            let mut excluded = 0usize;
            for (i, (lambda, u)) in values.iter().zip(&vectors).enumerate() {
                if cutoff.is_some_and(|c| lambda.norm() > c) {
                    excluded += 1;
                    continue;
                }
                let overlap = u.iter().zip(b.iter()).map(|(x, y)| x * *y).sum::<nalgebra::Complex<f64>>().norm() / u.norm();
                if best.is_none_or(|(o, _)| overlap < o) {
                    best = Some((overlap, i));
                }
            }
            m.insert("excluded".into(), excluded as f64);
            let (overlap, i) = best.ok_or_else(|| Error::domain("every eigenvalue was excluded"))?;
            m.insert("min_overlap".into(), overlap);
            m.insert("argmin_re".into(), values[i].re);
            m.insert("argmin_im".into(), values[i].im);
            overlap > config.threshold("t")
        }
        Experiment::DigraphOutlier => {
            let report = outlier_check(&a, edge_probability(config)?, config.threshold("delta"))?;
            m.insert("outside_count".into(), report.outside_count as f64);
            if let Some([re, im]) = report.outlier {
                m.insert("outlier_re".into(), re);
                m.insert("outlier_im".into(), im);
            }
            if let Some(d) = report.distance_to_pn {
                m.insert("distance_to_pn".into(), d);
            }
            let limit = config.threshold("distance_factor") * (n as f64).sqrt();
            report.outside_count == 1 && report.distance_to_pn.is_some_and(|d| d <= limit)
        }
        Experiment::DigraphPerron => {
            let (connected, count) = strongly_connected(&a)?;
            m.insert("strongly_connected".into(), flag(connected));
            m.insert("scc_count".into(), count as f64);
            let report = perron_check_matrix(&a)?;
            m.insert("top_re".into(), report.top_eigenvalue[0]);
            m.insert("top_im".into(), report.top_eigenvalue[1]);
            m.insert("top_is_real".into(), flag(report.top_eigenvalue_is_real));
            m.insert("top_is_simple".into(), flag(report.top_is_simple));
            m.insert("modulus_gap".into(), report.modulus_gap);
            m.insert("min_entry".into(), report.top_eigenvector_min_entry);
            connected
                && report.top_eigenvalue_is_real
                && report.top_is_simple
                && report.top_eigenvector_min_entry > config.threshold("positive_tol")
        }
        Experiment::StrongConnectivity => {
            let (connected, count) = strongly_connected(&a)?;
            m.insert("strongly_connected".into(), flag(connected));
            m.insert("scc_count".into(), count as f64);
            connected
        }
        Experiment::SignSymmetrization => {
            let exact = IntMatrix::from_f64(&a)
                .ok_or_else(|| Error::config("sign symmetrization needs integer entries"))?;
            let mut rng = stream_rng(derive_child_seed(seed, "signs"), Stream::Auxiliary);
            let signs: Vec<i64> = (0..n).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
            let flipped = IntMatrix::from_fn(n, n, |i, j| exact.get(i, j) * signs[i] * signs[j]);
            let same_poly = charpoly_exact(&exact)?.coefficients() == charpoly_exact(&flipped)?.coefficients();
            let ones = vec![BigInt::from(1); n];
            let signed: Vec<BigInt> = signs.iter().map(|&s| BigInt::from(s)).collect();
            let (rank, _) = is_controllable_exact(&exact, &ones)?;
            let (rank_flipped, _) = is_controllable_exact(&flipped, &signed)?;
            m.insert("charpoly_equal".into(), flag(same_poly));
            m.insert("rank_equal".into(), flag(rank == rank_flipped));
            m.insert("kalman_rank".into(), rank as f64);
            same_poly && rank == rank_flipped
        }
    };
    Ok((pass, m))
}

fn edge_probability(config: &ExperimentConfig) -> Result<f64> {
    match config.ensemble.kind {
        EnsembleKind::Digraph { p, .. } => Ok(p),
        EnsembleKind::Iid { .. } => Err(Error::config("experiment needs a digraph ensemble")),
    }
}

/// The auxiliary vector of a trial; random kinds use a child seed of the trial seed.
pub fn draw_vector(spec: &VectorSpec, n: usize, trial_seed: u64) -> DVector<f64> {
    let mut rng = stream_rng(derive_child_seed(trial_seed, "b"), Stream::Vector);
    match spec {
        VectorSpec::Ones => DVector::from_element(n, 1.0),
        VectorSpec::Basis { index } => DVector::from_fn(n, |i, _| flag(i == *index)),
        VectorSpec::Rademacher => {
            DVector::from_fn(n, |_, _| if rng.random::<bool>() { 1.0 } else { -1.0 })
        }
        VectorSpec::Uniform { low, high } => {
            DVector::from_fn(n, |_, _| low + (high - low) * rng.random::<f64>())
        }
    }
}

/// Pass counts, Wilson interval, per-measure aggregates and acceptance checks.
pub fn summarize(config: &ExperimentConfig, records: &[TrialRecord]) -> Result<CampaignSummary> {
    let trial_count = records.len() as u64;
    let pass_count = records.iter().filter(|r| r.pass).count() as u64;
    let wilson = if trial_count == 0 {
        (0.0, 1.0)
    } else {
        wilson_interval(pass_count, trial_count, 0.95)?
    };
    let mut error_tags = BTreeMap::new();
    for tag in records.iter().filter_map(|r| r.error.as_ref()) {
        *error_tags.entry(tag.clone()).or_insert(0u64) += 1;
    }
    let mut aggregates = BTreeMap::new();
    for name in config.experiment.measure_names() {
        let values: Vec<f64> = records
            .iter()
            .filter_map(|r| r.measures.get(*name).copied())
            .filter(|v| !v.is_nan())
            .collect();
        if let Some((min, median, max)) = min_median_max(&values) {
            aggregates.insert(
                name.to_string(),
                Aggregate {
                    count: values.len(),
                    min,
                    median,
                    max,
                },
            );
        }
    }
    let fraction = if trial_count == 0 {
        0.0
    } else {
        pass_count as f64 / trial_count as f64
    };
    let acceptance: Vec<AcceptanceCheck> = ACCEPTANCE_KEYS
        .iter()
        .filter_map(|key| config.thresholds.get(*key).map(|req| (*key, *req)))
        .map(|(key, required)| {
            let observed = if key == "min_pass" { pass_count as f64 } else { fraction };
            AcceptanceCheck {
                key: key.to_string(),
                required,
                observed,
                passed: observed >= required,
            }
        })
        .collect();
    Ok(CampaignSummary {
        schema_version: crate::SCHEMA_VERSION,
        name: config.name.clone(),
        experiment: config.experiment.kind().to_string(),
        config_hash: config.hash(),
        master_seed: config.master_seed,
        trial_count,
        pass_count,
        pass_fraction: fraction,
        wilson_interval_95: wilson,
        error_count: error_tags.values().sum(),
        error_tags,
        aggregates,
        accepted: acceptance.iter().all(|c| c.passed),
        acceptance,
        wall_time: None,
    })
}
