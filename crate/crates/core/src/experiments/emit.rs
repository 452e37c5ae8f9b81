use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::{Experiment, ExperimentConfig, OutputFormat};
use super::plot::gap_cdf_csv;
use super::runner::{Campaign, CampaignSummary, TrialRecord};
use crate::error::{Error, Result};
use crate::spectral::gap_distribution_of;

/// Leading CSV columns; measure columns follow in the experiment's order.
pub const CSV_FIXED_COLUMNS: [&str; 7] = [
    "schema_version",
    "config_hash",
    "master_seed",
    "trial_index",
    "derived_seed",
    "pass",
    "error",
];

/// Contents of `<name>.records.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordsFile {
    pub schema_version: u32,
    pub config_hash: String,
    pub master_seed: u64,
    pub records: Vec<TrialRecord>,
    pub summary: CampaignSummary,
}

/// Contents of `<name>.run.json`: facts about this particular execution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunFile {
    pub schema_version: u32,
    pub config_hash: String,
    pub workers: usize,
    pub wall_time: f64,
    pub accepted: bool,
}

fn csv_error(e: csv::Error) -> Error {
    Error::Parse(format!("csv: {e}"))
}

/// CSV with one row per record. Missing measures are empty cells.
pub fn records_csv(
    config_hash: &str,
    master_seed: u64,
    measure_names: &[&str],
    records: &[TrialRecord],
) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header: Vec<&str> = CSV_FIXED_COLUMNS.iter().chain(measure_names).copied().collect();
    w.write_record(&header).map_err(csv_error)?;
    for r in records {
        let mut row = vec![
            crate::SCHEMA_VERSION.to_string(),
            config_hash.to_string(),
            master_seed.to_string(),
            r.trial_index.to_string(),
            r.derived_seed.to_string(),
            r.pass.to_string(),
            r.error.clone().unwrap_or_default(),
        ];
        row.extend(
            measure_names
                .iter()
                .map(|k| r.measures.get(*k).map(|v| v.to_string()).unwrap_or_default()),
        );
        w.write_record(&row).map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// JSON with every record and the summary, without wall time.
pub fn records_json(campaign: &Campaign) -> Result<String> {
    let mut summary = campaign.summary.clone();
    summary.wall_time = None;
    let file = RecordsFile {
        schema_version: crate::SCHEMA_VERSION,
        config_hash: summary.config_hash.clone(),
        master_seed: summary.master_seed,
        records: campaign.records.clone(),
        summary,
    };
    serde_json::to_string_pretty(&file).map_err(|e| Error::Parse(e.to_string()))
}

pub fn parse_records_json(text: &str) -> Result<RecordsFile> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn write(path: PathBuf, contents: &str) -> Result<PathBuf> {
    fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

/// Writes the requested record files plus `<name>.run.json` into `dir`.
/// Gap campaigns also get `<name>.gap_cdf.csv`. Returns the paths written.
pub fn emit(
    dir: &Path,
    config: &ExperimentConfig,
    campaign: &Campaign,
    workers: usize,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let stem = &config.name;
    let mut written = Vec::new();
    for format in &config.output.formats {
        match format {
            OutputFormat::Csv => {
                let text = records_csv(
                    &campaign.summary.config_hash,
                    config.master_seed,
                    config.experiment.measure_names(),
                    &campaign.records,
                )?;
                written.push(write(dir.join(format!("{stem}.records.csv")), &text)?);
            }
            OutputFormat::Json => {
                let text = records_json(campaign)?;
                written.push(write(dir.join(format!("{stem}.records.json")), &text)?);
            }
        }
    }
    if config.experiment == Experiment::GapDistribution {
        let values: Vec<f64> = campaign
            .records
            .iter()
            .filter_map(|r| r.measures.get("normalized_delta").copied())
            .collect();
        if !values.is_empty() {
            let text = gap_cdf_csv(&gap_distribution_of(&values)?);
            written.push(write(dir.join(format!("{stem}.gap_cdf.csv")), &text)?);
        }
    }
    let run = RunFile {
        schema_version: crate::SCHEMA_VERSION,
        config_hash: campaign.summary.config_hash.clone(),
        workers,
        wall_time: campaign.summary.wall_time.unwrap_or(0.0),
        accepted: campaign.summary.accepted,
    };
    let text = serde_json::to_string_pretty(&run).map_err(|e| Error::Parse(e.to_string()))?;
    written.push(write(dir.join(format!("{stem}.run.json")), &text)?);
    Ok(written)
}
