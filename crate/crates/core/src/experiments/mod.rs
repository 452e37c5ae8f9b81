//! Reproducible Monte Carlo campaigns: configuration, the trial runner,
//! summaries and file output.

mod config;
mod emit;
mod plot;
mod runner;

pub use config::{Experiment, ExperimentConfig, OutputConfig, OutputFormat, VectorSpec, ACCEPTANCE_KEYS};
pub use emit::{emit, parse_records_json, records_csv, records_json, RecordsFile, RunFile, CSV_FIXED_COLUMNS};
pub use plot::{gap_cdf_csv, scatter_csv};
pub use runner::{
    draw_vector, run_campaign, run_trial, summarize, AcceptanceCheck, Aggregate, Campaign,
    CampaignSummary, TrialRecord,
};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "RMT_OUT_DIR";
