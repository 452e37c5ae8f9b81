//! Runs a campaign file and writes its records.
//!
//!     cargo run --release --example campaign -- configs/controllability_allones.toml 2
//!
//! Output goes to $RMT_OUT_DIR, or a fresh directory under the system temp dir.

use std::path::PathBuf;

use rmt_lab::experiments::{emit, run_campaign, ExperimentConfig, OUT_DIR_ENV};

fn main() -> rmt_lab::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/configs/sign_symmetrization.toml").into());
    let workers = args.next().and_then(|w| w.parse().ok()).unwrap_or(1);

    let config = ExperimentConfig::from_path(&path)?;
    let run = run_campaign(&config, workers)?;
    let s = &run.summary;
    println!(
        "{}: {}/{} passed, Wilson 95% [{:.4}, {:.4}], accepted = {}",
        s.name, s.pass_count, s.trial_count, s.wilson_interval_95.0, s.wilson_interval_95.1, s.accepted
    );
    for (name, agg) in &s.aggregates {
        println!("  {name:>24}: min {:.4e}  median {:.4e}  max {:.4e}", agg.min, agg.median, agg.max);
    }

    let dir = std::env::var_os(OUT_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("rmt-campaign-example"));
    for file in emit(&dir, &config, &run, workers)? {
        println!("wrote {}", file.display());
    }
    Ok(())
}
