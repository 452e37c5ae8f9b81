mod common;

use std::path::Path;

use proptest::prelude::*;
use rmt_lab::ensembles::sample_digraph_adjacency;
use rmt_lab::experiments::{
    emit, parse_records_json, records_csv, records_json, run_campaign, scatter_csv, Experiment,
    ExperimentConfig, OutputFormat,
};
use rmt_lab::graph::outlier_check;
use rmt_lab::seed::derive_trial_seed;
use rmt_lab::spectral::eigenvalues;
use rmt_lab::stats::wilson_interval;

use common::cfg;

fn golden(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn config(text: &str) -> ExperimentConfig {
    ExperimentConfig::from_toml_str(text).unwrap()
}

const IDENTITY: &str = r#"
name = "identity"
trials = 1
master_seed = 0

[experiment]
kind = "simple_spectrum"

# Off-diagonal entries are a point mass at 0; the shift puts 1 on the diagonal.
[ensemble]
n = 4
atom = "discrete"
values = [0]
diagonal = "zero"
shift_re = -0.5
"#;

#[test]
fn identity_matrix_has_no_simple_spectrum() {
    let run = run_campaign(&config(IDENTITY), 1).unwrap();
    assert_eq!(run.summary.pass_count, 0);
    let r = &run.records[0];
    assert!(r.error.is_none());
    assert_eq!(r.measures["exact_path"], 1.0);
    assert_eq!(r.measures["delta"], 0.0);
}

#[test]
fn records_do_not_depend_on_worker_count() {
    for name in ["signs.toml", "allones.toml"] {
        let c = ExperimentConfig::from_path(golden(name)).unwrap();
        let serial = run_campaign(&c, 1).unwrap();
        let parallel = run_campaign(&c, 3).unwrap();
        assert_eq!(records_json(&serial).unwrap(), records_json(&parallel).unwrap());
        let names = c.experiment.measure_names();
        assert_eq!(
            records_csv(&c.hash(), c.master_seed, names, &serial.records).unwrap(),
            records_csv(&c.hash(), c.master_seed, names, &parallel.records).unwrap()
        );
    }
}

#[test]
fn emitted_files_match_the_golden_copies() {
    let dir = tempfile::tempdir().unwrap();
    for stem in ["signs", "allones"] {
        let c = ExperimentConfig::from_path(golden(&format!("{stem}.toml"))).unwrap();
        let run = run_campaign(&c, 2).unwrap();
        emit(dir.path(), &c, &run, 2).unwrap();
        for ext in ["records.csv", "records.json"] {
            let file = format!("{stem}.{ext}");
            let got = std::fs::read_to_string(dir.path().join(&file)).unwrap();
            let want = std::fs::read_to_string(golden(&file)).unwrap();
            assert_eq!(got, want, "{file} drifted from the golden copy");
        }
    }
}

#[test]
fn seeds_recompute_from_master_and_index() {
    let c = ExperimentConfig::from_path(golden("signs.toml")).unwrap();
    let run = run_campaign(&c, 2).unwrap();
    for (i, r) in run.records.iter().enumerate() {
        assert_eq!(r.trial_index, i as u64);
        assert_eq!(r.derived_seed, derive_trial_seed(c.master_seed, i as u64));
    }
}

#[test]
fn summary_is_consistent_with_records() {
    let c = ExperimentConfig::from_path(golden("allones.toml")).unwrap();
    let run = run_campaign(&c, 1).unwrap();
    let s = &run.summary;
    assert_eq!(s.pass_count, run.records.iter().filter(|r| r.pass).count() as u64);
    assert_eq!(s.trial_count, c.trials);
    let p = s.pass_count as f64 / s.trial_count as f64;
    assert!(s.wilson_interval_95.0 <= p && p <= s.wilson_interval_95.1);
    let agg = &s.aggregates["exact_rank"];
    assert!(agg.min <= agg.median && agg.median <= agg.max);
    assert!(s.wall_time.is_some());
}

#[test]
fn json_round_trip_preserves_records() {
    let c = ExperimentConfig::from_path(golden("allones.toml")).unwrap();
    let run = run_campaign(&c, 1).unwrap();
    let parsed = parse_records_json(&records_json(&run).unwrap()).unwrap();
    assert_eq!(parsed.records, run.records);
    assert_eq!(parsed.config_hash, c.hash());
    assert_eq!(parsed.master_seed, c.master_seed);
    assert_eq!(parsed.summary.wall_time, None);
}

#[test]
fn empty_record_list_gives_a_header_only_csv() {
    let names = Experiment::DigraphOutlier.measure_names();
    let text = records_csv("abc", 1, names, &[]).unwrap();
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("schema_version,config_hash,master_seed,trial_index"));
    assert!(text.trim_end().ends_with("distance_to_pn"));
}

#[test]
fn failing_trials_are_recorded_not_fatal() {
    // A 1x1 matrix has no eigenvalue gap, so every trial raises a domain error.
    let text = IDENTITY.replace("n = 4", "n = 1").replace("shift_re = -0.5", "").replace("trials = 1", "trials = 5");
    let run = run_campaign(&config(&text), 2).unwrap();
    assert_eq!(run.records.len(), 5);
    assert!(run.records.iter().all(|r| !r.pass && r.error.as_deref() == Some("domain")));
    assert_eq!(run.summary.error_tags["domain"], 5);
    assert_eq!(run.summary.error_count, 5);
}

#[test]
fn configuration_errors_abort_up_front() {
    let base = std::fs::read_to_string(golden("signs.toml")).unwrap();
    let bad = [
        base.replace("\"rademacher\"", "\"gaussian\""),
        base.replace("trials = 8", "trials = 0"),
        base.replace("[thresholds]", "[thresholds]\ndelta = 0.1"),
        base.replace("kind = \"sign_symmetrization\"", "kind = \"digraph_perron\""),
        base.replace("kind = \"sign_symmetrization\"", "kind = \"sign_symmetrisation\""),
        format!("{base}\nextra = 1\n"),
    ];
    for text in bad {
        assert!(ExperimentConfig::from_toml_str(&text).is_err(), "accepted:\n{text}");
    }
}

#[test]
fn acceptance_thresholds_decide_the_verdict() {
    let base = std::fs::read_to_string(golden("allones.toml")).unwrap();
    let strict = config(&format!("{base}\n[thresholds]\nmin_pass = 8\n"));
    assert!(!run_campaign(&strict, 1).unwrap().summary.accepted);
    let loose = config(&format!("{base}\n[thresholds]\nmin_pass_fraction = 0.5\n"));
    assert!(run_campaign(&loose, 1).unwrap().summary.accepted);
}

#[test]
fn emit_reports_the_failing_path() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("not-a-dir");
    std::fs::write(&blocker, "x").unwrap();
    let c = ExperimentConfig::from_path(golden("signs.toml")).unwrap();
    let run = run_campaign(&c, 1).unwrap();
    match emit(&blocker, &c, &run, 1) {
        Err(rmt_lab::Error::Io { path, .. }) => assert_eq!(path, blocker),
        other => panic!("expected an i/o error, got {other:?}"),
    }
}

#[test]
fn output_formats_are_respected() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = ExperimentConfig::from_path(golden("signs.toml")).unwrap();
    c.output.formats = vec![OutputFormat::Csv];
    let run = run_campaign(&c, 1).unwrap();
    let files = emit(dir.path(), &c, &run, 1).unwrap();
    let names: Vec<String> = files.iter().map(|p| p.file_name().unwrap().to_string_lossy().into()).collect();
    assert_eq!(names, ["signs.records.csv", "signs.run.json"]);
}

#[test]
fn scatter_outliers_match_the_outlier_count() {
    let adj = sample_digraph_adjacency(200, 0.5, false, 4).unwrap();
    let report = outlier_check(&adj, 0.5, 0.2).unwrap();
    let text = scatter_csv(&eigenvalues(&adj).unwrap());
    let beyond = text
        .lines()
        .skip(1)
        .filter(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap() > 1.2)
        .count();
    assert_eq!(beyond, 1);
    assert_eq!(beyond, report.outside_count);
}

#[test]
fn wilson_matches_the_closed_form() {
    let (lo, hi) = wilson_interval(50, 100, 0.95).unwrap();
    let (z, n, p) = (1.959963984540054f64, 100.0, 0.5);
    let centre = (p + z * z / (2.0 * n)) / (1.0 + z * z / n);
    let half = z / (1.0 + z * z / n) * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt();
    assert!((lo - (centre - half)).abs() < 1e-3 && (hi - (centre + half)).abs() < 1e-3);
    assert!((lo - 0.404).abs() < 1e-3 && (hi - 0.596).abs() < 1e-3);
    assert_eq!(wilson_interval(0, 10, 0.95).unwrap().0, 0.0);
    assert_eq!(wilson_interval(10, 10, 0.95).unwrap().1, 1.0);
    assert!(wilson_interval(11, 10, 0.95).is_err());
    assert!(wilson_interval(0, 0, 0.95).is_err());
}

proptest! {
    #![proptest_config(cfg(300))]

    #[test]
    fn wilson_brackets_the_point_estimate(trials in 1u64..5000, frac in 0.0f64..=1.0) {
        let successes = (frac * trials as f64).round() as u64;
        let (lo, hi) = wilson_interval(successes, trials, 0.95).unwrap();
        let p = successes as f64 / trials as f64;
        prop_assert!(0.0 <= lo && lo <= p && p <= hi && hi <= 1.0);
    }

    #[test]
    fn trial_seeds_are_distinct(master in any::<u64>(), i in 0u64..1_000_000, j in 0u64..1_000_000) {
        prop_assume!(i != j);
        prop_assert_ne!(derive_trial_seed(master, i), derive_trial_seed(master, j));
    }
}
