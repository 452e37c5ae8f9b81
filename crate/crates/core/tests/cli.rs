use std::path::Path;
use std::process::{Command, Output};

fn rmt(args: &[&str], env_out: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_rmt"));
    cmd.args(args).env_remove("RMT_OUT_DIR");
    if let Some(dir) = env_out {
        cmd.env("RMT_OUT_DIR", dir);
    }
    cmd.output().unwrap()
}

fn golden(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

#[test]
fn campaign_exit_code_follows_acceptance() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_string_lossy().into_owned();
    let ok = rmt(&["campaign", "--config", &golden("signs.toml"), "--out", &out], None);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    assert!(dir.path().join("signs.records.csv").exists());
    assert!(dir.path().join("signs.run.json").exists());

    let strict = dir.path().join("strict.toml");
    let text = std::fs::read_to_string(golden("allones.toml")).unwrap() + "\n[thresholds]\nmin_pass = 8\n";
    std::fs::write(&strict, text).unwrap();
    let fail = rmt(&["campaign", "--config", strict.to_str().unwrap(), "--out", &out], None);
    assert_eq!(fail.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&fail.stderr).contains("FAIL min_pass"));
}

#[test]
fn output_directory_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let run = rmt(&["campaign", "--config", &golden("signs.toml"), "--workers", "2"], Some(dir.path()));
    assert!(run.status.success());
    assert!(dir.path().join("signs.records.json").exists());
}

#[test]
fn bad_input_exits_with_two() {
    let missing = rmt(&["campaign", "--config", "/nonexistent/campaign.toml"], None);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("/nonexistent/campaign.toml"));
    assert_eq!(rmt(&["gen"], None).status.code(), Some(2));
}

#[test]
fn matrix_commands_chain() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let gen = rmt(&["gen", "--n", "6", "--atom", "rademacher", "--seed", "9", "--out", a.to_str().unwrap()], None);
    assert!(gen.status.success());
    std::fs::write(&b, "1\n1\n1\n1\n1\n1\n").unwrap();

    let spectrum = rmt(&["spectrum", a.to_str().unwrap(), "--exact"], None);
    assert!(spectrum.status.success());
    let json: serde_json::Value = serde_json::from_slice(&spectrum.stdout).unwrap();
    assert_eq!(json["spectrum"]["eigenvalues"].as_array().unwrap().len(), 6);
    assert!(json["simple_exact"].is_boolean());

    let control = rmt(&["control", a.to_str().unwrap(), b.to_str().unwrap(), "--mode", "exact"], None);
    let json: serde_json::Value = serde_json::from_slice(&control.stdout).unwrap();
    assert!(json["exact_rank"].is_u64());

    let scatter = rmt(&["plot", "scatter", a.to_str().unwrap()], None);
    assert_eq!(String::from_utf8_lossy(&scatter.stdout).lines().count(), 7);
}

#[test]
fn graph_and_structure_reports() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.csv");
    rmt(&["gen", "--n", "40", "--graph-p", "0.5", "--seed", "1", "--out", g.to_str().unwrap()], None);
    let report = rmt(&["graph", g.to_str().unwrap(), "--p", "0.5"], None);
    let json: serde_json::Value = serde_json::from_slice(&report.stdout).unwrap();
    assert_eq!(json["outlier"]["outside_count"], 1);

    let v = dir.path().join("v.csv");
    std::fs::write(&v, "# (1,1)/sqrt 2\n0.7071067811865476\n0.7071067811865476\n").unwrap();
    let s = rmt(&["structure", v.to_str().unwrap(), "--atom", "rademacher", "--levy-radius", "0.1"], None);
    assert!(s.status.success(), "{}", String::from_utf8_lossy(&s.stderr));
    let json: serde_json::Value = serde_json::from_slice(&s.stdout).unwrap();
    assert_eq!(json["levy"][0]["value"], 0.5);
}

#[test]
fn gap_cdf_from_a_records_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("gaps.toml");
    std::fs::write(
        &cfg,
        "name = \"gaps\"\ntrials = 10\nmaster_seed = 3\n[experiment]\nkind = \"gap_distribution\"\n[ensemble]\nn = 10\natom = \"gaussian\"\n",
    )
    .unwrap();
    let out = dir.path().to_string_lossy().into_owned();
    assert!(rmt(&["campaign", "--config", cfg.to_str().unwrap(), "--out", &out], None).status.success());
    assert!(dir.path().join("gaps.gap_cdf.csv").exists());
    let records = dir.path().join("gaps.records.json");
    let cdf = rmt(&["plot", "gaps", records.to_str().unwrap()], None);
    let text = String::from_utf8_lossy(&cdf.stdout);
    assert_eq!(text.lines().count(), 11);
    assert_eq!(text, std::fs::read_to_string(dir.path().join("gaps.gap_cdf.csv")).unwrap());
}
