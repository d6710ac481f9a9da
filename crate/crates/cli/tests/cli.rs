use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn odsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_odsim"))
        .args(args)
        .output()
        .expect("odsim binary runs")
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let p = dir.join("config.json");
    fs::write(&p, body).unwrap();
    p
}

fn run_in(dir: &Path, body: &str, extra: &[&str]) -> (Output, PathBuf) {
    let cfg = write_config(dir, body);
    let out = dir.join("out");
    let mut args = vec![
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend(extra);
    (odsim(&args), out)
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn cascade_run_writes_csv_summary_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let (o, out) = run_in(
        dir.path(),
        r#"{"scenario": "cascade", "epsilon": 0.5, "kappa_L": 20}"#,
        &[],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let summary: Value =
        serde_json::from_slice(&fs::read(out.join("summary.json")).unwrap()).unwrap();
    let cascade = &summary["scenarios"][0];
    let diff = cascade["terminal"][0]["diff_var_terminal"]
        .as_f64()
        .unwrap();
    assert!((diff - 1.0 / 3.0).abs() < 1e-6);
    assert!(cascade["oracle_delta"].as_f64().unwrap() < 1e-6);
    assert_eq!(cascade["pass"], Value::Bool(true));

    let csv = fs::read_to_string(out.join("cascade.csv")).unwrap();
    let header = csv.lines().next().unwrap();
    assert!(header.starts_with("stage,z_over_length,kappa_z,omega_over_gamma,"));
    // Both samples, sharing the boundary row.
    assert_eq!(csv.lines().count(), 1 + 201 + 200);
    assert!(!csv.contains('\r'));

    let manifest: Value =
        serde_json::from_slice(&fs::read(out.join("manifest.json")).unwrap()).unwrap();
    for f in manifest["files"].as_array().unwrap() {
        assert!(out.join(f.as_str().unwrap()).exists());
    }
    assert!(manifest["conventions"]["variance_normalization"].is_string());
    assert_eq!(
        fs::read_dir(&out).unwrap().count(),
        3,
        "temporary files left behind"
    );
}

#[test]
fn identical_runs_are_byte_identical() {
    let body = r#"[{"scenario": "gem", "z_steps": 500}, {"scenario": "single_sample", "omega_over_gamma_list": [0, 1, 3]}]"#;
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let (oa, out_a) = run_in(a.path(), body, &[]);
    let (ob, out_b) = run_in(b.path(), body, &[]);
    assert_eq!(oa.status.code(), Some(0), "{}", stderr(&oa));
    assert_eq!(ob.status.code(), Some(0));
    for f in ["gem.csv", "single_sample.csv", "summary.json"] {
        assert_eq!(
            fs::read(out_a.join(f)).unwrap(),
            fs::read(out_b.join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn thread_count_does_not_change_output() {
    let body = r#"{"scenario": "preservation", "omega_over_gamma_list": [0, 0.5, 1, 2, 5]}"#;
    let mut outputs = Vec::new();
    for threads in ["1", "8"] {
        let dir = tempfile::tempdir().unwrap();
        let cfg = write_config(dir.path(), body);
        let out = dir.path().join("out");
        let o = Command::new(env!("CARGO_BIN_EXE_odsim"))
            .args([
                "run",
                "--config",
                cfg.to_str().unwrap(),
                "--out",
                out.to_str().unwrap(),
            ])
            .env("ODSIM_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0));
        outputs.push(fs::read(out.join("preservation.csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn epsilon_override_gives_identity_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let (o, out) = run_in(
        dir.path(),
        r#"{"scenario": "preservation"}"#,
        &["--override", "epsilon=0"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let summary: Value =
        serde_json::from_slice(&fs::read(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["pass"], Value::Bool(true));
    let csv = fs::read_to_string(out.join("preservation.csv")).unwrap();
    for line in csv.lines().skip(1) {
        let sum: f64 = line.split(',').nth(4).unwrap().parse().unwrap();
        assert!((sum - 1.0).abs() < 1e-12);
    }
}

#[test]
fn out_of_range_epsilon_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let (o, _) = run_in(
        dir.path(),
        r#"{"scenario": "cascade", "epsilon": 1.2}"#,
        &[],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).contains("epsilon must be in [0,1)"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn unknown_scenario_exits_2_naming_valid_ones() {
    let dir = tempfile::tempdir().unwrap();
    let (o, _) = run_in(dir.path(), r#"{"scenario": "fig5"}"#, &[]);
    assert_eq!(o.status.code(), Some(2));
    let msg = stderr(&o);
    for name in [
        "preservation",
        "single_sample",
        "cascade",
        "gem",
        "memory_swap",
    ] {
        assert!(msg.contains(name), "{msg}");
    }
}

#[test]
fn unknown_key_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let (o, _) = run_in(dir.path(), r#"{"scenario": "cascade", "kappaL": 20}"#, &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("kappaL"));
}

#[test]
fn unwritable_output_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"scenario": "cascade"}"#);
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let out = blocker.join("sub");
    let o = odsim(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn list_prints_five_scenarios() {
    let o = odsim(&["list"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let names: Vec<&str> = text
        .lines()
        .map(|l| l.split_whitespace().next().unwrap())
        .collect();
    assert_eq!(
        names,
        [
            "preservation",
            "single_sample",
            "cascade",
            "gem",
            "memory_swap"
        ]
    );

    let o = odsim(&["list", "--json"]);
    let names: Vec<String> = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(names.len(), 5);

    let o = odsim(&["list", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).to_lowercase().contains("usage"));
}

#[test]
fn perturbed_kappa_fails_beer_law() {
    let o = odsim(&["verify", "--perturb-kappa", "1.01"]);
    assert_eq!(o.status.code(), Some(1));
    let text = String::from_utf8(o.stdout).unwrap();
    let failed = text
        .lines()
        .find(|l| l.starts_with("failed criteria"))
        .unwrap();
    assert!(failed.contains("Beer-law transmission"), "{failed}");
}

#[test]
fn verbose_verify_lists_each_check() {
    let brief = odsim(&["verify"]);
    let verbose = odsim(&["verify", "--verbose"]);
    let brief = String::from_utf8(brief.stdout).unwrap();
    let verbose = String::from_utf8(verbose.stdout).unwrap();
    assert!(verbose.lines().count() > brief.lines().count());
    for id in 1..=10 {
        assert!(
            brief
                .lines()
                .any(|l| l.split_whitespace().nth(1) == Some(&id.to_string())),
            "criterion {id} missing"
        );
    }
}
