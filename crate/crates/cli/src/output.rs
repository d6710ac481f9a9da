//! CSV trajectories, `summary.json` and `manifest.json`.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use odsim_core::scenarios::{convention_notes, ReportRow};
use odsim_core::ScenarioReport;
use serde::Serialize;
use serde_json::{json, Value};

/// Write to a hidden sibling, then rename over the target.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let name = path
        .file_name()
        .ok_or_else(|| std::io::Error::other("output path has no file name"))?;
    let tmp = path.with_file_name(format!(".{}.tmp", name.to_string_lossy()));
    let mut f = fs::File::create(&tmp)?;
    f.write_all(bytes)?;
    f.sync_all()?;
    drop(f);
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}

/// Header plus one row per (ω, z); 17 significant digits, LF endings.
pub fn csv(report: &ScenarioReport) -> String {
    let mut out = report.columns().join(",");
    out.push('\n');
    for row in &report.rows {
        let values = row.values();
        let _ = write!(out, "{}", row.stage);
        for v in &values[1..] {
            let _ = write!(out, ",{v:.16e}");
        }
        out.push('\n');
    }
    out
}

fn terminal_entry(row: &ReportRow) -> Value {
    let mut entry = json!({
        "omega_over_gamma": row.omega_over_gamma,
        "kappa_z_terminal": row.kappa_z,
        "sum_var_terminal": row.var_xa_plus_xb,
        "diff_var_terminal": row.var_xa_minus_xb,
        "p_diff_var_terminal": row.var_pa_minus_pb,
        "p_sum_var_terminal": row.var_pa_plus_pb,
        "var_x_bright_terminal": row.var_x_bright,
        "var_x_dark_terminal": row.var_x_dark,
        "n_a_terminal": row.n_a,
        "n_b_terminal": row.n_b,
        "purity_terminal": row.purity,
        "log_neg_ab_terminal": row.log_neg_ab,
        "log_neg_bd_terminal": row.log_neg_bd,
    });
    if let (Some(a), Value::Object(map)) = (&row.atoms, &mut entry) {
        map.insert("n_s1_terminal".into(), json!(a.n_s1));
        map.insert("n_s2_terminal".into(), json!(a.n_s2));
        map.insert("log_neg_s1_s2_terminal".into(), json!(a.log_neg_s1_s2));
        map.insert(
            "log_neg_light_atoms_terminal".into(),
            json!(a.log_neg_light_atoms),
        );
    }
    entry
}

pub fn scenario_summary(report: &ScenarioReport) -> Value {
    json!({
        "scenario": report.config.scenario.name(),
        "config": report.config,
        "terminal": report.terminal_rows().into_iter().map(terminal_entry).collect::<Vec<_>>(),
        "checks": report.checks,
        "oracle_delta": report.max_oracle_delta(),
        "pass": report.pass(),
        "notes": report.notes,
    })
}

pub fn conventions() -> Value {
    json!({
        "variance_normalization": "hbar = 1, vacuum quadrature variance 1/2",
        "quadrature_order": "(X_1, P_1, X_2, P_2, ...), X = (a + a^dag)/sqrt(2)",
        "bogoliubov": "B = (a - eps b^dag)/alpha0, D = (b - eps a^dag)/alpha0",
        "units": "kappa = gamma12 = 1",
        "notes": convention_notes(),
    })
}

pub fn summary(reports: &[ScenarioReport]) -> Value {
    json!({
        "version": env!("CARGO_PKG_VERSION"),
        "conventions": conventions(),
        "pass": reports.iter().all(ScenarioReport::pass),
        "scenarios": reports.iter().map(scenario_summary).collect::<Vec<_>>(),
    })
}

/// Path of the first non-finite number, if any.
pub fn first_non_finite(v: &Value, path: &str) -> Option<String> {
    match v {
        Value::Number(n) if !n.as_f64().is_some_and(f64::is_finite) => Some(path.to_string()),
        Value::Array(items) => items
            .iter()
            .enumerate()
            .find_map(|(i, x)| first_non_finite(x, &format!("{path}[{i}]"))),
        Value::Object(map) => map
            .iter()
            .find_map(|(k, x)| first_non_finite(x, &format!("{path}.{k}"))),
        _ => None,
    }
}

/// Serde maps NaN to null, so numbers are checked before serialization.
pub fn reports_are_finite(reports: &[ScenarioReport]) -> Result<(), String> {
    for r in reports {
        let bad_row = r
            .rows
            .iter()
            .position(|row| row.values().iter().any(|v| !v.is_finite()));
        if let Some(i) = bad_row {
            return Err(format!(
                "{}: non-finite value in row {i}",
                r.config.scenario.name()
            ));
        }
        if let Some(c) = r.checks.iter().find(|c| {
            ![c.value, c.expected, c.delta, c.tolerance]
                .iter()
                .all(|v| v.is_finite())
        }) {
            return Err(format!(
                "{}: non-finite value in check {}",
                r.config.scenario.name(),
                c.name
            ));
        }
    }
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub config_path: PathBuf,
    pub output_dir: PathBuf,
    pub files: Vec<String>,
    pub conventions: Value,
    pub version: &'static str,
    pub duration_seconds: f64,
}

pub fn pretty(v: &impl Serialize) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(v).expect("JSON values always serialize");
    bytes.push(b'\n');
    bytes
}
