use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use odsim_core::scenarios::run;
use odsim_core::verify::{self, VerifyOptions};
use odsim_core::{Error, ScenarioKind};

mod config;
mod output;

const EXIT_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_PHYSICALITY: u8 = 3;

#[derive(Parser)]
#[command(
    name = "odsim",
    version,
    about = "Optical dark-state propagation through Raman media"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenario(s) in a config file and write CSV + JSON results.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// key=value, value read as JSON (repeatable).
        #[arg(long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// List the available scenarios.
    List {
        #[arg(long)]
        json: bool,
    },
    /// Run the engine-versus-closed-form acceptance sweep.
    Verify {
        #[arg(long)]
        verbose: bool,
        /// Scale the engine's optical-depth rate (sensitivity check).
        #[arg(long, hide = true, default_value_t = 1.0)]
        perturb_kappa: f64,
    },
}

fn init_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("ODSIM_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("ODSIM_THREADS must be a non-negative integer, got '{raw}'"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| format!("cannot start worker pool: {e}"))
}

fn list(as_json: bool) {
    if as_json {
        let names: Vec<&str> = ScenarioKind::ALL.iter().map(|k| k.name()).collect();
        println!(
            "{}",
            serde_json::to_string(&names).expect("names serialize")
        );
        return;
    }
    for k in ScenarioKind::ALL {
        println!("{:<14} {}  [{}]", k.name(), k.description(), k.anchor());
    }
}

fn run_command(config_path: &Path, out: &Path, overrides: &[String]) -> Result<(), (u8, String)> {
    let started = Instant::now();
    let configs = config::load(config_path, overrides).map_err(|e| (EXIT_CONFIG, e))?;

    let mut reports = Vec::with_capacity(configs.len());
    for c in &configs {
        let report = run(c).map_err(|e| {
            let code = match e {
                Error::PhysicalityViolation(_) | Error::NumericalDegeneracy(_) => EXIT_PHYSICALITY,
                _ => EXIT_CONFIG,
            };
            (code, format!("{}: {e}", c.scenario.name()))
        })?;
        reports.push(report);
    }
    output::reports_are_finite(&reports).map_err(|e| (EXIT_PHYSICALITY, e))?;
    let summary = output::summary(&reports);
    if let Some(path) = output::first_non_finite(&summary, "$") {
        return Err((EXIT_PHYSICALITY, format!("non-finite value at {path}")));
    }

    let unwritable = |e: std::io::Error| {
        (
            EXIT_CONFIG,
            format!("cannot write to {}: {e}", out.display()),
        )
    };
    std::fs::create_dir_all(out).map_err(unwritable)?;
    let mut files = Vec::new();
    for r in &reports {
        let name = format!("{}.csv", r.config.scenario.name());
        output::write_atomic(&out.join(&name), output::csv(r).as_bytes()).map_err(unwritable)?;
        files.push(name);
    }
    output::write_atomic(&out.join("summary.json"), &output::pretty(&summary))
        .map_err(unwritable)?;
    files.push("summary.json".into());

    let manifest = output::RunManifest {
        config_path: config_path.to_path_buf(),
        output_dir: out.to_path_buf(),
        files,
        conventions: output::conventions(),
        version: env!("CARGO_PKG_VERSION"),
        duration_seconds: started.elapsed().as_secs_f64(),
    };
    output::write_atomic(&out.join("manifest.json"), &output::pretty(&manifest))
        .map_err(unwritable)?;

    for r in &reports {
        println!(
            "{:<14} {:>6} rows  oracle delta {:.3e}  {}",
            r.config.scenario.name(),
            r.rows.len(),
            r.max_oracle_delta(),
            if r.pass() { "pass" } else { "FAIL" }
        );
        for c in r.checks.iter().filter(|c| !c.pass) {
            println!(
                "  failed check {}: value {:e}, expected {:e}",
                c.name, c.value, c.expected
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        eprintln!("odsim: {e}");
        return ExitCode::from(EXIT_CONFIG);
    }
    match cli.command {
        Command::List { json } => {
            list(json);
            ExitCode::SUCCESS
        }
        Command::Run {
            config,
            out,
            overrides,
        } => match run_command(&config, &out, &overrides) {
            Ok(()) => ExitCode::SUCCESS,
            Err((code, msg)) => {
                eprintln!("odsim: {msg}");
                ExitCode::from(code)
            }
        },
        Command::Verify {
            verbose,
            perturb_kappa,
        } => {
            let outcomes = verify::run_all(&VerifyOptions {
                kappa_scale: perturb_kappa,
            });
            print!("{}", verify::render(&outcomes, verbose));
            if outcomes.iter().all(|o| o.pass()) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAIL)
            }
        }
    }
}
