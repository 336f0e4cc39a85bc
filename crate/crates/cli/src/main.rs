use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use proxsim::config::RunConfig;
use proxsim::experiments::{noise_sweep, train_eval, write_summary_csv, write_sweep_csv, ViewReport};
use proxsim::features::{build_feature_matrix, FeatureView};
use proxsim::scenario::{generate_dataset, load_dataset};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "proxsim", version, about = "Proximity-threat scenario simulation and classification")]
struct Cli {
    /// Run configuration (JSON); omitted keys take their defaults.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Master seed, overriding the configuration.
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Simulate every class × regime cell and write CSV shards plus a manifest.
    Generate {
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
        #[arg(long, value_name = "N")]
        scenarios_per_cell: Option<usize>,
    },
    /// Build feature matrices from a generated dataset.
    Features(ViewArgs),
    /// Train and evaluate the forest on one view (all three when --view is omitted).
    TrainEval(ViewArgs),
    /// Timestep jammer detection across estimation-noise scales.
    NoiseSweep {
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
        #[arg(long, value_name = "CSV-LIST", value_delimiter = ',', allow_hyphen_values = true)]
        sigma_grid: Option<Vec<f64>>,
        #[arg(long, value_name = "N")]
        scenarios_per_cell: Option<usize>,
    },
    /// Summarize the reports found in a results directory.
    Report {
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
}

#[derive(Args, Debug)]
struct ViewArgs {
    /// Dataset directory written by `generate`.
    #[arg(long, value_name = "DIR")]
    data: PathBuf,
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
    #[arg(long, value_parser = parse_view)]
    view: Option<FeatureView>,
}

fn parse_view(s: &str) -> std::result::Result<FeatureView, String> {
    s.parse().map_err(|e: proxsim::Error| e.to_string())
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path).with_context(|| format!("loading {}", path.display()))?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.scenario.master_seed = seed;
    }
    Ok(cfg)
}

fn views(v: Option<FeatureView>) -> Vec<FeatureView> {
    v.map_or_else(|| FeatureView::ALL.to_vec(), |v| vec![v])
}

fn print_json(value: &serde_json::Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match writeln!(std::io::stdout().lock(), "{text}") {
        // A closed pipe (`| head`) is the reader's choice, not a failure.
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn generate(cfg: &mut RunConfig, out: &Path, per_cell: Option<usize>) -> Result<()> {
    if let Some(n) = per_cell {
        cfg.scenario.scenarios_per_cell = n;
    }
    cfg.validate()?;
    let manifest = generate_dataset(&cfg.scenario, out)?;
    let cells: Vec<_> = manifest
        .cells
        .iter()
        .map(|c| json!({"class": c.class, "regime": c.regime, "scenarios": c.scenarios, "rows": c.rows}))
        .collect();
    print_json(&json!({
        "out": out,
        "config_hash": manifest.config_hash,
        "scenarios": manifest.total_scenarios,
        "rows": manifest.total_rows,
        "duty_cycles": manifest.duty_cycles,
        "cells": cells,
    }))
}

fn features(cfg: &RunConfig, args: &ViewArgs) -> Result<()> {
    let (manifest, scenarios) = load_dataset(&args.data)?;
    let mut written = Vec::new();
    for view in views(args.view) {
        let m = build_feature_matrix(&scenarios, view, &cfg.features)?;
        let (csv, columns) = m.write(&args.out)?;
        written.push(json!({
            "view": view,
            "rows": m.n_rows(),
            "columns": m.n_cols(),
            "imputed": m.imputed,
            "csv": csv,
            "manifest": columns,
        }));
    }
    print_json(&json!({"dataset_hash": manifest.config_hash, "views": written}))
}

fn train_eval_cmd(cfg: &RunConfig, args: &ViewArgs) -> Result<()> {
    let (manifest, scenarios) = load_dataset(&args.data)?;
    let hash = cfg.hash()?;
    let mut summary = Vec::new();
    for view in views(args.view) {
        let m = build_feature_matrix(&scenarios, view, &cfg.features)?;
        let report = train_eval(&m, cfg.test_fraction, manifest.config.master_seed, &cfg.forest, &hash)?;
        report.write(&args.out)?;
        summary.push(json!({
            "view": view,
            "accuracy": report.rows.accuracy,
            "macro_f1": report.rows.macro_f1,
            "macro_auroc": report.rows.macro_auroc,
            "f1": report.rows.per_class.iter().map(|c| (c.class.clone(), json!(c.f1))).collect::<serde_json::Map<_, _>>(),
            "scenario_macro_f1": report.scenarios.macro_f1,
        }));
    }
    print_json(&json!({"config_hash": hash, "dataset_hash": manifest.config_hash, "reports": summary}))
}

fn sweep(cfg: &mut RunConfig, out: &Path, grid: Option<Vec<f64>>, per_cell: Option<usize>) -> Result<()> {
    if let Some(g) = grid {
        cfg.sweep.sigma_grid = g;
    }
    if let Some(n) = per_cell {
        cfg.sweep.scenarios_per_cell = n;
    }
    cfg.validate()?;
    let hash = cfg.hash()?;
    let rows = noise_sweep(cfg, &cfg.sweep.sigma_grid.clone())?;
    std::fs::create_dir_all(out)?;
    let path = out.join("noise_sweep.csv");
    write_sweep_csv(&path, &rows, &hash)?;
    print_json(&json!({"config_hash": hash, "csv": path, "rows": rows}))
}

fn report(out: &Path) -> Result<()> {
    let reports: Vec<ViewReport> = FeatureView::ALL
        .iter()
        .filter(|v| out.join(format!("metrics_{v}.json")).exists())
        .map(|v| ViewReport::read(out, *v))
        .collect::<proxsim::Result<_>>()?;
    let sweep = out.join("noise_sweep.csv");
    if reports.is_empty() && !sweep.exists() {
        bail!(proxsim::Error::Input(format!("no reports found in {}", out.display())));
    }
    let mut summary = json!({});
    if !reports.is_empty() {
        let path = out.join("summary.csv");
        write_summary_csv(&path, &reports)?;
        summary["summary_csv"] = json!(path);
        summary["views"] = reports
            .iter()
            .map(|r| {
                json!({
                    "view": r.view,
                    "config_hash": r.config_hash,
                    "accuracy": r.rows.accuracy,
                    "macro_f1": r.rows.macro_f1,
                    "macro_auroc": r.rows.macro_auroc,
                    "per_class": r.rows.per_class,
                    "scenario_accuracy": r.scenarios.accuracy,
                })
            })
            .collect();
    }
    if sweep.exists() {
        summary["noise_sweep_csv"] = json!(sweep);
    }
    print_json(&summary)
}

fn run(cli: Cli) -> Result<()> {
    let mut cfg = load_config(&cli)?;
    match &cli.command {
        Command::Generate { out, scenarios_per_cell } => generate(&mut cfg, out, *scenarios_per_cell),
        Command::Features(args) => features(&cfg, args),
        Command::TrainEval(args) => train_eval_cmd(&cfg, args),
        Command::NoiseSweep { out, sigma_grid, scenarios_per_cell } => {
            sweep(&mut cfg, out, sigma_grid.clone(), *scenarios_per_cell)
        }
        Command::Report { out } => report(out),
    }
}

/// 1 usage/config, 2 I/O, 3 anything else.
fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<proxsim::Error>() {
            if e.is_io() {
                return 2;
            }
            if e.is_usage() {
                return 1;
            }
            return 3;
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return 2;
        }
    }
    3
}

fn init_threads() -> Result<()> {
    if let Ok(v) = std::env::var("PROXSIM_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|n| *n > 0)
            .with_context(|| format!("PROXSIM_THREADS must be a positive integer, got '{v}'"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Err(e) = init_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
