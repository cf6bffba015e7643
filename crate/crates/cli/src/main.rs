mod config;
mod tasks;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use log::warn;
use serde_json::json;

use config::{parse_config, RunConfig, Task};
use tasks::Table;

/// Quantum particle in a dilating and deforming disk: mode tables, exact
/// co-moving evolution, first-order transition probabilities and the
/// validation suite.
#[derive(Debug, Parser)]
#[command(name = "billiard", version)]
struct Cli {
    /// Task to run; defaults to the `task` key of the configuration.
    #[arg(value_enum)]
    task: Option<Task>,
    /// Configuration file (`key = value` lines).
    #[arg(long)]
    config: PathBuf,
    /// CSV destination; a JSON sidecar with the resolved configuration is
    /// written next to it. Without it the CSV goes to standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
struct Failure {
    kind: &'static str,
    message: String,
}

impl Failure {
    fn new(kind: &'static str, message: impl ToString) -> Self {
        Self { kind, message: message.to_string() }
    }
}

fn sidecar_path(out: &Path) -> PathBuf {
    let path = out.with_extension("json");
    if path == out {
        out.with_extension("meta.json")
    } else {
        path
    }
}

fn write_csv<W: Write>(table: &Table, sink: W) -> Result<(), Failure> {
    let io_failure = |e: csv::Error| Failure::new("io", e);
    let mut writer = csv::Writer::from_writer(sink);
    writer.write_record(&table.columns).map_err(io_failure)?;
    for row in &table.rows {
        writer.write_record(row).map_err(io_failure)?;
    }
    writer.flush().map_err(|e| Failure::new("io", e))
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("BILLIARD_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::new("environment", format!("BILLIARD_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::new("environment", e))
}

fn execute(cli: &Cli) -> Result<bool, Failure> {
    configure_threads()?;
    let text = fs::read_to_string(&cli.config)
        .map_err(|e| Failure::new("io", format!("{}: {e}", cli.config.display())))?;
    let mut config: RunConfig = parse_config(&text).map_err(|e| Failure::new(e.kind(), e))?;
    if let Some(task) = cli.task {
        if task != config.task && text.lines().any(|l| l.trim_start().starts_with("task")) {
            warn!("command line task `{task}` overrides `{}` from the configuration", config.task);
        }
        config.task = task;
    }
    let out = cli.out.clone().or_else(|| config.output.as_ref().map(PathBuf::from));
    let outcome = tasks::run(&config).map_err(|e| Failure::new("computation", e))?;
    match &out {
        Some(path) => {
            let file = fs::File::create(path).map_err(|e| Failure::new("io", format!("{}: {e}", path.display())))?;
            write_csv(&outcome.table, file)?;
            let (_, unit) = config.time_unit();
            let sidecar = json!({
                "config": config.to_json(),
                "columns": outcome.table.columns,
                "rows": outcome.table.rows.len(),
                "time_unit": unit,
                "version": env!("CARGO_PKG_VERSION"),
                "details": outcome.table.meta,
            });
            let text = serde_json::to_string_pretty(&sidecar).map_err(|e| Failure::new("io", e))?;
            fs::write(sidecar_path(path), text + "\n").map_err(|e| Failure::new("io", e))?;
        }
        None if config.task == Task::Validate => {}
        None => write_csv(&outcome.table, io::stdout().lock())?,
    }
    Ok(outcome.all_passed)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(failure) => {
            let record = json!({ "error": { "kind": failure.kind, "message": failure.message } });
            eprintln!("{record}");
            ExitCode::from(2)
        }
    }
}
