use clap::{Parser, Subcommand};
use rayon::prelude::*;
use relay_convoy::checks;
use relay_convoy::scenario::{resolve_scenario, with_override, ScenarioConfig};
use relay_convoy::trace::{export_plotdata, read_trace_file, run_scenario, write_run, ExportKind, Summary};
use relay_convoy::SimError;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Directional-antenna relay convoy simulator.
#[derive(Parser)]
#[command(name = "convoy", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file or preset (e.g. `indoor_corridor:2`).
    Run {
        scenario: String,
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory for trace.csv and summary.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one scenario per value of a dotted field, in parallel.
    Sweep {
        scenario: String,
        /// `field=v1,v2,...`, e.g. `radio.n=2,2.5,3`.
        #[arg(long)]
        vary: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extract a plot series from a trace file.
    Export {
        trace: PathBuf,
        /// throughput, bearing, path or rssi.
        #[arg(long)]
        kind: String,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the invariant self-checks.
    Check,
}

fn default_out(config: &ScenarioConfig) -> PathBuf {
    match &config.out_dir {
        Some(dir) => PathBuf::from(dir),
        None => Path::new("runs").join(config.name.replace(':', "_")),
    }
}

fn run(scenario: &str, seed: Option<u64>, out: Option<PathBuf>) -> Result<(), SimError> {
    let mut config = resolve_scenario(scenario)?;
    if let Some(seed) = seed {
        config.seed = seed;
    }
    let dir = out.unwrap_or_else(|| default_out(&config));
    let summary = write_run(&dir, &run_scenario(&config)?)?;
    println!("{}", summary.to_json());
    eprintln!("wrote {}", dir.display());
    Ok(())
}

fn sweep(scenario: &str, vary: &str, out: Option<PathBuf>) -> Result<(), SimError> {
    let base = resolve_scenario(scenario)?;
    let (field, values) = vary
        .split_once('=')
        .ok_or_else(|| relay_convoy::ConfigError::Invalid(vec![format!("--vary `{vary}`: expected field=v1,v2,...")]))?;
    let configs = values
        .split(',')
        .map(|v| Ok((v.trim().to_string(), with_override(&base, field, v.trim())?)))
        .collect::<Result<Vec<_>, SimError>>()?;
    let root = out.unwrap_or_else(|| default_out(&base).with_extension("sweep"));
    let results: Vec<(String, Result<Summary, SimError>)> = configs
        .par_iter()
        .map(|(value, config)| {
            let dir = root.join(format!("{field}={value}"));
            (value.clone(), run_scenario(config).and_then(|rows| write_run(&dir, &rows)))
        })
        .collect();
    let mut first_error = None;
    for (value, result) in results {
        match result {
            Ok(s) => println!(
                "{field}={value}\tmean {:.2} Mbps\tmin {:.2} Mbps\tdisconnected at {}",
                s.mean_throughput_mbps,
                s.min_throughput_mbps,
                s.first_disconnection_s.map_or("never".to_string(), |t| format!("{t} s")),
            ),
            Err(e) => {
                eprintln!("{field}={value}: {e}");
                first_error.get_or_insert(e);
            }
        }
    }
    eprintln!("wrote {}", root.display());
    first_error.map_or(Ok(()), Err)
}

fn export(trace: &Path, kind: &str, out: Option<PathBuf>) -> Result<(), SimError> {
    let kind: ExportKind = kind.parse()?;
    let rows = read_trace_file(trace)?;
    match out {
        Some(path) => export_plotdata(&rows, kind, std::fs::File::create(path)?),
        None => export_plotdata(&rows, kind, std::io::stdout().lock()),
    }
}

fn check() -> bool {
    let outcomes = checks::run_all();
    for o in &outcomes {
        println!("{o}");
    }
    outcomes.iter().all(|o| o.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { scenario, seed, out } => run(&scenario, seed, out),
        Command::Sweep { scenario, vary, out } => sweep(&scenario, &vary, out),
        Command::Export { trace, kind, out } => export(&trace, &kind, out),
        Command::Check => {
            return if check() { ExitCode::SUCCESS } else { ExitCode::from(1) };
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
