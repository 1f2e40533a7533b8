use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Parser, ValueEnum};

use resonance_lab::cli::{parse_scenario, run, write_manifest, Command, RunOptions};

#[derive(Debug, Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum Cmd {
    Geometry,
    Evolve,
    Rates,
    OscillatoryTables,
    All,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Geometry => Command::Geometry,
            Cmd::Evolve => Command::Evolve,
            Cmd::Rates => Command::Rates,
            Cmd::OscillatoryTables => Command::OscillatoryTables,
            Cmd::All => Command::All,
        }
    }
}

/// Space-time resonance experiments for quadratic dispersive interactions.
#[derive(Debug, Parser)]
#[command(name = "resonance-lab", version)]
struct Args {
    command: Cmd,
    /// Scenario file.
    #[arg(long)]
    scenario: PathBuf,
    /// Output directory.
    #[arg(long, env = "RESONANCE_LAB_OUT")]
    out: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Override the scenario's t_max; later times are dropped.
    #[arg(long = "t-max")]
    t_max: Option<f64>,
    /// Override the resonance-set tracing resolution.
    #[arg(long)]
    resolution: Option<usize>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    if let Some(n) = args.jobs {
        if n == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot size the worker pool: {e}");
            return ExitCode::from(2);
        }
    }
    let text = match std::fs::read_to_string(&args.scenario) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.scenario.display());
            return ExitCode::from(2);
        }
    };
    let file = match parse_scenario(&text) {
        Ok(f) => f,
        Err(diags) => {
            for d in diags {
                eprintln!("{}: {d}", args.scenario.display());
            }
            return ExitCode::from(2);
        }
    };
    let opts = RunOptions { out: args.out.clone(), t_max: args.t_max, resolution: args.resolution };
    let started = Instant::now();
    let command: Command = args.command.into();
    let summary = match run(&file, command, &opts) {
        Ok(s) => s,
        Err(f) => {
            eprintln!("error: {f}");
            return ExitCode::from(2);
        }
    };
    let stamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let files: Vec<String> = summary.files.iter().map(|p| p.display().to_string()).collect();
    let manifest = write_manifest(
        &opts.out,
        &[
            ("command", command.name().to_string()),
            ("scenario", args.scenario.display().to_string()),
            ("version", env!("CARGO_PKG_VERSION").to_string()),
            ("threads", rayon::current_num_threads().to_string()),
            ("t_max_override", args.t_max.map(|t| t.to_string()).unwrap_or_else(|| "none".into())),
            ("resolution_override", args.resolution.map(|r| r.to_string()).unwrap_or_else(|| "none".into())),
            ("finished_unix_seconds", stamp.to_string()),
            ("elapsed_seconds", format!("{:.3}", started.elapsed().as_secs_f64())),
            ("files", files.join(" ")),
            ("rows", summary.rows.len().to_string()),
            ("failures", summary.failures().to_string()),
        ],
    );
    if let Err(e) = manifest {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    println!("{} rows, {} failed; outputs in {}", summary.rows.len(), summary.failures(), opts.out.display());
    ExitCode::from(summary.exit_code() as u8)
}
