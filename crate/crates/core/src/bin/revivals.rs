use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use revivals::cli::{self, Command};
use revivals::config::RunConfig;

#[derive(Parser)]
#[command(name = "revivals", version, about = "Wave-packet revival lab")]
struct Args {
    #[command(subcommand)]
    command: Cmd,
    /// TOML run configuration; defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override a config entry, e.g. `--set packet.re=1.5` (repeatable).
    #[arg(long = "set", value_name = "K=V", global = true)]
    set: Vec<String>,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for Monte Carlo trials (overrides the config).
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Autocorrelation scan, CSV `t,correlation`.
    Scan,
    /// Fractional-revival decomposition, JSON.
    Fractional,
    /// Berry phases of a parameter loop, JSON.
    Berry,
    /// Stroboscopic evolution, CSV `k,correlation,theta_k`.
    Strobe,
    /// Near-revival gap statistics, JSON.
    Threegap,
    /// Runs every acceptance criterion, JSON report.
    Verify,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { cli::EXIT_CONFIG } else { cli::EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let loaded = match &args.config {
        Some(path) => RunConfig::from_path(path, &args.set),
        None => RunConfig::load("", &args.set),
    };
    let mut cfg = match loaded {
        Ok(c) => c,
        Err(e) => {
            eprintln!("revivals: {e}");
            return ExitCode::from(cli::EXIT_CONFIG as u8);
        }
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    let command = match args.command {
        Cmd::Scan => Command::Scan,
        Cmd::Fractional => Command::Fractional,
        Cmd::Berry => Command::Berry,
        Cmd::Strobe => Command::Strobe,
        Cmd::Threegap => Command::Threegap,
        Cmd::Verify => Command::Verify,
    };
    let output = match cli::run(command, &cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("revivals: {e}");
            return ExitCode::from(cli::exit_code(&e) as u8);
        }
    };
    let written = match &args.out {
        Some(path) => std::fs::write(path, &output.bytes),
        None => std::io::stdout().lock().write_all(&output.bytes),
    };
    if let Err(e) = written {
        eprintln!("revivals: cannot write output: {e}");
        return ExitCode::from(cli::EXIT_CONFIG as u8);
    }
    if output.ok {
        ExitCode::SUCCESS
    } else {
        eprintln!("revivals: some checks failed");
        ExitCode::from(cli::EXIT_NUMERICAL as u8)
    }
}
