use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use landau_spectral::cli::{run, verify, Level, RunConfig};
use landau_spectral::coupling::{build_tensor, cache_file_path, write_tensor};
use landau_spectral::Error;

#[derive(Parser)]
#[command(name = "landau", version, about = "Spectral solver for the homogeneous Landau equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a simulation described by a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the oracle suites and print a JSON report.
    Verify {
        #[arg(long, default_value = "fast")]
        level: Level,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Precompute the coupling tensor into a cache directory.
    BuildTensor {
        #[arg(long)]
        truncation: u32,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            let report = serde_json::json!({ "error": e.kind(), "message": e.to_string() });
            eprintln!("{report}");
            ExitCode::FAILURE
        }
    }
}

fn execute(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Run { config } => {
            let cfg = RunConfig::from_path(&config)?;
            let summary = run(&cfg)?;
            println!("{}", serde_json::to_string_pretty(&summary)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { level, seed } => {
            let report = verify(level, seed)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(if report.passed { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::BuildTensor { truncation, out } => {
            let start = std::time::Instant::now();
            let tensor = build_tensor(truncation)?;
            let path = cache_file_path(&out, truncation);
            write_tensor(&tensor, &path)?;
            eprintln!(
                "coupling tensor N={truncation}: built in {:.1} ms ({})",
                start.elapsed().as_secs_f64() * 1e3,
                path.display()
            );
            println!("{}", path.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}
