use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use euler_kin::io::{self, Command, GridSpec, IoError, OutputFormat, RunConfig};

/// Euler calculus and kinematic formula harness.
#[derive(Parser, Debug)]
#[command(name = "euler-kin", version)]
struct Cli {
    /// integrate | convolve | pushforward | valuations | kinematic-flat | crofton | verify-s3 | recover-s3
    command: Command,
    /// Scene file (JSON); optional for verify-s3 and recover-s3.
    #[arg(long)]
    scene: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    /// nr,ns,rmax
    #[arg(long, default_value = "20,20,0.78")]
    grid: GridSpec,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: OutputFormat,
}

fn execute(cli: &Cli) -> Result<bool, IoError> {
    let scene = cli.scene.as_deref().map(io::parse_scene).transpose()?;
    let config = RunConfig {
        seed: cli.seed,
        samples: cli.samples,
        grid: cli.grid,
        tolerance: cli.tol,
        format: cli.format,
    };
    let started = Instant::now();
    let report = io::run(cli.command, scene.as_ref(), &config)?;
    eprintln!("{}: {:.3} s", cli.command.name(), started.elapsed().as_secs_f64());
    match &cli.out {
        Some(path) => io::write_report(&report, path, cli.format)?,
        None => print!("{}", io::render_report(&report, cli.format)),
    }
    Ok(report.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("tolerance check failed");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
