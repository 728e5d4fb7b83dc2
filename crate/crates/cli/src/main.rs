use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use resq::commands::{cmd_check, cmd_evolve, cmd_scan, cmd_steady};
use resq::config::RunConfig;
use resq::figures::{cmd_figure, FigureOptions};
use resq::CliError;

/// Two-atom entanglement under a squeezed reservoir.
#[derive(Parser)]
#[command(name = "resq", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (created if missing).
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Seed for the random-state reference cloud.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form and numeric steady states.
    Steady,
    /// Run the configured protocol.
    Evolve,
    /// Reproduce a figure dataset: fig2, fig3, fig4 or fig5.
    Figure { name: String },
    /// Regime report for physical parameters.
    Check,
    /// Grid scan over (N, |M|² fraction, τ, θ).
    Scan,
}

fn load(path: &Option<PathBuf>) -> Result<RunConfig, CliError> {
    let path = path.as_ref().ok_or_else(|| CliError::Config("--config is required for this command".into()))?;
    RunConfig::load(path)
}

fn run(cli: &Cli) -> Result<serde_json::Value, CliError> {
    let out: &Path = &cli.out;
    if let Command::Figure { name } = &cli.command {
        let fig2_n = match &cli.config {
            Some(p) => RunConfig::load(p)?.steady.map(|s| s.n),
            None => None,
        };
        std::fs::create_dir_all(out)?;
        return cmd_figure(name, out, &FigureOptions { seed: cli.seed, fig2_n });
    }
    let cfg = load(&cli.config)?;
    std::fs::create_dir_all(out)?;
    match cli.command {
        Command::Steady => cmd_steady(&cfg, out),
        Command::Evolve => cmd_evolve(&cfg, out),
        Command::Check => cmd_check(&cfg, out),
        Command::Scan => cmd_scan(&cfg, out),
        Command::Figure { .. } => unreachable!("handled above"),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(summary) => {
            // a closed pipe downstream is not our failure
            let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(&summary).expect("json serializes"));
            ExitCode::SUCCESS
        }
        Err(e) => {
            log::debug!("{e:?}");
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
