//! Command-line front end: scenario configuration, grid scans over
//! (alpha, mu, tau), and CSV emission with a reproducibility manifest.

mod config;
mod kraus;
mod output;
mod scenario;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::Config;
use scenario::ResolvedConfig;

/// CLI failure with its exit code: 2 config, 3 numeric, 4 I/O.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numeric(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Numeric(m) | CliError::Io(m) => m,
        }
    }
}

impl From<uqsl_core::channels::ChannelError> for CliError {
    fn from(e: uqsl_core::channels::ChannelError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<uqsl_core::qsl::QslError> for CliError {
    fn from(e: uqsl_core::qsl::QslError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<uqsl_core::nonhermitian::NhError> for CliError {
    fn from(e: uqsl_core::nonhermitian::NhError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<uqsl_core::manybody::ManyBodyError> for CliError {
    fn from(e: uqsl_core::manybody::ManyBodyError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "uqsl",
    version,
    about = "Unified-entropy quantum speed limits for nonunitary dynamics",
    long_about = "Runs entropy/QSL scenarios (quantum channels, non-Hermitian generators, \
                  spin chains) over (alpha, mu, tau) grids and emits plot-ready CSV files \
                  plus a reproducibility manifest."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write CSV outputs plus a manifest.
    Run {
        /// Scenario configuration file (flat key = value lines).
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides the `out` key.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker pool width (0 or absent = all cores).
        #[arg(long)]
        threads: Option<usize>,
        /// KEY=VALUE patches applied on top of the file, repeatable.
        #[arg(long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Parse and validate a configuration, printing the resolved keys.
    ValidateConfig {
        #[arg(long)]
        config: PathBuf,
        #[arg(long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// List the available scenarios and their configuration keys.
    ListScenarios,
}

fn load_config(
    path: &PathBuf,
    out: Option<&PathBuf>,
    overrides: &[String],
) -> Result<ResolvedConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
    let mut cfg = Config::parse(&text)?;
    for patch in overrides {
        cfg.apply_override(patch)?;
    }
    if let Some(dir) = out {
        cfg.set("out", dir.display().to_string());
    }
    ResolvedConfig::resolve(cfg)
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run {
            config,
            out,
            threads,
            overrides,
        } => {
            let resolved = load_config(&config, out.as_ref(), &overrides)?;
            let summary = resolved.run(threads)?;
            for (name, checksum) in &summary.files {
                println!(
                    "wrote {}/{name}  sha256 {}",
                    resolved.out_dir().display(),
                    &checksum[..12]
                );
            }
            println!("wrote {}/manifest.txt", resolved.out_dir().display());
            if summary.loose {
                println!(
                    "note: kappa_min dipped below the weight-function floor; \
                     rows carry flag_loose = 1"
                );
            }
            Ok(())
        }
        Command::ValidateConfig { config, overrides } => {
            let resolved = load_config(&config, None, &overrides)?;
            print!("{}", resolved.render());
            println!("# ok: scenario `{}`", resolved.scenario_name());
            Ok(())
        }
        Command::ListScenarios => {
            print!("{}", scenario::scenario_reference());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.exit_code())
        }
    }
}
