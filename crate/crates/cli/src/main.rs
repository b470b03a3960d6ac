use clap::{Parser, Subcommand};
use hirota_cli::commands::{cmd_asymptotics, cmd_oracle, cmd_scatter, cmd_sweep, cmd_verify};
use hirota_cli::{CliError, Context, Format, RunConfig};
use std::path::PathBuf;
use std::process::ExitCode;

/// Scattering, Riemann-Hilbert oracle and long-time asymptotics for the
/// reverse space-time nonlocal Hirota equation.
#[derive(Debug, Parser)]
#[command(name = "hirota", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides output.dir).
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Output format (overrides output.format).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads (overrides threads).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for randomized sampling in checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Reflection coefficients on the λ-grid.
    Scatter,
    /// Leading-order q along every configured ray.
    Asymptotics,
    /// Riemann-Hilbert oracle: t = 0 round trip and deformed solves on the rays.
    Oracle,
    /// Invariant checks; exit code 3 if any fails.
    Verify,
    /// scatter, asymptotics and oracle in one run.
    Sweep,
}

fn run(cli: Cli) -> Result<Vec<PathBuf>, CliError> {
    let path = cli.config.ok_or_else(|| {
        CliError::Config(hirota_cli::config::ConfigError::Invalid {
            field: "--config".into(),
            message: "a configuration file is required".into(),
        })
    })?;
    let mut config = RunConfig::load(&path)?;
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(CliError::Config(hirota_cli::config::ConfigError::Invalid {
                field: "--threads".into(),
                message: "must be at least 1".into(),
            }));
        }
        config.threads = threads;
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build_global()
        .map_err(|e| CliError::Numerical(format!("thread pool: {e}")))?;
    // dense solves stay sequential so output does not depend on scheduling
    faer::set_global_parallelism(faer::Par::Seq);
    let ctx = Context::new(config, cli.out_dir, cli.format, cli.seed);
    match cli.command {
        Command::Scatter => cmd_scatter(&ctx),
        Command::Asymptotics => cmd_asymptotics(&ctx),
        Command::Oracle => cmd_oracle(&ctx),
        Command::Verify => cmd_verify(&ctx),
        Command::Sweep => cmd_sweep(&ctx),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
