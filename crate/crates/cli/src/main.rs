use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use pseudoshift_cli::config::Command as ConfigCommand;
use pseudoshift_cli::selftest::{run_selftest, DEFAULT_SEED};
use pseudoshift_cli::{run, CliError, Report, RunConfig};

#[derive(Parser)]
#[command(name = "pshift", version, about = "Pseudo-shift criterion checker")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Run configuration (TOML)
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Write the JSON report here
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Comparison tolerance
    #[arg(long, global = true, value_name = "X")]
    tol: Option<f64>,
    /// Upper end of the k search window
    #[arg(long = "k-bound", global = true, value_name = "N")]
    k_bound: Option<u64>,
    /// Print nothing on success
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Check a criterion condition on an operator tuple
    Check,
    /// Build and verify a corrector vector
    Construct,
    /// Blow-up/collapse assembly and orbit coverage
    Orbit,
    /// Reproduce a gallery instance
    Gallery,
    /// Run the acceptance suite
    Selftest,
}

fn load(cli: &Cli, expected: ConfigCommand) -> Result<RunConfig, CliError> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::Input("--config: required".into()))?;
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut cfg = RunConfig::parse(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    if cfg.command != expected {
        return Err(CliError::Input(format!(
            "command: config declares `{}`, invoked as `{}`",
            cfg.command.as_str(),
            expected.as_str()
        )));
    }
    if cli.seed.is_some() {
        cfg.seed = cli.seed;
    }
    if cli.tol.is_some() {
        cfg.tol = cli.tol;
    }
    if let Some(k) = cli.k_bound {
        if let Some(c) = cfg.check.as_mut() {
            c.k_bound = Some(k);
        }
        if let Some(g) = cfg.gallery.as_mut() {
            g.k_max = Some(k);
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn emit(cli: &Cli, out: Option<PathBuf>, json: &str) -> Result<(), CliError> {
    if let Some(path) = out {
        std::fs::write(&path, format!("{json}\n")).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
    } else if !cli.quiet {
        let mut stdout = std::io::stdout().lock();
        match writeln!(stdout, "{json}") {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                return Err(CliError::Io { path: "<stdout>".into(), source: e });
            }
            _ => {}
        }
    }
    Ok(())
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    let expected = match cli.command {
        Cmd::Check => ConfigCommand::Check,
        Cmd::Construct => ConfigCommand::Construct,
        Cmd::Orbit => ConfigCommand::Orbit,
        Cmd::Gallery => ConfigCommand::Gallery,
        Cmd::Selftest => {
            let start = Instant::now();
            let seed = cli.seed.unwrap_or(DEFAULT_SEED);
            let result = run_selftest(seed);
            if !cli.quiet {
                for line in result.lines() {
                    eprintln!("{line}");
                }
            }
            let report = Report {
                payload: result.payload(),
                wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
            };
            let code = report.payload.status.exit_code();
            emit(cli, cli.out.clone(), &report.to_json())?;
            return Ok(code);
        }
    };
    let cfg = load(cli, expected)?;
    let report = run(&cfg)?;
    let out = cli.out.clone().or_else(|| cfg.out.as_ref().map(PathBuf::from));
    emit(cli, out, &report.to_json())?;
    Ok(report.payload.status.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
