use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use shrinker_cli::{cmd_catenoid_check, cmd_generate, cmd_solve, cmd_width, CliError, KeyValues, RunConfig};

/// Equivariant sweepouts, Gaussian widths and self-shrinker solves.
#[derive(Debug, Parser)]
#[command(name = "shrinker", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write sweepout slices as meshes plus a manifest.
    Generate,
    /// Estimate widths over a parameter grid and check the inequalities.
    Width,
    /// Build the initial surface and run the shrinker solver.
    Solve,
    /// Margins of the neck-opening families below twice the sphere area.
    CatenoidCheck,
}

/// Flags override the matching keys of the configuration file.
#[derive(Debug, Args)]
struct Flags {
    /// `key = value` configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// sphere, t12-z3, o24-z4, o24-z3, i60-z5 or i60-z3.
    #[arg(long, global = true)]
    scheme: Option<String>,
    /// sphere, doubled, catenoid or catenoid-with-parameter.
    #[arg(long, global = true)]
    family: Option<String>,
    /// Comma-separated `t` values.
    #[arg(long, global = true, allow_hyphen_values = true)]
    t: Option<String>,
    /// Comma-separated `s` values.
    #[arg(long, global = true, allow_hyphen_values = true)]
    s: Option<String>,
    /// Grid resolution, `N` or `NxM`.
    #[arg(long, global = true)]
    grid: Option<String>,
    /// Mesh resolution level.
    #[arg(long, global = true)]
    refine: Option<String>,
    /// Solver residual tolerance (L∞).
    #[arg(long, global = true)]
    tol: Option<String>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<String>,
    /// Seed of the start perturbation.
    #[arg(long, global = true)]
    seed: Option<String>,
}

fn load(flags: &Flags) -> Result<RunConfig, CliError> {
    let mut kv = match &flags.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            KeyValues::parse(&text)?
        }
        None => KeyValues::default(),
    };
    let overrides = [
        ("scheme", &flags.scheme),
        ("family", &flags.family),
        ("t", &flags.t),
        ("s", &flags.s),
        ("grid", &flags.grid),
        ("refine", &flags.refine),
        ("tol", &flags.tol),
        ("out", &flags.out),
        ("seed", &flags.seed),
    ];
    for (key, value) in overrides {
        if let Some(v) = value {
            kv.set(key, v.as_str());
        }
    }
    RunConfig::from_key_values(kv)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = load(&cli.flags).and_then(|cfg| match cli.command {
        Command::Generate => cmd_generate(&cfg),
        Command::Width => cmd_width(&cfg),
        Command::Solve => cmd_solve(&cfg),
        Command::CatenoidCheck => cmd_catenoid_check(&cfg),
    });
    match result {
        Ok(summary) => {
            print!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
