//! `fellforge`: run one verification command from a TOML config and write a
//! JSON report. Exit status 0 when every verdict passes, 1 on a verification
//! failure, 2 on a configuration or usage error.

mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use commands::{Outcome, Overrides};
use config::RunConfig;

/// Report layout version; bump on any incompatible change.
const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "fellforge", version, about = "Verification runs for Weyl-type graded *-algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args, Debug)]
struct Global {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Report path (default: the config's `output`, else stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for every sampled sweep.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Residual tolerance for floating-point checks.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Positivity depth K.
    #[arg(long, global = true)]
    depth: Option<usize>,
    /// Corrupt one computed object before verifying it (negative control).
    #[arg(long, global = true, hide = true)]
    inject_corruption: bool,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Positive characters on a rational grid, with refutation witnesses.
    Characters,
    /// Transformation groupoid, pair-groupoid comparison, matrix units.
    Groupoid,
    /// Twist extraction, cocycle check, trivialization, Fell axioms.
    Twist,
    /// Rieffel laws, bundle deformation, inner trivialization.
    Deform,
    /// Truncated representations, graph norms, Cayley transforms, inducibility.
    RepVerify,
    /// Truncated Toeplitz identities.
    Toeplitz,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Characters => "characters",
            Command::Groupoid => "groupoid",
            Command::Twist => "twist",
            Command::Deform => "deform",
            Command::RepVerify => "rep-verify",
            Command::Toeplitz => "toeplitz",
        }
    }

    fn supports_corruption(self) -> bool {
        matches!(self, Command::Twist | Command::RepVerify)
    }
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var("FELLFORGE_THREADS") else { return Ok(()) };
    let n: usize = value.trim().parse().with_context(|| format!("FELLFORGE_THREADS={value:?} is not a thread count"))?;
    if n == 0 {
        bail!("FELLFORGE_THREADS must be at least 1");
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring the thread pool")?;
    Ok(())
}

fn run(cli: &Cli) -> Result<bool> {
    configure_threads()?;
    let g = &cli.global;
    let path = g.config.as_ref().context("--config PATH is required")?;
    let cfg = RunConfig::load(path)?;
    let validated = cfg.validate()?;
    if let Some(t) = g.tolerance {
        if !(t >= 0.0) {
            bail!("--tolerance must be a nonnegative number");
        }
    }
    if g.depth == Some(0) {
        bail!("--depth must be at least 1");
    }
    if g.inject_corruption && !cli.command.supports_corruption() {
        bail!("--inject-corruption is only supported by twist and rep-verify");
    }
    let overrides = Overrides { seed: g.seed, tolerance: g.tolerance, depth: g.depth, inject_corruption: g.inject_corruption };
    let start = Instant::now();
    let Outcome { results, verdicts } = match cli.command {
        Command::Characters => commands::characters(&cfg, &validated, &overrides),
        Command::Groupoid => commands::groupoid(&cfg, &validated, &overrides),
        Command::Twist => commands::twist(&cfg, &validated, &overrides),
        Command::Deform => commands::deform(&cfg, &validated, &overrides),
        Command::RepVerify => commands::rep_verify(&cfg, &validated, &overrides),
        Command::Toeplitz => commands::toeplitz(&cfg, &validated, &overrides),
    }?;
    let passed = verdicts.iter().all(|v| v.passed);
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "command": cli.command.name(),
        "config": commands::echo(&cfg),
        "seed": g.seed,
        "injected_corruption": g.inject_corruption,
        "passed": passed,
        "verdicts": verdicts,
        "results": results,
        "wall_time_seconds": start.elapsed().as_secs_f64(),
    });
    let text = serde_json::to_string_pretty(&report)? + "\n";
    match g.out.as_ref().or(cfg.output.as_ref()) {
        Some(out) => std::fs::write(out, text).with_context(|| format!("writing {}", out.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    for v in verdicts.iter().filter(|v| !v.passed) {
        eprintln!("FAIL {}", v.name);
    }
    Ok(passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
