//! `hwlab`: command-line front end of the numerical laboratory.
//!
//! Every run writes its outputs and a `manifest.json` to a fresh directory
//! `{command}-{timestamp}-{hash}` below the output root (`--out`, else the
//! `HWLAB_OUT` environment variable, else `./runs`). Parameters come from
//! flags, then from a `key = value` file given by `--config`, then from
//! built-in defaults. Exit codes: 0 success, 1 invalid input, 2 numerical
//! failure (including checks that ran but missed their tolerance).

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{
    CheckArgs, CheckCmd, EvolveArgs, EvolveCmd, GroundArgs, GroundCmd, ModulationArgs, ModulationCmd, OracleArgs,
    OracleCmd, Outcome, ProfileArgs, ProfileCmd, SzegoArgs, SzegoCmd,
};
use config::Settings;
use error::{CliError, EXIT_NUMERICAL};
use output::{output_root, RunDir};

#[derive(Debug, Parser)]
#[command(
    name = "hwlab",
    version,
    about = "Soliton profiles, modulation dynamics and PDE runs for the half-wave and Szego equations"
)]
struct Cli {
    /// Flat `key = value` configuration file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output root (overrides HWLAB_OUT).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed recorded with the run; the computations are deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Accept parameters outside their documented ranges, with a warning.
    #[arg(long, global = true)]
    force: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve the traveling-wave profiles for a list of speeds.
    Profile(ProfileArgs),
    /// Solve the ground state and report its mass.
    Ground(GroundArgs),
    /// Integral identities of the Szego profile and the determinant check.
    Oracle(OracleArgs),
    /// Integrate the two-bubble modulation system and report on the regime.
    Modulation(ModulationArgs),
    /// Integrate the two-soliton Szego dynamics.
    Szego(SzegoArgs),
    /// Run a PDE simulation with diagnostics.
    Evolve(EvolveArgs),
    /// Run the acceptance suite.
    Check(CheckArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Profile(_) => "profile",
            Command::Ground(_) => "ground",
            Command::Oracle(_) => "oracle",
            Command::Modulation(_) => "modulation",
            Command::Szego(_) => "szego",
            Command::Evolve(_) => "evolve",
            Command::Check(_) => "check",
        }
    }
}

type Runner = Box<dyn FnOnce(&mut RunDir) -> Result<Outcome, CliError>>;

fn resolve(cmd: Command, s: &mut Settings, force: bool) -> Result<Runner, CliError> {
    Ok(match cmd {
        Command::Profile(a) => {
            let c = ProfileCmd::resolve(a, s)?;
            Box::new(move |r| c.execute(r))
        }
        Command::Ground(a) => {
            let c = GroundCmd::resolve(a, s)?;
            Box::new(move |r| c.execute(r))
        }
        Command::Oracle(a) => {
            let c = OracleCmd::resolve(a, s)?;
            Box::new(move |r| c.execute(r))
        }
        Command::Modulation(a) => {
            let c = ModulationCmd::resolve(a, s, force)?;
            Box::new(move |r| c.execute(r))
        }
        Command::Szego(a) => {
            let c = SzegoCmd::resolve(a, s)?;
            Box::new(move |r| c.execute(r))
        }
        Command::Evolve(a) => {
            let c = EvolveCmd::resolve(a, s, force)?;
            Box::new(move |r| c.execute(r))
        }
        Command::Check(a) => {
            let c = CheckCmd::resolve(a, s)?;
            Box::new(move |r| c.execute(r))
        }
    })
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let mut settings = Settings::from_file(cli.config.as_deref())?;
    let seed = settings.get("seed", cli.seed, 0u64)?;
    let force = settings.get("force", cli.force.then_some(true), false)?;
    let name = cli.command.name();
    let runner = resolve(cli.command, &mut settings, force)?;
    settings.check_unused()?;
    log::info!("{name}: seed {seed}, parameters {:?}", settings.resolved());
    let mut dir = RunDir::create(&output_root(cli.out.as_deref()), name, settings.resolved(), seed)?;
    println!("run directory: {}", dir.path.display());
    match runner(&mut dir) {
        Ok(outcome) => {
            let failed = outcome.verifying && outcome.items.iter().any(|i| !i.pass);
            let code = if failed { EXIT_NUMERICAL } else { 0 };
            dir.finish(settings.resolved(), &outcome.items, code, None)?;
            Ok(code)
        }
        Err(e) => {
            dir.finish(settings.resolved(), &[], e.exit_code(), Some(e.to_string()))?;
            Err(e)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Usage errors are invalid input; help and version are not errors.
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                error::EXIT_VALIDATION as u8
            } else {
                0
            });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
