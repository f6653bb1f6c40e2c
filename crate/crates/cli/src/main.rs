mod error;
mod manifest;
mod output;
mod pipeline;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::CliError;
use crate::output::Outputs;
use crate::pipeline::{Inputs, Stages};

const LOG_ENV: &str = "TRIAD_LOG";

#[derive(Debug, Parser)]
#[command(
    name = "triad",
    version,
    about = "Directed triad census and triad evolution reports"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    options: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
enum Command {
    /// Load and validate the inputs; report ingest statistics.
    Ingest,
    /// Triangle class frequencies per snapshot.
    Census,
    /// Seed sampling and reduction stage sizes.
    Sample,
    /// Transition matrices and change summaries between two snapshots.
    Transitions,
    /// Distance and timezone statistics per triangle class.
    Geo,
    /// Degree distributions, out-degrees by transition class and superstars.
    Degrees,
    /// Every report above.
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Type0 {
    With,
    Without,
    Both,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Options {
    /// TOML file listing `[[snapshot]]` entries (label, path) and an optional `profiles` path.
    #[arg(long, global = true, default_value = "manifest.toml")]
    pub manifest: PathBuf,
    /// Directory for report files.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Worker threads; defaults to the available cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Code-to-type mapping file, one `CODE = TYPE` line per class.
    #[arg(long, global = true)]
    pub mapping: Option<PathBuf>,
    /// Sample this many seeds and analyse the triangle-graphs. `sample` defaults to 100.
    #[arg(long, global = true)]
    pub seeds: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub rng_seed: u64,
    /// Restrict to nodes with a profile before anything else.
    #[arg(long, global = true)]
    pub locations_only: bool,
    /// Origin snapshot index (default: first).
    #[arg(long, global = true)]
    pub origin: Option<usize>,
    /// Destination snapshot index (default: last).
    #[arg(long, global = true)]
    pub destination: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Type0::Both)]
    pub type0: Type0,
    /// Snapshot index for geo and degree reports (default: last).
    #[arg(long, global = true)]
    pub snapshot: Option<usize>,
    /// Number of consecutive timezones a triangle may span.
    #[arg(long, global = true, default_value_t = 3)]
    pub timezone_window: u32,
    /// Upper bound in bytes for materialized triangle sets.
    #[arg(long, global = true)]
    pub memory_budget: Option<u64>,
    /// Minimum percent for a matrix cell to appear in the bubble tables.
    #[arg(long, global = true, default_value_t = 0.5)]
    pub bubble_threshold: f64,
    /// Rows in the superstar table.
    #[arg(long, global = true, default_value_t = 10)]
    pub top: usize,
}

fn run(command: Command, options: &Options) -> Result<(), CliError> {
    let inputs = Inputs::load(options)?;
    let seeds = match command {
        Command::Sample => Some(
            options
                .seeds
                .unwrap_or(triad_core::sampler::DEFAULT_SEED_COUNT),
        ),
        _ => options.seeds,
    };
    let stages = Stages::build(&inputs, options, seeds)?;
    let ctx = report::Context::new(&inputs, &stages, options)?;
    let mut outputs = Outputs::default();
    match command {
        Command::Ingest => report::ingest(&ctx, &mut outputs)?,
        Command::Census => report::census(&ctx, &mut outputs)?,
        Command::Sample => report::sample(&ctx, &mut outputs)?,
        Command::Transitions => report::transitions(&ctx, &mut outputs)?,
        Command::Geo => report::geo(&ctx, &mut outputs)?,
        Command::Degrees => report::degrees(&ctx, &mut outputs)?,
        Command::All => {
            report::ingest(&ctx, &mut outputs)?;
            report::census(&ctx, &mut outputs)?;
            report::sample(&ctx, &mut outputs)?;
            report::transitions(&ctx, &mut outputs)?;
            if inputs.profiles().is_some() {
                report::geo(&ctx, &mut outputs)?;
            } else {
                log::warn!("no profiles in the manifest; skipping geo reports");
            }
            report::degrees(&ctx, &mut outputs)?;
        }
    }
    outputs.write(&options.out)?;
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or(LOG_ENV, "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let threads = cli
        .options
        .threads
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
    {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: cannot start thread pool: {e}");
            return ExitCode::from(3);
        }
    };
    match pool.install(|| run(cli.command, &cli.options)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
