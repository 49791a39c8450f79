use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use aise::aggregate::GroupKind;
use aise::exposure::{DenominatorPolicy, IndexKind};
use aise::gateway::PromptVariant;
use aise::pipeline::{Overrides, Pipeline, PipelineError, RunConfig};

/// Occupational exposure to AI startups.
#[derive(Parser)]
#[command(version)]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Use the offline word-overlap classifier instead of the HTTP backend.
    #[arg(long, global = true)]
    mock: bool,
    /// replace_detailed, replace_short or designed_detailed.
    #[arg(long, global = true)]
    variant: Option<PromptVariant>,
    /// Startup tag filter: ai or robotics.
    #[arg(long, global = true)]
    filter: Option<String>,
    #[arg(long, global = true)]
    concurrency: Option<usize>,
    /// Denominator policy: definitive or total.
    #[arg(long, global = true)]
    policy: Option<DenominatorPolicy>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load and validate the corpus, write the filtered startup snapshot.
    Ingest,
    /// Classify every startup x occupation pair.
    Classify,
    /// Compute an occupation index: aise, rse or aioe.
    Compute { index: IndexKind },
    /// Aggregate AISE by msa, sector or county.
    Aggregate { level: GroupKind },
    /// Correlations, regions, skills, Job Zones and rankings.
    Analyze,
    /// Every stage the configuration has inputs for.
    All,
}

fn run(cli: Cli) -> Result<(), PipelineError> {
    let overrides = Overrides {
        out_dir: cli.out_dir,
        mock: cli.mock,
        variant: cli.variant,
        filter: cli.filter,
        concurrency: cli.concurrency,
        policy: cli.policy,
    };
    let pipeline = Pipeline::new(RunConfig::resolve(cli.config.as_deref(), overrides)?);
    match cli.command {
        Command::Ingest => println!("{}", pipeline.ingest()?),
        Command::Classify => println!("{}", pipeline.classify()?),
        Command::Compute { index } => println!("{}", pipeline.compute(index)?),
        Command::Aggregate { level } => println!("{}", pipeline.aggregate(level)?),
        Command::Analyze => println!("{}", pipeline.analyze()?),
        Command::All => println!("{}", pipeline.run_all()?),
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
