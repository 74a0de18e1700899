use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use winegraph::pipeline::{self, PipelineConfig, Stage};

/// Food-wine pairing pipeline: taste profiles from reviews, sommelier
/// rules, and heterogeneous graph embeddings.
#[derive(Parser)]
#[command(name = "winegraph", version, about)]
struct Cli {
    /// Pipeline config file (flat key=value lines)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker threads for training stages; 1 = deterministic mode
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Seed for every stochastic stage
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Accept artifacts produced under a different config hash
    #[arg(long, global = true)]
    force: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ingest reviews, mine the phrase vocabulary, write documents
    Prepare,
    /// Train phrase embeddings over the prepared sentences
    TrainText,
    /// Compute aroma vectors and the seven taste scalars per item
    Profile,
    /// Run the elimination and pairing rules, rank wines per food
    Pair,
    /// Augment the food graph with wine nodes and pairing edges
    BuildGraph,
    /// Generate metapath walks and train node embeddings
    TrainGraph,
    /// Cluster node embeddings against category labels, export projection
    Evaluate,
    /// Print the top-k wines for a food item
    Query {
        /// Food node id or name
        food: String,
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
    /// Print a config template with every key and its default
    ConfigTemplate,
}

fn load_config(cli: &Cli) -> winegraph::Result<PipelineConfig> {
    let path = cli.config.as_ref().ok_or_else(|| {
        winegraph::Error::config("`--config <path>` is required for this command".to_string())
    })?;
    let mut cfg = PipelineConfig::from_file(path)?;
    cfg.apply_overrides(cli.seed, cli.workers);
    Ok(cfg)
}

fn run(cli: &Cli) -> winegraph::Result<()> {
    let stage = match &cli.command {
        Command::Prepare => Some(Stage::Prepare),
        Command::TrainText => Some(Stage::TrainText),
        Command::Profile => Some(Stage::Profile),
        Command::Pair => Some(Stage::Pair),
        Command::BuildGraph => Some(Stage::BuildGraph),
        Command::TrainGraph => Some(Stage::TrainGraph),
        Command::Evaluate => Some(Stage::Evaluate),
        Command::Query { .. } | Command::ConfigTemplate => None,
    };
    match &cli.command {
        Command::ConfigTemplate => {
            print!("{}", pipeline::config_template());
            Ok(())
        }
        Command::Query { food, k } => {
            let cfg = load_config(cli)?;
            let hits = pipeline::query(&cfg, food, *k, cli.force)?;
            for hit in &hits {
                println!("{}. {} ({:.3})", hit.rank, hit.wine, hit.similarity);
            }
            println!("stage=query status=ok food={food} results={}", hits.len());
            Ok(())
        }
        _ => {
            let cfg = load_config(cli)?;
            let summary = pipeline::run_stage(stage.unwrap(), &cfg, cli.force)?;
            println!("{summary}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
