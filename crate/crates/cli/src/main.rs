use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cba_cli::config::{load_config_file, ConfigOverlay, Experiment, ProblemKind};
use cba_cli::runner::{describe, run_experiment, write_csv};
use cba_cli::CliError;

/// Self-play saddle-point benchmarks: matrix games and distributionally
/// robust logistic regression, solved by parameter-free conic Blackwell
/// algorithms and step-size-driven baselines.
#[derive(Parser)]
#[command(name = "cba", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run bilinear matrix-game experiments on simplexes.
    MatrixGame(RunArgs),
    /// Run distributionally robust logistic-regression experiments.
    Dro(RunArgs),
    /// Print the resolved parameters (dimensions, bounds, step sizes).
    Describe(DescribeArgs),
}

#[derive(clap::Args)]
struct RunArgs {
    /// JSON config file; explicit flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// CSV output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON summary path (skipped when omitted).
    #[arg(long)]
    summary: Option<PathBuf>,
    #[command(flatten)]
    overlay: ConfigOverlay,
}

#[derive(clap::Args)]
struct DescribeArgs {
    /// Problem to describe: matrix-game or dro.
    problem: String,
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    overlay: ConfigOverlay,
}

fn resolve(
    problem: ProblemKind,
    config: Option<PathBuf>,
    overlay: ConfigOverlay,
) -> Result<Experiment, CliError> {
    let merged = match config {
        Some(path) => overlay.over(load_config_file(&path)?),
        None => overlay,
    };
    Experiment::resolve(problem, merged)
}

fn execute(args: RunArgs, problem: ProblemKind) -> Result<(), CliError> {
    let exp = resolve(problem, args.config, args.overlay)?;
    let output = run_experiment(&exp)?;
    match &args.out {
        Some(path) => {
            let file = std::fs::File::create(path)
                .map_err(|e| CliError::io(format!("cannot create {}: {e}", path.display())))?;
            write_csv(std::io::BufWriter::new(file), &output.rows)?;
        }
        None => write_csv(std::io::stdout().lock(), &output.rows)?,
    }
    if let Some(path) = &args.summary {
        let text = serde_json::to_string_pretty(&output.summary)
            .map_err(|e| CliError::io(format!("cannot encode summary: {e}")))?;
        std::fs::write(path, text)
            .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::MatrixGame(args) => execute(args, ProblemKind::MatrixGame),
        Command::Dro(args) => execute(args, ProblemKind::Dro),
        Command::Describe(args) => {
            let problem: ProblemKind = args.problem.parse()?;
            let exp = resolve(problem, args.config, args.overlay)?;
            print!("{}", describe(&exp)?);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
