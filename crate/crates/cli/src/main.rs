mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use purify::optimizer::{GradientMode, SequenceKind};

use config::{FileConfig, Overrides, RunConfig};
use error::CliResult;

#[derive(Parser)]
#[command(name = "purify", version, about = "Entanglement purification with optimized bilateral gates")]
struct Cli {
    /// Raise log verbosity (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the state families.
    FamiliesList,
    /// Apply a fixed gate for N iterations on a grid and on pdf samples.
    Evaluate(RunArgs),
    /// Optimize one gate per iteration against the ensemble.
    Optimize(RunArgs),
    /// Compare the CNOT simulation with closed forms.
    Oracle(RunArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Sequence {
    LowDiscrepancy,
    PseudoRandom,
}

#[derive(Clone, Copy, ValueEnum)]
enum Gradient {
    Dual,
    CentralDifference,
}

#[derive(Args)]
struct RunArgs {
    /// JSON file with run settings; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    family: Option<String>,
    /// uniform, uniform(a,b], 2x, 2(1-x), 6x(1-x) or disk.
    #[arg(long)]
    pdf: Option<String>,
    /// cnot, identity, angles:a1,...,a15 or file:path.
    #[arg(long)]
    gate: Option<String>,
    #[arg(long, short = 'n')]
    iterations: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    /// Points per axis for tabulated curves.
    #[arg(long)]
    grid: Option<usize>,
    /// Seed for sampling and random restarts.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    restarts: Option<usize>,
    /// L-BFGS-B iteration limit per start.
    #[arg(long)]
    max_iterations: Option<usize>,
    #[arg(long, value_enum)]
    sequence: Option<Sequence>,
    #[arg(long, value_enum)]
    gradient: Option<Gradient>,
    /// Output directory.
    #[arg(long, short = 'o')]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn resolve(self, command: &str) -> CliResult<RunConfig> {
        let file = match &self.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let flags = Overrides {
            family: self.family,
            pdf: self.pdf,
            gate: self.gate,
            iterations: self.iterations,
            grid: self.grid,
            out: self.out,
            samples: self.samples,
            seed: self.seed,
            threads: self.threads,
            restarts: self.restarts,
            max_iterations: self.max_iterations,
            sequence: self.sequence.map(|s| match s {
                Sequence::LowDiscrepancy => SequenceKind::LowDiscrepancy,
                Sequence::PseudoRandom => SequenceKind::PseudoRandom,
            }),
            gradient: self.gradient.map(|g| match g {
                Gradient::Dual => GradientMode::Dual,
                Gradient::CentralDifference => GradientMode::CentralDifference,
            }),
        };
        RunConfig::resolve(command, file, flags)
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::FamiliesList => commands::families_list(),
        Command::Evaluate(a) => commands::evaluate(&a.resolve("evaluate")?),
        Command::Optimize(a) => commands::optimize(&a.resolve("optimize")?),
        Command::Oracle(a) => commands::oracle(&a.resolve("oracle")?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
