use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use efgsolve::bench::{self, RunConfig};
use efgsolve::Error;

#[derive(Parser)]
#[command(name = "efgsolve", version, about = "Tabular game solvers with CSV traces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a regret-minimization variant and trace exploitability
    Cfr(RunArgs),
    /// Grow a policy population with best-response expansion
    Psro(RunArgs),
    /// Score a variant by negative mean final exploitability over a suite
    Fitness(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Game family: kuhn, leduc, goofspiel, liars_dice
    #[arg(long)]
    game: Option<String>,
    /// Player count for kuhn and leduc
    #[arg(long)]
    players: Option<usize>,
    /// Deck size for goofspiel
    #[arg(long)]
    cards: Option<usize>,
    /// Die faces for liars_dice
    #[arg(long)]
    dice_sides: Option<usize>,
    /// Solver variant: cfr, cfr_plus, lcfr, dcfr, pcfr_plus, vad_cfr, aod_cfr
    #[arg(long)]
    variant: Option<String>,
    /// Meta-strategy solver used for training mixtures
    #[arg(long)]
    train_mss: Option<String>,
    /// Meta-strategy solver used for evaluation mixtures
    #[arg(long)]
    eval_mss: Option<String>,
    /// Solver iterations
    #[arg(long)]
    iterations: Option<usize>,
    /// Population-training epochs
    #[arg(long)]
    epochs: Option<usize>,
    /// Exploitability evaluation cadence in iterations
    #[arg(long)]
    eval_every: Option<usize>,
    /// Recorded in the output sidecar for provenance
    #[arg(long)]
    seed: Option<u64>,
    /// Write the CSV here instead of stdout
    #[arg(long)]
    out: Option<String>,
    /// Flat key=value config file; command-line flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the variant's regret update order: simultaneous, alternating
    #[arg(long)]
    update_mode: Option<String>,
    /// Game suite for fitness: train, test
    #[arg(long)]
    suite: Option<String>,
}

impl RunArgs {
    fn pairs(&self) -> efgsolve::Result<Vec<(String, String)>> {
        let mut pairs = Vec::new();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path).map_err(|err| {
                Error::Config(format!("cannot read config {}: {err}", path.display()))
            })?;
            pairs.extend(bench::parse_kv_text(&text)?);
        }
        let mut push = |key: &str, value: Option<String>| {
            if let Some(value) = value {
                pairs.push((key.to_string(), value));
            }
        };
        push("game", self.game.clone());
        push("players", self.players.map(|v| v.to_string()));
        push("cards", self.cards.map(|v| v.to_string()));
        push("dice_sides", self.dice_sides.map(|v| v.to_string()));
        push("variant", self.variant.clone());
        push("train_mss", self.train_mss.clone());
        push("eval_mss", self.eval_mss.clone());
        push("iterations", self.iterations.map(|v| v.to_string()));
        push("epochs", self.epochs.map(|v| v.to_string()));
        push("eval_every", self.eval_every.map(|v| v.to_string()));
        push("seed", self.seed.map(|v| v.to_string()));
        push("out", self.out.clone());
        push("update_mode", self.update_mode.clone());
        push("suite", self.suite.clone());
        Ok(pairs)
    }
}

fn emit(config: &RunConfig, csv: &str) -> efgsolve::Result<()> {
    match &config.out {
        Some(path) => std::fs::write(path, csv)
            .map_err(|err| Error::Config(format!("cannot write {path}: {err}"))),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> efgsolve::Result<()> {
    match cli.command {
        Command::Cfr(args) => {
            let config = RunConfig::from_pairs(&args.pairs()?)?;
            let rows = bench::run_cfr_trace(&config)?;
            emit(&config, &bench::cfr_trace_csv(&config, &rows))
        }
        Command::Psro(args) => {
            let config = RunConfig::from_pairs(&args.pairs()?)?;
            let trace = bench::run_psro_trace(&config)?;
            emit(&config, &bench::psro_trace_csv(&config, &trace))
        }
        Command::Fitness(args) => {
            let config = RunConfig::from_pairs(&args.pairs()?)?;
            let report = bench::fitness(&config)?;
            for (label, value) in &report.per_game {
                eprintln!("{label}: final exploitability {value:.6e}");
            }
            eprintln!("fitness({}, {}): {:.6e}", report.variant, report.suite, report.fitness);
            emit(&config, &bench::fitness_csv(&config, &report))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
