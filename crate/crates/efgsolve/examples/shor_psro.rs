//! Annealed blended meta-solvers against the uniform baseline on two-player
//! Kuhn poker: same expansion oracle, different mixtures over the population.

use efgsolve::psro::solvers::{ShorEvalParams, ShorTrainParams, UniformMss};
use efgsolve::{run_psro, Game, GameSpec, PsroTrace};

fn summarize(label: &str, trace: &PsroTrace) {
    let first = trace.epochs.first().unwrap();
    let last = trace.epochs.last().unwrap();
    let best = trace
        .epochs
        .iter()
        .map(|r| r.eval_exploitability)
        .fold(f64::INFINITY, f64::min);
    println!(
        "{label:<8}  first {:.4e}  final {:.4e}  best {:.4e}  pop {}",
        first.eval_exploitability, last.eval_exploitability, best, last.population_sizes[0]
    );
}

fn main() {
    let game = Game::new(GameSpec::Kuhn { players: 2 }).unwrap();
    let epochs = 100;

    let start = std::time::Instant::now();
    let mut train = ShorTrainParams::default();
    let mut eval = ShorEvalParams::default();
    let shor = run_psro(&game, &mut train, &mut eval, epochs).unwrap();
    let shor_elapsed = start.elapsed();

    let start = std::time::Instant::now();
    let mut train = UniformMss;
    let mut eval = UniformMss;
    let uniform = run_psro(&game, &mut train, &mut eval, epochs).unwrap();
    let uniform_elapsed = start.elapsed();

    println!("two-player Kuhn, {epochs} epochs");
    summarize("annealed", &shor);
    summarize("uniform", &uniform);
    println!(
        "elapsed: annealed {:.1?}, uniform {:.1?}",
        shor_elapsed, uniform_elapsed
    );

    let a = shor.epochs.last().unwrap().eval_exploitability;
    let b = uniform.epochs.last().unwrap().eval_exploitability;
    println!(
        "annealed final {} uniform final ({:.4e} vs {:.4e})",
        if a <= b { "<=" } else { ">" },
        a,
        b
    );
}
