//! Double-oracle run on two-player Kuhn poker: both the training and the
//! evaluation mixtures come from the exact LP equilibrium of the meta-game,
//! so the eval exploitability should collapse once the population spans a
//! Nash equilibrium's support.

use efgsolve::psro::solvers::NashLpMss;
use efgsolve::{run_psro, Game, GameSpec};

fn main() {
    let game = Game::new(GameSpec::Kuhn { players: 2 }).unwrap();
    let mut train = NashLpMss;
    let mut eval = NashLpMss;
    let start = std::time::Instant::now();
    let trace = run_psro(&game, &mut train, &mut eval, 100).unwrap();

    println!("epoch  pop  eval_exploitability  zero_sum_gap");
    for row in &trace.epochs {
        if row.epoch % 10 == 0 || row.epoch == 1 || row.eval_exploitability < 1e-9 {
            println!(
                "{:>5}  {:>3}  {:>19.3e}  {:>12.3e}",
                row.epoch,
                row.population_sizes[0],
                row.eval_exploitability,
                row.meta_zero_sum_gap.unwrap()
            );
        }
    }
    let last = trace.epochs.last().unwrap();
    let best = trace
        .epochs
        .iter()
        .map(|r| r.eval_exploitability)
        .fold(f64::INFINITY, f64::min);
    let worst_gap = trace
        .epochs
        .iter()
        .map(|r| r.meta_zero_sum_gap.unwrap())
        .fold(0.0f64, f64::max);
    println!("final exploitability: {:.6e}", last.eval_exploitability);
    println!("best exploitability:  {:.6e}", best);
    println!("worst zero-sum gap:   {:.3e}", worst_gap);
    println!("elapsed: {:.1?}", start.elapsed());
}
