//! Runs every solver variant on two-player Kuhn poker and prints how the
//! exploitability of the average policy falls over time.

use efgsolve::cfr::presets;
use efgsolve::{exploitability, CfrSolver, Game, GameSpec};

fn main() {
    let variants = ["cfr", "cfr_plus", "lcfr", "dcfr", "pcfr_plus", "vad", "aod"];
    let checkpoints = [10, 100, 1000];

    println!("{:>10} {:>12} {:>12} {:>12}", "variant", "T=10", "T=100", "T=1000");
    for name in variants {
        let game = Game::new(GameSpec::Kuhn { players: 2 }).unwrap();
        let mut solver =
            CfrSolver::new(game.clone(), presets::preset(name).unwrap()).unwrap();
        let mut row = format!("{name:>10}");
        let mut done = 0;
        for &t in &checkpoints {
            solver.run(t - done);
            done = t;
            let avg = solver.average_policies();
            let profile: Vec<_> = avg.iter().collect();
            let exp = exploitability(&game, &profile).unwrap();
            row.push_str(&format!(" {exp:>12.3e}"));
        }
        println!("{row}");
    }
}
