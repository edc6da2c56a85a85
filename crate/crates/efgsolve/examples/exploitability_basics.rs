//! Exact best response and exploitability on two-player Kuhn poker: scores
//! the uniform profile, shows each player's best-response gain, and checks a
//! near-equilibrium profile produced by a short solver run.

use efgsolve::{best_response, exploitability, CfrSolver, Game, GameSpec, TabularPolicy};

fn main() {
    let game = Game::new(GameSpec::Kuhn { players: 2 }).unwrap();

    let uniform: Vec<TabularPolicy> = (0..game.num_players())
        .map(|player| TabularPolicy::uniform(&game, player))
        .collect();
    let profile: Vec<&TabularPolicy> = uniform.iter().collect();

    println!("uniform profile on kuhn2");
    for player in 0..game.num_players() {
        let br = best_response(&game, &profile, player).unwrap();
        println!("  best response of player {player}: value {:+.6}", br.value);
        for (key, dist) in br.policy.iter().take(3) {
            println!("    {key} -> {dist:?}");
        }
    }
    let uniform_gap = exploitability(&game, &profile).unwrap();
    println!("  exploitability {uniform_gap:.6} (exactly 11/24 = {:.6})", 11.0 / 24.0);

    let mut solver = CfrSolver::new(
        game.clone(),
        efgsolve::cfr::presets::preset("cfr_plus").unwrap(),
    )
    .unwrap();
    solver.run(2000);
    let trained = solver.average_policies();
    let trained_refs: Vec<&TabularPolicy> = trained.iter().collect();
    let trained_gap = exploitability(&game, &trained_refs).unwrap();
    println!("after 2000 iterations of cfr_plus: exploitability {trained_gap:.3e}");
}
