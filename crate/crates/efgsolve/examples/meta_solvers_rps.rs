//! Runs every meta-strategy solver on two hand-built matrix games:
//! rock-paper-scissors, whose unique equilibrium is uniform, and an
//! asymmetric 2x2 zero-sum game whose equilibrium is (0.4, 0.6) for both
//! sides.

use efgsolve::psro::solvers::{
    MetaStrategySolver, NashLpMss, PrdMss, RegretMatchingMss, ShorEvalParams, ShorTrainParams,
    UniformMss,
};
use efgsolve::psro::{MetaGame, PayoffTensor};

fn matrix_game(rows: &[Vec<f64>]) -> MetaGame {
    let n = rows.len();
    let m = rows[0].len();
    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
    let mirrored: Vec<f64> = flat.iter().map(|v| -v).collect();
    MetaGame::from_tensors(vec![
        PayoffTensor::from_data(&[n, m], flat).unwrap(),
        PayoffTensor::from_data(&[n, m], mirrored).unwrap(),
    ])
    .unwrap()
}

fn show(name: &str, solver: &mut dyn MetaStrategySolver, game: &MetaGame) {
    let mixtures = solver.solve(game).unwrap();
    let fmt = |m: &[f64]| {
        m.iter()
            .map(|v| format!("{v:.4}"))
            .collect::<Vec<_>>()
            .join(" ")
    };
    println!("  {name:<10} p0 [{}]  p1 [{}]", fmt(&mixtures[0]), fmt(&mixtures[1]));
}

fn main() {
    let rps = matrix_game(&[
        vec![0.0, -1.0, 1.0],
        vec![1.0, 0.0, -1.0],
        vec![-1.0, 1.0, 0.0],
    ]);
    let skewed = matrix_game(&[vec![2.0, -1.0], vec![-1.0, 1.0]]);

    for (label, game) in [("rock-paper-scissors", &rps), ("skewed 2x2", &skewed)] {
        println!("{label}:");
        show("uniform", &mut UniformMss, game);
        show("nash_lp", &mut NashLpMss, game);
        show("rm", &mut RegretMatchingMss::default(), game);
        show("prd", &mut PrdMss::default(), game);
        show("shor", &mut ShorTrainParams::default(), game);
        show("shor_eval", &mut ShorEvalParams::default(), game);
    }
    println!("(shor mixes in an annealed softmax pull, so its training-time output");
    println!(" is exploratory rather than an equilibrium estimate)");
}
