//! End-to-end checks of the crate's headline guarantees. Each test covers
//! one numbered criterion and prints a `criterion N: pass` line; run with
//! `cargo test --test acceptance -- --nocapture` to see them.

use std::collections::BTreeMap;
use std::time::Instant;

use efgsolve::bench::{self, RunConfig};
use efgsolve::cfr::presets::{discounted, preset};
use efgsolve::cfr::vad::{adaptive_params, VadParams};
use efgsolve::cfr::{regret_matching, vad};
use efgsolve::psro::solvers::{
    hybrid_orm_solver, smoothed_best_pure, HybridParams, MetaStrategySolver, NashLpMss,
    ShorEvalParams, ShorTrainParams, UniformMss,
};
use efgsolve::psro::{MetaGame, PayoffTensor};
use efgsolve::{
    best_response, expected_returns, exploitability, run_psro, ActionId, CfrSolver, Game,
    GameSpec, TabularPolicy, ToMove,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn kuhn(players: usize) -> Game {
    Game::new(GameSpec::Kuhn { players }).unwrap()
}

fn leduc(players: usize) -> Game {
    Game::new(GameSpec::Leduc { players }).unwrap()
}

fn solve(game: Game, variant: &str, iterations: usize) -> CfrSolver {
    let components = match variant {
        "vad_cfr" => vad::components(&VadParams::default()),
        name => preset(name).unwrap(),
    };
    let mut solver = CfrSolver::new(game, components).unwrap();
    solver.run(iterations);
    solver
}

fn average_exploitability(solver: &CfrSolver) -> f64 {
    let policies = solver.average_policies();
    let refs: Vec<&TabularPolicy> = policies.iter().collect();
    exploitability(solver.game(), &refs).unwrap()
}

#[test]
fn c01_regret_matching_and_softmax_identities() {
    let start = Instant::now();

    let mixed: BTreeMap<ActionId, f64> = [(0, 2.0), (1, 1.0), (2, -1.0)].into();
    let sigma = regret_matching(&mixed);
    assert!((sigma[&0] - 2.0 / 3.0).abs() <= 1e-12);
    assert!((sigma[&1] - 1.0 / 3.0).abs() <= 1e-12);
    assert!(sigma[&2].abs() <= 1e-12);

    let hopeless: BTreeMap<ActionId, f64> = [(0, -3.0), (1, 0.0), (2, -0.5)].into();
    for value in regret_matching(&hopeless).values() {
        assert!((value - 1.0 / 3.0).abs() <= 1e-12);
    }

    let lone: BTreeMap<ActionId, f64> = [(7, -4.0)].into();
    assert_eq!(regret_matching(&lone)[&7], 1.0);

    for payoffs in [
        vec![1.0, 0.0],
        vec![0.3, -0.7, 2.1],
        vec![5.0, 5.0, 5.0, 5.0],
        vec![-10.0, 4.5, 0.0, 3.25, 1.5],
    ] {
        for temperature in [1.0, 0.25, 10.0] {
            let base = smoothed_best_pure(&payoffs, temperature);
            assert!((base.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
            for shift in [1.0, -2.5, 1000.0] {
                let shifted: Vec<f64> = payoffs.iter().map(|v| v + shift).collect();
                let moved = smoothed_best_pure(&shifted, temperature);
                for (a, b) in base.iter().zip(&moved) {
                    assert!((a - b).abs() <= 1e-12);
                }
            }
        }
    }

    assert!(start.elapsed().as_secs_f64() < 1.0);
    println!("criterion 1: pass");
}

/// Flattened game tree for the enumeration oracle: no state clones or string
/// keys on the hot path.
enum OracleNode {
    Terminal(Vec<f64>),
    Chance(Vec<(usize, f64)>),
    Decision {
        player: usize,
        info: usize,
        children: Vec<usize>,
    },
}

struct Arena {
    nodes: Vec<OracleNode>,
    root: usize,
    info_player: Vec<usize>,
    info_key: Vec<String>,
    info_actions: Vec<Vec<ActionId>>,
}

fn build_arena(game: &Game) -> Arena {
    fn push(
        state: &efgsolve::GameState,
        arena: &mut Arena,
        ids: &mut BTreeMap<(usize, String), usize>,
    ) -> usize {
        let node = match state.to_move() {
            ToMove::Terminal => OracleNode::Terminal(state.returns().unwrap()),
            ToMove::Chance => OracleNode::Chance(
                state
                    .chance_outcomes()
                    .into_iter()
                    .map(|(action, prob)| (push(&state.child(action).unwrap(), arena, ids), prob))
                    .collect(),
            ),
            ToMove::Player(player) => {
                let key = state.info_key().key;
                let actions = state.legal_actions();
                let info = *ids.entry((player, key.clone())).or_insert_with(|| {
                    arena.info_player.push(player);
                    arena.info_key.push(key);
                    arena.info_actions.push(actions.clone());
                    arena.info_player.len() - 1
                });
                let children = actions
                    .iter()
                    .map(|&action| push(&state.child(action).unwrap(), arena, ids))
                    .collect();
                OracleNode::Decision {
                    player,
                    info,
                    children,
                }
            }
        };
        arena.nodes.push(node);
        arena.nodes.len() - 1
    }

    let mut arena = Arena {
        nodes: Vec::new(),
        root: 0,
        info_player: Vec::new(),
        info_key: Vec::new(),
        info_actions: Vec::new(),
    };
    let mut ids = BTreeMap::new();
    arena.root = push(&game.initial_state(), &mut arena, &mut ids);
    arena
}

/// First information set of `player` not yet pinned to an action, searching
/// only paths consistent with the pins so far.
fn first_free(arena: &Arena, node: usize, player: usize, pins: &[Option<u8>]) -> Option<usize> {
    match &arena.nodes[node] {
        OracleNode::Terminal(_) => None,
        OracleNode::Chance(children) => children
            .iter()
            .find_map(|&(child, _)| first_free(arena, child, player, pins)),
        OracleNode::Decision {
            player: p,
            info,
            children,
        } => {
            if *p == player {
                match pins[*info] {
                    Some(choice) => first_free(arena, children[choice as usize], player, pins),
                    None => Some(*info),
                }
            } else {
                children
                    .iter()
                    .find_map(|&child| first_free(arena, child, player, pins))
            }
        }
    }
}

/// Every reduced pure strategy of `player`: pin an action at the first free
/// reachable information set and recurse over the alternatives.
fn reduced_pure_strategies(arena: &Arena, player: usize) -> Vec<Vec<Option<u8>>> {
    fn collect(
        arena: &Arena,
        player: usize,
        pins: &mut Vec<Option<u8>>,
        out: &mut Vec<Vec<Option<u8>>>,
    ) {
        match first_free(arena, arena.root, player, pins) {
            None => out.push(pins.clone()),
            Some(info) => {
                for choice in 0..arena.info_actions[info].len() {
                    pins[info] = Some(choice as u8);
                    collect(arena, player, pins, out);
                }
                pins[info] = None;
            }
        }
    }
    let mut pins = vec![None; arena.info_key.len()];
    let mut out = Vec::new();
    collect(arena, player, &mut pins, &mut out);
    out
}

fn eval_pure(
    arena: &Arena,
    node: usize,
    player: usize,
    pins: &[Option<u8>],
    probs: &[Vec<f64>],
) -> f64 {
    match &arena.nodes[node] {
        OracleNode::Terminal(returns) => returns[player],
        OracleNode::Chance(children) => children
            .iter()
            .map(|&(child, prob)| prob * eval_pure(arena, child, player, pins, probs))
            .sum(),
        OracleNode::Decision {
            player: p,
            info,
            children,
        } => {
            if *p == player {
                let choice = pins[*info].expect("reachable set must be pinned") as usize;
                eval_pure(arena, children[choice], player, pins, probs)
            } else {
                probs[*info]
                    .iter()
                    .zip(children)
                    .map(|(&prob, &child)| prob * eval_pure(arena, child, player, pins, probs))
                    .sum()
            }
        }
    }
}

/// Best value over every enumerated pure strategy of `player` against the
/// profile.
fn enumerated_pure_best(
    arena: &Arena,
    profile: &[&TabularPolicy],
    player: usize,
    strategies: &[Vec<Option<u8>>],
) -> f64 {
    let probs: Vec<Vec<f64>> = (0..arena.info_key.len())
        .map(|info| {
            let owner = arena.info_player[info];
            if owner == player {
                return Vec::new();
            }
            let dist = profile[owner].distribution(&arena.info_key[info]).unwrap();
            arena.info_actions[info]
                .iter()
                .map(|&action| {
                    dist.iter()
                        .find(|&&(candidate, _)| candidate == action)
                        .map(|&(_, prob)| prob)
                        .unwrap()
                })
                .collect()
        })
        .collect();
    strategies
        .iter()
        .map(|pins| eval_pure(arena, arena.root, player, pins, &probs))
        .fold(f64::NEG_INFINITY, f64::max)
}

fn random_profile(game: &Game, rng: &mut ChaCha8Rng) -> Vec<TabularPolicy> {
    (0..game.num_players())
        .map(|player| {
            let mut policy = TabularPolicy::uniform(game, player);
            let keys: Vec<String> = policy.iter().map(|(key, _)| key.clone()).collect();
            for key in keys {
                let dist = policy.distribution(&key).unwrap().to_vec();
                let weights: Vec<f64> = dist.iter().map(|_| rng.gen::<f64>() + 0.01).collect();
                let total: f64 = weights.iter().sum();
                policy.set(
                    key,
                    dist.iter()
                        .zip(&weights)
                        .map(|(&(action, _), w)| (action, w / total))
                        .collect(),
                );
            }
            policy
        })
        .collect()
}

#[test]
fn c02_best_response_matches_pure_enumeration() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20240817);
    for (game, profiles) in [(kuhn(2), 20), (kuhn(3), 12)] {
        let arena = build_arena(&game);
        let strategies: Vec<Vec<Vec<Option<u8>>>> = (0..game.num_players())
            .map(|player| reduced_pure_strategies(&arena, player))
            .collect();
        assert!(strategies.iter().all(|s| s.len() > 1));
        for _ in 0..profiles {
            let profile = random_profile(&game, &mut rng);
            let refs: Vec<&TabularPolicy> = profile.iter().collect();
            for player in 0..game.num_players() {
                let recursive = best_response(&game, &refs, player).unwrap().value;
                let enumerated =
                    enumerated_pure_best(&arena, &refs, player, &strategies[player]);
                assert!(
                    (recursive - enumerated).abs() <= 1e-12,
                    "{} player {player}: {recursive} vs {enumerated}",
                    game.spec().label()
                );
            }
        }
    }
    assert!(start.elapsed().as_secs_f64() < 30.0);
    println!("criterion 2: pass");
}

#[test]
fn c03_kuhn_game_value() {
    let start = Instant::now();
    let solver = solve(kuhn(2), "cfr_plus", 10_000);
    let policies = solver.average_policies();
    let refs: Vec<&TabularPolicy> = policies.iter().collect();
    let values = expected_returns(solver.game(), &refs).unwrap();
    assert!(
        (values[0] - (-1.0 / 18.0)).abs() <= 1e-3,
        "player-0 value {}",
        values[0]
    );
    assert!(start.elapsed().as_secs_f64() < 30.0);
    println!("criterion 3: pass");
}

#[test]
fn c04_convergence_thresholds() {
    let start = Instant::now();

    let kuhn_runs: Vec<(&str, f64)> = ["cfr", "cfr_plus", "dcfr", "vad_cfr"]
        .iter()
        .map(|name| (*name, average_exploitability(&solve(kuhn(2), name, 1000))))
        .collect();
    let by_name = |name: &str| kuhn_runs.iter().find(|(n, _)| *n == name).unwrap().1;
    assert!(by_name("cfr") <= 1e-2, "cfr {}", by_name("cfr"));
    assert!(by_name("cfr_plus") <= 1e-3, "cfr_plus {}", by_name("cfr_plus"));
    assert!(by_name("dcfr") <= 1e-3, "dcfr {}", by_name("dcfr"));
    assert!(by_name("vad_cfr") <= 1e-2, "vad_cfr {}", by_name("vad_cfr"));
    assert!(by_name("vad_cfr") <= by_name("cfr"));

    for name in ["cfr", "cfr_plus", "lcfr", "dcfr", "pcfr_plus", "vad_cfr", "aod_cfr"] {
        let components = match name {
            "vad_cfr" => vad::components(&VadParams::default()),
            "aod_cfr" => efgsolve::cfr::aod::components(&Default::default()),
            _ => preset(name).unwrap(),
        };
        let mut solver = CfrSolver::new(leduc(2), components).unwrap();
        solver.run(10);
        let early = average_exploitability(&solver);
        solver.run(990);
        let late = average_exploitability(&solver);
        assert!(late < early, "{name}: {late} !< {early}");
    }

    assert!(start.elapsed().as_secs_f64() < 180.0);
    println!("criterion 4: pass");
}

#[test]
fn c05_vad_structural_invariants() {
    let start = Instant::now();
    let params = VadParams::default();

    let mut solver = CfrSolver::new(leduc(2), vad::components(&params)).unwrap();
    for completed in 1..=520usize {
        solver.run_iteration();
        for node in solver.nodes() {
            for &regret in node.cumulative_regret.values() {
                assert!(regret >= params.negative_regret_cap - 1e-12);
            }
            if completed <= params.warmup_iterations {
                assert!(node.cumulative_policy.values().all(|&m| m == 0.0));
            }
        }
    }
    assert!(solver
        .nodes()
        .any(|node| node.cumulative_policy.values().any(|&m| m > 0.0)));

    for iteration in [0usize, 1, 10, 499, 500, 12_345] {
        for magnitude in [0.0, 0.3, 2.0, 50.0] {
            for ewma in [0.0, 0.5, 1.9, 40.0] {
                let regrets: BTreeMap<ActionId, f64> = [(0, magnitude), (1, -magnitude)].into();
                let adapted = adaptive_params(iteration, &regrets, &params, ewma);
                assert!(adapted.effective_beta <= adapted.effective_alpha);
            }
        }
    }

    assert!(start.elapsed().as_secs_f64() < 60.0);
    println!("criterion 5: pass");
}

#[test]
fn c06_lcfr_equals_unit_discounts() {
    let mut linear = CfrSolver::new(kuhn(2), preset("lcfr").unwrap()).unwrap();
    let mut unit = CfrSolver::new(kuhn(2), discounted(1.0, 1.0, 1.0)).unwrap();
    linear.run(50);
    unit.run(50);
    let mut compared = 0usize;
    for node in linear.nodes() {
        let twin = unit.node(&node.key).unwrap();
        assert_eq!(node.cumulative_regret, twin.cumulative_regret);
        assert_eq!(node.cumulative_policy, twin.cumulative_policy);
        assert_eq!(node.current_policy, twin.current_policy);
        compared += 1;
    }
    assert_eq!(compared, unit.nodes().count());
    assert!(compared > 0);
    println!("criterion 6: pass");
}

#[test]
fn c07_double_oracle_convergence() {
    let start = Instant::now();
    let game = kuhn(2);
    let mut train = NashLpMss;
    let mut eval = NashLpMss;
    let trace = run_psro(&game, &mut train, &mut eval, 100).unwrap();
    let final_epoch = trace.epochs.last().unwrap();
    assert!(
        final_epoch.eval_exploitability < 1e-2,
        "final {}",
        final_epoch.eval_exploitability
    );
    for epoch in &trace.epochs {
        let gap = epoch.meta_zero_sum_gap.unwrap();
        assert!(gap <= 1e-12, "epoch {} gap {}", epoch.epoch, gap);
    }
    assert!(start.elapsed().as_secs_f64() < 120.0);
    println!("criterion 7: pass");
}

#[test]
fn c08_hybrid_solver_sanity() {
    let rps = MetaGame::from_tensors(vec![
        PayoffTensor::from_data(
            &[3, 3],
            vec![0.0, -1.0, 1.0, 1.0, 0.0, -1.0, -1.0, 1.0, 0.0],
        )
        .unwrap(),
        PayoffTensor::from_data(
            &[3, 3],
            vec![0.0, 1.0, -1.0, -1.0, 0.0, 1.0, 1.0, -1.0, 0.0],
        )
        .unwrap(),
    ])
    .unwrap();
    let plain = HybridParams {
        blend: 0.0,
        temperature: 1.0,
        momentum: 0.0,
        gain_normalization: true,
        diversity: 0.0,
        return_average: true,
    };
    let mixtures = hybrid_orm_solver(&rps, 10_000, &plain);
    for mixture in &mixtures {
        for &mass in mixture {
            assert!((mass - 1.0 / 3.0).abs() <= 0.05, "{mixture:?}");
        }
    }

    let train = ShorTrainParams::default();
    let (blend, temperature, diversity) = train.annealed_at(75);
    assert_eq!(blend, 0.05);
    assert_eq!(temperature, 0.01);
    assert_eq!(diversity, 0.001);

    let mut eval = ShorEvalParams::default();
    let first = eval.solve(&rps).unwrap();
    let second = eval.solve(&rps).unwrap();
    assert_eq!(first, second);
    let wired = hybrid_orm_solver(
        &rps,
        eval.solver_iterations(3),
        &HybridParams {
            blend: eval.blend,
            temperature: eval.temperature,
            momentum: eval.momentum,
            gain_normalization: eval.gain_normalization,
            diversity: eval.diversity,
            return_average: false,
        },
    );
    assert_eq!(first, wired);
    println!("criterion 8: pass");
}

#[test]
fn c09_shor_end_to_end() {
    let start = Instant::now();
    let game = kuhn(2);

    let mut train = ShorTrainParams::default();
    let mut eval = ShorEvalParams::default();
    let annealed = run_psro(&game, &mut train, &mut eval, 100).unwrap();

    let mut base_train = UniformMss;
    let mut base_eval = UniformMss;
    let baseline = run_psro(&game, &mut base_train, &mut base_eval, 100).unwrap();

    let annealed_final = annealed.epochs.last().unwrap().eval_exploitability;
    let baseline_final = baseline.epochs.last().unwrap().eval_exploitability;
    assert!(
        annealed_final <= baseline_final,
        "annealed {annealed_final} vs uniform {baseline_final}"
    );
    assert!(start.elapsed().as_secs_f64() < 300.0);
    println!("criterion 9: pass");
}

fn strip_elapsed(csv: &str) -> String {
    csv.lines()
        .map(|line| {
            if line.starts_with('#') {
                line.to_string()
            } else {
                let fields: Vec<&str> = line.split(',').collect();
                fields[..fields.len() - 1].join(",")
            }
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn config(pairs: &[(&str, &str)]) -> RunConfig {
    let owned: Vec<(String, String)> = pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
    RunConfig::from_pairs(&owned).unwrap()
}

#[test]
fn c10_traces_are_deterministic() {
    for variant in ["cfr", "cfr_plus", "dcfr", "vad_cfr"] {
        let run = config(&[
            ("variant", variant),
            ("iterations", "1000"),
            ("eval_every", "100"),
        ]);
        let first = bench::cfr_trace_csv(&run, &bench::run_cfr_trace(&run).unwrap());
        let second = bench::cfr_trace_csv(&run, &bench::run_cfr_trace(&run).unwrap());
        assert_eq!(strip_elapsed(&first), strip_elapsed(&second), "{variant}");
    }

    for (train, eval) in [("nash_lp", "nash_lp"), ("shor", "shor_eval")] {
        let run = config(&[("train_mss", train), ("eval_mss", eval), ("epochs", "100")]);
        let first = bench::psro_trace_csv(&run, &bench::run_psro_trace(&run).unwrap());
        let second = bench::psro_trace_csv(&run, &bench::run_psro_trace(&run).unwrap());
        assert_eq!(strip_elapsed(&first), strip_elapsed(&second), "{train}");
    }
    println!("criterion 10: pass");
}
