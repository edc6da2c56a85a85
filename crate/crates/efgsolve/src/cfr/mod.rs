//! Counterfactual-regret solver with swappable update components.
//!
//! A solver owns three components wired together by the traversal: a regret
//! accumulator (how instantaneous regrets fold into the cumulative table), a
//! policy-from-regret rule (how the next current policy is derived), and a
//! policy accumulator (how the running average is weighted). The five
//! baseline variants in [`presets`] and the two adaptive variants in [`vad`]
//! and [`aod`] are all just component triples; the traversal never changes.
//!
//! Per iteration the tree is walked once per player. At every information
//! set of the updating player the walk aggregates, over member histories, the
//! action values weighted by the reach probability of chance and the other
//! players. Components are then called once per information set, in a fixed
//! discovery order, with those aggregated values:
//!
//! 1. the regret accumulator (instantaneous regrets not yet in the node),
//! 2. the policy accumulator (fed the policy that was just played, the
//!    player's own reach, and the others' reach),
//! 3. the policy-from-regret rule (the node now holds the updated regrets).
//!
//! Each component returns a replacement map; inputs are never mutated in
//! place. Components may keep internal state across calls, so one component
//! instance belongs to exactly one solver run.

pub mod aod;
pub mod presets;
pub mod vad;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::game::{ActionId, Game, GameState, ToMove};
use crate::policy::TabularPolicy;

/// Whether one iteration updates all players against frozen policies or
/// updates them in sequence, each seeing the earlier players' new policies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UpdateMode {
    Simultaneous,
    Alternating,
}

/// Per-information-set solver state.
#[derive(Clone, Debug)]
pub struct InfoStateNode {
    pub key: String,
    pub player: usize,
    pub legal_actions: Vec<ActionId>,
    pub index_in_tabular_policy: usize,
    pub cumulative_regret: BTreeMap<ActionId, f64>,
    pub cumulative_policy: BTreeMap<ActionId, f64>,
    pub current_policy: BTreeMap<ActionId, f64>,
}

pub trait RegretAccumulator {
    /// Returns the replacement cumulative-regret map. `cfr_regrets` are this
    /// iteration's instantaneous regrets, not yet reflected in `node`.
    fn update(
        &mut self,
        node: &InfoStateNode,
        iteration: usize,
        cfr_regrets: &BTreeMap<ActionId, f64>,
    ) -> BTreeMap<ActionId, f64>;
}

pub trait PolicyFromRegretAccumulator {
    /// Returns the next current policy. By the time this runs the node's
    /// cumulative regrets already include `cfr_regrets`.
    fn update(
        &mut self,
        node: &InfoStateNode,
        iteration: usize,
        cfr_regrets: &BTreeMap<ActionId, f64>,
        previous_policy: &BTreeMap<ActionId, f64>,
    ) -> BTreeMap<ActionId, f64>;
}

pub trait PolicyAccumulator {
    /// Returns the replacement cumulative-policy map. `info_state_policy` is
    /// the policy played this iteration, `reach_prob` the updating player's
    /// own reach contribution and `counterfactual_reach_prob` the summed
    /// chance-and-others contribution over member histories.
    fn update(
        &mut self,
        node: &InfoStateNode,
        iteration: usize,
        info_state_policy: &BTreeMap<ActionId, f64>,
        cfr_regrets: &BTreeMap<ActionId, f64>,
        reach_prob: f64,
        counterfactual_reach_prob: f64,
    ) -> BTreeMap<ActionId, f64>;
}

pub struct CfrComponents {
    pub regret_accumulator: Box<dyn RegretAccumulator>,
    pub policy_from_regret: Box<dyn PolicyFromRegretAccumulator>,
    pub policy_accumulator: Box<dyn PolicyAccumulator>,
    pub update_mode: UpdateMode,
}

/// Instantaneous regrets of `policy` given per-action values: the value of
/// each action minus the policy's expected value.
pub fn instantaneous_regrets(
    values: &BTreeMap<ActionId, f64>,
    policy: &BTreeMap<ActionId, f64>,
) -> Result<BTreeMap<ActionId, f64>> {
    if values.len() != policy.len() || !values.keys().all(|a| policy.contains_key(a)) {
        return Err(Error::LengthMismatch(
            "values and policy cover different action sets".into(),
        ));
    }
    let ev: f64 = values.iter().map(|(a, v)| policy[a] * v).sum();
    Ok(values.iter().map(|(&a, &v)| (a, v - ev)).collect())
}

/// Positive-part normalization of cumulative regrets; uniform when no regret
/// is meaningfully positive.
pub fn regret_matching(cumulative_regret: &BTreeMap<ActionId, f64>) -> BTreeMap<ActionId, f64> {
    let total: f64 = cumulative_regret.values().map(|&r| r.max(0.0)).sum();
    if total < 1e-12 {
        let w = 1.0 / cumulative_regret.len() as f64;
        cumulative_regret.keys().map(|&a| (a, w)).collect()
    } else {
        cumulative_regret
            .iter()
            .map(|(&a, &r)| (a, r.max(0.0) / total))
            .collect()
    }
}

enum Node {
    Terminal { returns: Vec<f64> },
    Chance { edges: Vec<(f64, usize)> },
    Decision { player: usize, info: usize, children: Vec<usize> },
}

struct PassData {
    values: Vec<Vec<f64>>,
    cf_reach: Vec<f64>,
    own_reach: Vec<f64>,
    visited: Vec<bool>,
}

pub struct CfrSolver {
    game: Game,
    arena: Vec<Node>,
    infosets: Vec<InfoStateNode>,
    info_index: BTreeMap<String, usize>,
    policy_cache: Vec<Vec<f64>>,
    components: CfrComponents,
    iteration: usize,
}

impl CfrSolver {
    pub fn new(game: Game, components: CfrComponents) -> Result<CfrSolver> {
        let mut solver = CfrSolver {
            game,
            arena: Vec::new(),
            infosets: Vec::new(),
            info_index: BTreeMap::new(),
            policy_cache: Vec::new(),
            components,
            iteration: 0,
        };
        let root = solver.game.initial_state();
        solver.build(&root)?;
        Ok(solver)
    }

    fn build(&mut self, state: &GameState) -> Result<usize> {
        let idx = self.arena.len();
        match state.to_move() {
            ToMove::Terminal => {
                self.arena.push(Node::Terminal { returns: state.returns()? });
            }
            ToMove::Chance => {
                self.arena.push(Node::Chance { edges: Vec::new() });
                let mut edges = Vec::new();
                for (action, prob) in state.chance_outcomes() {
                    edges.push((prob, self.build(&state.child(action)?)?));
                }
                self.arena[idx] = Node::Chance { edges };
            }
            ToMove::Player(player) => {
                let actions = state.legal_actions();
                let key = state.info_key();
                let info = match self.info_index.get(&key.key) {
                    Some(&i) => {
                        if self.infosets[i].legal_actions != actions {
                            return Err(Error::InvalidSpec(format!(
                                "info set {} seen with differing action sets",
                                key.key
                            )));
                        }
                        i
                    }
                    None => {
                        let i = self.infosets.len();
                        let w = 1.0 / actions.len() as f64;
                        self.info_index.insert(key.key.clone(), i);
                        self.infosets.push(InfoStateNode {
                            key: key.key,
                            player,
                            legal_actions: actions.clone(),
                            index_in_tabular_policy: i,
                            cumulative_regret: actions.iter().map(|&a| (a, 0.0)).collect(),
                            cumulative_policy: actions.iter().map(|&a| (a, 0.0)).collect(),
                            current_policy: actions.iter().map(|&a| (a, w)).collect(),
                        });
                        self.policy_cache.push(vec![w; actions.len()]);
                        i
                    }
                };
                self.arena.push(Node::Decision { player, info, children: Vec::new() });
                let mut children = Vec::new();
                for a in actions {
                    children.push(self.build(&state.child(a)?)?);
                }
                if let Node::Decision { children: c, .. } = &mut self.arena[idx] {
                    *c = children;
                }
            }
        }
        Ok(idx)
    }

    pub fn game(&self) -> &Game {
        &self.game
    }

    /// Completed iterations; also the 0-based index components see next.
    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn nodes(&self) -> impl Iterator<Item = &InfoStateNode> {
        self.infosets.iter()
    }

    pub fn node(&self, key: &str) -> Option<&InfoStateNode> {
        self.info_index.get(key).map(|&i| &self.infosets[i])
    }

    pub fn run_iteration(&mut self) {
        match self.components.update_mode {
            UpdateMode::Alternating => {
                for player in 0..self.game.num_players() {
                    let data = self.collect(player);
                    self.apply(player, &data);
                }
            }
            UpdateMode::Simultaneous => {
                let passes: Vec<PassData> =
                    (0..self.game.num_players()).map(|p| self.collect(p)).collect();
                for (player, data) in passes.iter().enumerate() {
                    self.apply(player, data);
                }
            }
        }
        self.iteration += 1;
    }

    pub fn run(&mut self, iterations: usize) {
        for _ in 0..iterations {
            self.run_iteration();
        }
    }

    fn collect(&self, updating: usize) -> PassData {
        let mut data = PassData {
            values: self
                .infosets
                .iter()
                .map(|n| vec![0.0; n.legal_actions.len()])
                .collect(),
            cf_reach: vec![0.0; self.infosets.len()],
            own_reach: vec![0.0; self.infosets.len()],
            visited: vec![false; self.infosets.len()],
        };
        self.walk(0, updating, 1.0, 1.0, &mut data);
        data
    }

    fn walk(&self, idx: usize, updating: usize, own: f64, others: f64, data: &mut PassData) -> f64 {
        match &self.arena[idx] {
            Node::Terminal { returns } => returns[updating],
            Node::Chance { edges } => edges
                .iter()
                .map(|&(p, child)| p * self.walk(child, updating, own, others * p, data))
                .sum(),
            Node::Decision { player, info, children } => {
                let sigma = &self.policy_cache[*info];
                if *player == updating {
                    let mut value = 0.0;
                    for (a, &child) in children.iter().enumerate() {
                        let v = self.walk(child, updating, own * sigma[a], others, data);
                        data.values[*info][a] += others * v;
                        value += sigma[a] * v;
                    }
                    data.visited[*info] = true;
                    data.own_reach[*info] = own;
                    data.cf_reach[*info] += others;
                    value
                } else {
                    let mut value = 0.0;
                    for (a, &child) in children.iter().enumerate() {
                        value += sigma[a] * self.walk(child, updating, own, others * sigma[a], data);
                    }
                    value
                }
            }
        }
    }

    fn apply(&mut self, updating: usize, data: &PassData) {
        for i in 0..self.infosets.len() {
            if !data.visited[i] || self.infosets[i].player != updating {
                continue;
            }
            let played: BTreeMap<ActionId, f64> = self.infosets[i].current_policy.clone();
            let values: BTreeMap<ActionId, f64> = self.infosets[i]
                .legal_actions
                .iter()
                .map(|&a| (a, data.values[i][a]))
                .collect();
            let regrets = instantaneous_regrets(&values, &played)
                .expect("traversal produced full action coverage");

            let new_regret =
                self.components
                    .regret_accumulator
                    .update(&self.infosets[i], self.iteration, &regrets);
            self.infosets[i].cumulative_regret = new_regret;

            let new_cumulative = self.components.policy_accumulator.update(
                &self.infosets[i],
                self.iteration,
                &played,
                &regrets,
                data.own_reach[i],
                data.cf_reach[i],
            );
            self.infosets[i].cumulative_policy = new_cumulative;

            let next = self.components.policy_from_regret.update(
                &self.infosets[i],
                self.iteration,
                &regrets,
                &played,
            );
            for (slot, &a) in self.policy_cache[i]
                .iter_mut()
                .zip(&self.infosets[i].legal_actions)
            {
                *slot = next.get(&a).copied().unwrap_or(0.0);
            }
            self.infosets[i].current_policy = next;
        }
    }

    /// Normalized average policies, one per player; uniform at info sets
    /// whose cumulative policy is still all zero.
    pub fn average_policies(&self) -> Vec<TabularPolicy> {
        let mut out = vec![TabularPolicy::new(); self.game.num_players()];
        for node in &self.infosets {
            let total: f64 = node.cumulative_policy.values().sum();
            let dist: Vec<(ActionId, f64)> = if total < 1e-12 {
                let w = 1.0 / node.legal_actions.len() as f64;
                node.legal_actions.iter().map(|&a| (a, w)).collect()
            } else {
                node.legal_actions
                    .iter()
                    .map(|&a| (a, node.cumulative_policy.get(&a).copied().unwrap_or(0.0) / total))
                    .collect()
            };
            out[node.player].set(node.key.clone(), dist);
        }
        out
    }

    /// The policies being played right now, one per player.
    pub fn current_policies(&self) -> Vec<TabularPolicy> {
        let mut out = vec![TabularPolicy::new(); self.game.num_players()];
        for node in &self.infosets {
            let dist: Vec<(ActionId, f64)> = node
                .legal_actions
                .iter()
                .map(|&a| (a, node.current_policy.get(&a).copied().unwrap_or(0.0)))
                .collect();
            out[node.player].set(node.key.clone(), dist);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::GameSpec;

    fn map(entries: &[(ActionId, f64)]) -> BTreeMap<ActionId, f64> {
        entries.iter().cloned().collect()
    }

    #[test]
    fn regret_matching_examples() {
        let sigma = regret_matching(&map(&[(0, 2.0), (1, 1.0), (2, -1.0)]));
        assert!((sigma[&0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((sigma[&1] - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(sigma[&2], 0.0);

        let fallback = regret_matching(&map(&[(0, -3.0), (1, 0.0)]));
        assert_eq!(fallback[&0], 0.5);
        assert_eq!(fallback[&1], 0.5);

        let single = regret_matching(&map(&[(7, -2.0)]));
        assert_eq!(single[&7], 1.0);
    }

    #[test]
    fn instantaneous_regret_examples() {
        let r = instantaneous_regrets(&map(&[(0, 1.0), (1, 0.0)]), &map(&[(0, 0.5), (1, 0.5)]))
            .unwrap();
        assert!((r[&0] - 0.5).abs() < 1e-15);
        assert!((r[&1] + 0.5).abs() < 1e-15);

        let det = instantaneous_regrets(&map(&[(0, 3.0), (1, 1.0)]), &map(&[(0, 1.0), (1, 0.0)]))
            .unwrap();
        assert_eq!(det[&0], 0.0);
        assert_eq!(det[&1], -2.0);

        let flat = instantaneous_regrets(&map(&[(0, 2.0), (1, 2.0)]), &map(&[(0, 0.3), (1, 0.7)]))
            .unwrap();
        assert_eq!(flat[&0], 0.0);
        assert_eq!(flat[&1], 0.0);

        assert!(instantaneous_regrets(&map(&[(0, 1.0)]), &map(&[(1, 1.0)])).is_err());
    }

    #[test]
    fn first_iteration_regrets_match_hand_traversal() {
        // Under uniform play the counterfactual action values at player 0's
        // jack info set are -5/12 (check) and -1/6 (bet), and at player 1's
        // queen-facing-bet info set -1/6 (fold) and 0 (call). Both players
        // update against the frozen uniform profile on iteration 0.
        let game = Game::new(GameSpec::Kuhn { players: 2 }).unwrap();
        let mut solver = CfrSolver::new(game, presets::preset("cfr").unwrap()).unwrap();
        solver.run_iteration();

        let jack = solver.node("kuhn|p0|0|").unwrap();
        assert!((jack.cumulative_regret[&0] + 0.125).abs() < 1e-12);
        assert!((jack.cumulative_regret[&1] - 0.125).abs() < 1e-12);
        // Regret matching then puts all mass on betting.
        assert_eq!(jack.current_policy[&0], 0.0);
        assert_eq!(jack.current_policy[&1], 1.0);

        let queen = solver.node("kuhn|p1|1|1").unwrap();
        assert!((queen.cumulative_regret[&0] + 1.0 / 12.0).abs() < 1e-12);
        assert!((queen.cumulative_regret[&1] - 1.0 / 12.0).abs() < 1e-12);
    }

    #[test]
    fn current_policies_stay_distributions() {
        let game = Game::new(GameSpec::Kuhn { players: 3 }).unwrap();
        let mut solver = CfrSolver::new(game, presets::preset("cfr_plus").unwrap()).unwrap();
        for _ in 0..5 {
            solver.run_iteration();
            for node in solver.nodes() {
                let total: f64 = node.current_policy.values().sum();
                assert!((total - 1.0).abs() < 1e-9, "{}: {}", node.key, total);
                assert!(node.current_policy.values().all(|&p| p >= 0.0));
            }
        }
    }

    #[test]
    fn fresh_solver_average_is_uniform() {
        let game = Game::new(GameSpec::Kuhn { players: 2 }).unwrap();
        let solver = CfrSolver::new(game, presets::preset("cfr").unwrap()).unwrap();
        let avg = solver.average_policies();
        for policy in &avg {
            for (_, dist) in policy.iter() {
                for &(_, p) in dist {
                    assert_eq!(p, 0.5);
                }
            }
        }
    }

    #[test]
    fn discovery_order_indexes_are_dense() {
        let game = Game::new(GameSpec::Leduc { players: 2 }).unwrap();
        let solver = CfrSolver::new(game, presets::preset("cfr").unwrap()).unwrap();
        for (i, node) in solver.nodes().enumerate() {
            assert_eq!(node.index_in_tabular_policy, i);
        }
    }
}
