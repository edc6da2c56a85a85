//! Tabular behavior policies keyed by information-set strings.

use std::collections::BTreeMap;

use crate::game::{ActionId, Game, GameState, ToMove};

/// One player's behavior policy: a distribution over legal actions at every
/// information set, stored against the canonical key strings from
/// [`crate::game::GameState::info_key`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TabularPolicy {
    table: BTreeMap<String, Vec<(ActionId, f64)>>,
}

impl TabularPolicy {
    pub fn new() -> TabularPolicy {
        TabularPolicy { table: BTreeMap::new() }
    }

    /// Uniform-random policy for `player`, with an entry for every info set
    /// the player can reach under any play.
    pub fn uniform(game: &Game, player: usize) -> TabularPolicy {
        let mut policy = TabularPolicy::new();
        fill_uniform(&game.initial_state(), player, &mut policy);
        policy
    }

    pub fn distribution(&self, key: &str) -> Option<&[(ActionId, f64)]> {
        self.table.get(key).map(Vec::as_slice)
    }

    /// Probability of `action` at `key`; 0.0 if either is absent.
    pub fn prob(&self, key: &str, action: ActionId) -> f64 {
        self.table
            .get(key)
            .and_then(|dist| dist.iter().find(|&&(a, _)| a == action))
            .map(|&(_, p)| p)
            .unwrap_or(0.0)
    }

    pub fn set(&mut self, key: impl Into<String>, dist: Vec<(ActionId, f64)>) {
        self.table.insert(key.into(), dist);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Vec<(ActionId, f64)>)> {
        self.table.iter()
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

fn fill_uniform(state: &GameState, player: usize, policy: &mut TabularPolicy) {
    match state.to_move() {
        ToMove::Terminal => {}
        ToMove::Chance => {
            for (action, _) in state.chance_outcomes() {
                fill_uniform(&state.child(action).unwrap(), player, policy);
            }
        }
        ToMove::Player(p) => {
            let actions = state.legal_actions();
            if p == player {
                let key = state.info_key();
                if policy.distribution(&key.key).is_none() {
                    let w = 1.0 / actions.len() as f64;
                    policy.set(key.key, actions.iter().map(|&a| (a, w)).collect());
                }
            }
            for a in actions {
                fill_uniform(&state.child(a).unwrap(), player, policy);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::GameSpec;

    #[test]
    fn uniform_covers_all_info_sets() {
        let game = Game::new(GameSpec::Kuhn { players: 2 }).unwrap();
        let p0 = TabularPolicy::uniform(&game, 0);
        let p1 = TabularPolicy::uniform(&game, 1);
        // 3 cards x 2 observable betting prefixes per player.
        assert_eq!(p0.len(), 6);
        assert_eq!(p1.len(), 6);
        for (_, dist) in p0.iter().chain(p1.iter()) {
            let total: f64 = dist.iter().map(|&(_, p)| p).sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn uniform_play_is_zero_sum_in_expectation() {
        let game = Game::new(GameSpec::Leduc { players: 2 }).unwrap();
        let p0 = TabularPolicy::uniform(&game, 0);
        let p1 = TabularPolicy::uniform(&game, 1);
        let value = crate::game::expected_returns(&game, &[&p0, &p1]).unwrap();
        assert!((value[0] + value[1]).abs() < 1e-12);
    }

    #[test]
    fn prob_defaults_to_zero() {
        let mut policy = TabularPolicy::new();
        policy.set("k", vec![(0, 0.25), (1, 0.75)]);
        assert_eq!(policy.prob("k", 1), 0.75);
        assert_eq!(policy.prob("k", 2), 0.0);
        assert_eq!(policy.prob("missing", 0), 0.0);
    }
}
