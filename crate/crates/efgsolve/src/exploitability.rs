//! Exact best response and exploitability over full game trees.
//!
//! The best responder's action values are computed per information set: each
//! member history contributes its continuation value weighted by the reach
//! probability of chance and the opponents (the responder's own actions never
//! discount it). Info sets are processed deepest-first so every later decision
//! of the responder is already fixed when a shallower one is evaluated.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::game::{expected_returns, ActionId, Game, GameState, ToMove};
use crate::policy::TabularPolicy;

const TIE_TOL: f64 = 1e-9;

/// Outcome of [`best_response`]: the responder's value against the fixed
/// opponents and the responding policy itself, uniform over actions whose
/// values tie within `1e-9`.
#[derive(Clone, Debug)]
pub struct BestResponseResult {
    pub player: usize,
    pub value: f64,
    pub policy: TabularPolicy,
}

struct InfoAgg {
    actions: Vec<ActionId>,
    members: Vec<(GameState, f64)>,
    depth: usize,
}

/// Exact best response for `player` against the other entries of `profile`.
/// The responder's own entry in `profile` is ignored.
pub fn best_response(
    game: &Game,
    profile: &[&TabularPolicy],
    player: usize,
) -> Result<BestResponseResult> {
    if profile.len() != game.num_players() {
        return Err(Error::LengthMismatch(format!(
            "profile has {} policies for a {}-player game",
            profile.len(),
            game.num_players()
        )));
    }
    let mut sets: BTreeMap<String, InfoAgg> = BTreeMap::new();
    collect(&game.initial_state(), 1.0, player, profile, &mut sets)?;

    let mut order: Vec<&String> = sets.keys().collect();
    order.sort_by(|a, b| sets[*b].depth.cmp(&sets[*a].depth).then(a.cmp(b)));
    let order: Vec<String> = order.into_iter().cloned().collect();

    let mut policy = TabularPolicy::new();
    let mut memo: HashMap<Vec<ActionId>, f64> = HashMap::new();
    for key in &order {
        let agg = &sets[key];
        let mut q = vec![0.0; agg.actions.len()];
        for (state, reach) in &agg.members {
            if *reach == 0.0 {
                continue;
            }
            for (i, &a) in agg.actions.iter().enumerate() {
                q[i] += *reach * value(&state.child(a)?, player, profile, &policy, &mut memo)?;
            }
        }
        let best = q.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let tied = q.iter().filter(|&&v| v >= best - TIE_TOL).count();
        let mass = 1.0 / tied as f64;
        let dist = agg
            .actions
            .iter()
            .zip(&q)
            .map(|(&a, &v)| (a, if v >= best - TIE_TOL { mass } else { 0.0 }))
            .collect();
        policy.set(key.clone(), dist);
    }

    let value = value(&game.initial_state(), player, profile, &policy, &mut memo)?;
    Ok(BestResponseResult { player, value, policy })
}

/// Average best-response gain across players, clamped at zero so rounding
/// noise never reports a negative number.
pub fn exploitability(game: &Game, profile: &[&TabularPolicy]) -> Result<f64> {
    let u = expected_returns(game, profile)?;
    let mut total = 0.0;
    for p in 0..game.num_players() {
        total += best_response(game, profile, p)?.value - u[p];
    }
    let avg = total / game.num_players() as f64;
    Ok(avg.max(0.0))
}

fn collect(
    state: &GameState,
    reach: f64,
    player: usize,
    profile: &[&TabularPolicy],
    sets: &mut BTreeMap<String, InfoAgg>,
) -> Result<()> {
    match state.to_move() {
        ToMove::Terminal => Ok(()),
        ToMove::Chance => {
            for (action, prob) in state.chance_outcomes() {
                collect(&state.child(action)?, reach * prob, player, profile, sets)?;
            }
            Ok(())
        }
        ToMove::Player(p) if p == player => {
            let key = state.info_key();
            let actions = state.legal_actions();
            let depth = state.history().len();
            let agg = sets.entry(key.key).or_insert_with(|| InfoAgg {
                actions: actions.clone(),
                members: Vec::new(),
                depth,
            });
            agg.members.push((state.clone(), reach));
            for a in actions {
                collect(&state.child(a)?, reach, player, profile, sets)?;
            }
            Ok(())
        }
        ToMove::Player(p) => {
            let key = state.info_key();
            let dist = profile[p]
                .distribution(&key.key)
                .ok_or_else(|| Error::MissingInfoSet(key.key.clone()))?
                .to_vec();
            for (action, prob) in dist {
                collect(&state.child(action)?, reach * prob, player, profile, sets)?;
            }
            Ok(())
        }
    }
}

fn value(
    state: &GameState,
    player: usize,
    profile: &[&TabularPolicy],
    br: &TabularPolicy,
    memo: &mut HashMap<Vec<ActionId>, f64>,
) -> Result<f64> {
    if let Some(&v) = memo.get(state.history()) {
        return Ok(v);
    }
    let v = match state.to_move() {
        ToMove::Terminal => state.returns()?[player],
        ToMove::Chance => {
            let mut acc = 0.0;
            for (action, prob) in state.chance_outcomes() {
                acc += prob * value(&state.child(action)?, player, profile, br, memo)?;
            }
            acc
        }
        ToMove::Player(p) => {
            let key = state.info_key();
            let source = if p == player { br } else { profile[p] };
            let dist = source
                .distribution(&key.key)
                .ok_or_else(|| Error::MissingInfoSet(key.key.clone()))?
                .to_vec();
            let mut acc = 0.0;
            for (action, prob) in dist {
                if prob == 0.0 {
                    continue;
                }
                acc += prob * value(&state.child(action)?, player, profile, br, memo)?;
            }
            acc
        }
    };
    memo.insert(state.history().to_vec(), v);
    Ok(v)
}
