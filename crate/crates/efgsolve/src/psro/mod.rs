//! Population-based training: keep one policy set per player, solve the
//! payoff tensor over the populations with a pluggable meta-strategy solver,
//! and grow each set by an exact best response to the opponents' mixture.
//!
//! Every tensor entry is an exact expected return, never a sample, so traces
//! are reproducible bit for bit. Evaluation happens after the epoch's
//! expansion: the recorded exploitability always covers the grown population.

pub mod solvers;

use std::collections::BTreeMap;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::exploitability::{best_response, exploitability};
use crate::game::{expected_returns, ActionId, Game, GameState, ToMove};
use crate::policy::TabularPolicy;
use crate::psro::solvers::MetaStrategySolver;

/// Dense row-major tensor of payoffs indexed by one policy choice per player.
#[derive(Clone, Debug, PartialEq)]
pub struct PayoffTensor {
    shape: Vec<usize>,
    data: Vec<f64>,
}

impl PayoffTensor {
    pub fn zeros(shape: &[usize]) -> PayoffTensor {
        let len = shape.iter().product();
        PayoffTensor {
            shape: shape.to_vec(),
            data: vec![0.0; len],
        }
    }

    pub fn from_data(shape: &[usize], data: Vec<f64>) -> Result<PayoffTensor> {
        let len: usize = shape.iter().product();
        if data.len() != len {
            return Err(Error::LengthMismatch(format!(
                "tensor shape {:?} holds {} entries, got {}",
                shape,
                len,
                data.len()
            )));
        }
        Ok(PayoffTensor {
            shape: shape.to_vec(),
            data,
        })
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.shape.len());
        let mut off = 0;
        for (axis, &j) in idx.iter().enumerate() {
            debug_assert!(j < self.shape[axis]);
            off = off * self.shape[axis] + j;
        }
        off
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: f64) {
        let off = self.offset(idx);
        self.data[off] = value;
    }

    /// Sums out `axis` against `weights`, leaving a tensor of one lower rank.
    pub fn contract(&self, axis: usize, weights: &[f64]) -> PayoffTensor {
        assert_eq!(self.shape[axis], weights.len());
        let outer: usize = self.shape[..axis].iter().product();
        let axis_len = self.shape[axis];
        let inner: usize = self.shape[axis + 1..].iter().product();
        let mut shape = self.shape.clone();
        shape.remove(axis);
        let mut data = vec![0.0; outer * inner];
        for o in 0..outer {
            for (j, &w) in weights.iter().enumerate() {
                let src = (o * axis_len + j) * inner;
                let dst = o * inner;
                for k in 0..inner {
                    data[dst + k] += w * self.data[src + k];
                }
            }
        }
        PayoffTensor { shape, data }
    }
}

/// One payoff tensor per player; entry `[j_0, .., j_{N-1}]` of tensor `i` is
/// player `i`'s exact expected return when each player `k` commits to its
/// population policy `j_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct MetaGame {
    pub tensors: Vec<PayoffTensor>,
}

impl MetaGame {
    /// Rank-`players` tensors with every axis empty; extending from this
    /// state computes the full tensor.
    pub fn empty(players: usize) -> MetaGame {
        let shape = vec![0; players];
        MetaGame {
            tensors: (0..players).map(|_| PayoffTensor::zeros(&shape)).collect(),
        }
    }

    pub fn from_tensors(tensors: Vec<PayoffTensor>) -> Result<MetaGame> {
        if tensors.is_empty() {
            return Err(Error::LengthMismatch(
                "meta-game needs at least one tensor".into(),
            ));
        }
        let shape = tensors[0].shape().to_vec();
        if shape.len() != tensors.len() || tensors.iter().any(|t| t.shape() != shape.as_slice()) {
            return Err(Error::LengthMismatch(format!(
                "meta-game wants {n} equally shaped tensors of rank {n}",
                n = tensors.len()
            )));
        }
        Ok(MetaGame { tensors })
    }

    pub fn num_players(&self) -> usize {
        self.tensors.len()
    }

    /// Population sizes per player.
    pub fn shape(&self) -> &[usize] {
        self.tensors[0].shape()
    }

    /// Largest deviation from `tensor_0 = -tensor_1`; `None` unless exactly
    /// two players.
    pub fn zero_sum_gap(&self) -> Option<f64> {
        if self.tensors.len() != 2 {
            return None;
        }
        let gap = self.tensors[0]
            .data()
            .iter()
            .zip(self.tensors[1].data())
            .fold(0.0f64, |m, (a, b)| m.max((a + b).abs()));
        Some(gap)
    }
}

/// Per-player policy sets grown by the training loop.
#[derive(Clone, Debug)]
pub struct Population {
    pub policies: Vec<Vec<TabularPolicy>>,
}

impl Population {
    /// One uniform-random policy per player, the round-zero seed.
    pub fn seed_uniform(game: &Game) -> Population {
        Population {
            policies: (0..game.num_players())
                .map(|p| vec![TabularPolicy::uniform(game, p)])
                .collect(),
        }
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.policies.iter().map(Vec::len).collect()
    }
}

fn next_index(idx: &mut [usize], shape: &[usize]) -> bool {
    for axis in (0..shape.len()).rev() {
        idx[axis] += 1;
        if idx[axis] < shape[axis] {
            return true;
        }
        idx[axis] = 0;
    }
    false
}

fn for_each_index(
    shape: &[usize],
    mut body: impl FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    if shape.is_empty() || shape.iter().any(|&s| s == 0) {
        return Ok(());
    }
    let mut idx = vec![0; shape.len()];
    loop {
        body(&idx)?;
        if !next_index(&mut idx, shape) {
            return Ok(());
        }
    }
}

/// Grows `meta` to match `population`, computing exact expected returns for
/// every joint index that touches a newly appended policy and copying the
/// rest from the previous tensors.
pub fn extend_meta_game(game: &Game, population: &Population, meta: &mut MetaGame) -> Result<()> {
    let players = game.num_players();
    let new_shape = population.sizes();
    if meta.tensors.len() != players || new_shape.len() != players {
        return Err(Error::LengthMismatch(format!(
            "meta-game has {} tensors, population {} sets, game {} players",
            meta.tensors.len(),
            new_shape.len(),
            players
        )));
    }
    let old_shape = meta.shape().to_vec();
    if old_shape.iter().zip(&new_shape).any(|(o, n)| o > n) {
        return Err(Error::LengthMismatch(format!(
            "population shrank from {:?} to {:?}",
            old_shape, new_shape
        )));
    }
    let mut tensors: Vec<PayoffTensor> =
        (0..players).map(|_| PayoffTensor::zeros(&new_shape)).collect();
    for_each_index(&new_shape, |idx| {
        let cached = idx.iter().zip(&old_shape).all(|(&j, &s)| j < s);
        if cached {
            for (p, tensor) in tensors.iter_mut().enumerate() {
                tensor.set(idx, meta.tensors[p].get(idx));
            }
        } else {
            let profile: Vec<&TabularPolicy> = idx
                .iter()
                .enumerate()
                .map(|(p, &j)| &population.policies[p][j])
                .collect();
            let returns = expected_returns(game, &profile)?;
            for (p, tensor) in tensors.iter_mut().enumerate() {
                tensor.set(idx, returns[p]);
            }
        }
        Ok(())
    })?;
    meta.tensors = tensors;
    Ok(())
}

/// Exact payoff tensors over the full population, one per player.
pub fn fill_meta_game(game: &Game, population: &Population) -> Result<MetaGame> {
    let mut meta = MetaGame::empty(game.num_players());
    extend_meta_game(game, population, &mut meta)?;
    Ok(meta)
}

/// Behavioral mixture of `policy_set` under `weights`: at each info set the
/// action distribution blends the components in proportion to weight times
/// the component's own reach contribution. Info sets no weighted component
/// can reach fall back to uniform.
pub fn aggregate_policy(
    game: &Game,
    player: usize,
    policy_set: &[TabularPolicy],
    weights: &[f64],
) -> Result<TabularPolicy> {
    if policy_set.len() != weights.len() {
        return Err(Error::LengthMismatch(format!(
            "{} policies vs {} weights",
            policy_set.len(),
            weights.len()
        )));
    }
    if !(weights.iter().sum::<f64>() > 0.0) {
        return Err(Error::AllZeroWeights);
    }
    let mut mass: BTreeMap<String, BTreeMap<ActionId, f64>> = BTreeMap::new();
    blend(
        &game.initial_state(),
        player,
        policy_set,
        weights,
        &mut mass,
    )?;
    let mut out = TabularPolicy::new();
    for (key, dist) in mass {
        let total: f64 = dist.values().sum();
        let fallback = 1.0 / dist.len() as f64;
        let entries: Vec<(ActionId, f64)> = dist
            .iter()
            .map(|(&a, &m)| (a, if total > 0.0 { m / total } else { fallback }))
            .collect();
        out.set(key, entries);
    }
    Ok(out)
}

fn blend(
    state: &GameState,
    player: usize,
    policy_set: &[TabularPolicy],
    reaches: &[f64],
    mass: &mut BTreeMap<String, BTreeMap<ActionId, f64>>,
) -> Result<()> {
    match state.to_move() {
        ToMove::Terminal => Ok(()),
        ToMove::Chance => {
            for (a, _) in state.chance_outcomes() {
                blend(&state.child(a)?, player, policy_set, reaches, mass)?;
            }
            Ok(())
        }
        ToMove::Player(p) if p == player => {
            let key = state.info_key().key;
            for a in state.legal_actions() {
                let next: Vec<f64> = reaches
                    .iter()
                    .zip(policy_set)
                    .map(|(r, pol)| r * pol.prob(&key, a))
                    .collect();
                *mass
                    .entry(key.clone())
                    .or_default()
                    .entry(a)
                    .or_insert(0.0) += next.iter().sum::<f64>();
                blend(&state.child(a)?, player, policy_set, &next, mass)?;
            }
            Ok(())
        }
        ToMove::Player(_) => {
            for a in state.legal_actions() {
                blend(&state.child(a)?, player, policy_set, reaches, mass)?;
            }
            Ok(())
        }
    }
}

/// Exact best response for `player` against the other entries of `profile`,
/// uniform over actions tying within the response oracle's tolerance.
pub fn exact_br_oracle(
    game: &Game,
    player: usize,
    profile: &[&TabularPolicy],
) -> Result<TabularPolicy> {
    Ok(best_response(game, profile, player)?.policy)
}

/// Per-epoch record of a training run.
#[derive(Clone, Debug)]
pub struct PsroEpoch {
    pub epoch: usize,
    pub population_sizes: Vec<usize>,
    pub train_mixtures: Vec<Vec<f64>>,
    pub eval_mixtures: Vec<Vec<f64>>,
    pub eval_exploitability: f64,
    pub meta_zero_sum_gap: Option<f64>,
    pub elapsed_ms: f64,
}

#[derive(Debug)]
pub struct PsroTrace {
    pub epochs: Vec<PsroEpoch>,
    pub population: Population,
}

/// Runs `epochs` rounds of solve-and-expand. Each round solves the current
/// meta-game with `train`, appends one exact best response per player against
/// the resulting opponent mixtures, then scores the grown population via the
/// `eval` mixture's aggregated joint profile.
///
/// `train` is called exactly once per epoch, so solvers that anneal on a call
/// counter see one tick per round.
pub fn run_psro(
    game: &Game,
    train: &mut dyn MetaStrategySolver,
    eval: &mut dyn MetaStrategySolver,
    epochs: usize,
) -> Result<PsroTrace> {
    let players = game.num_players();
    let mut population = Population::seed_uniform(game);
    let mut meta = MetaGame::empty(players);
    let mut trace = Vec::with_capacity(epochs);
    for epoch in 1..=epochs {
        let start = Instant::now();
        extend_meta_game(game, &population, &mut meta)?;
        let phi = train.solve(&meta)?;
        let train_aggregates: Vec<TabularPolicy> = (0..players)
            .map(|p| aggregate_policy(game, p, &population.policies[p], &phi[p]))
            .collect::<Result<_>>()?;
        let train_profile: Vec<&TabularPolicy> = train_aggregates.iter().collect();
        let additions: Vec<TabularPolicy> = (0..players)
            .map(|p| exact_br_oracle(game, p, &train_profile))
            .collect::<Result<_>>()?;
        for (p, policy) in additions.into_iter().enumerate() {
            population.policies[p].push(policy);
        }
        extend_meta_game(game, &population, &mut meta)?;
        let psi = eval.solve(&meta)?;
        let eval_aggregates: Vec<TabularPolicy> = (0..players)
            .map(|p| aggregate_policy(game, p, &population.policies[p], &psi[p]))
            .collect::<Result<_>>()?;
        let eval_profile: Vec<&TabularPolicy> = eval_aggregates.iter().collect();
        let eval_exploitability = exploitability(game, &eval_profile)?;
        trace.push(PsroEpoch {
            epoch,
            population_sizes: population.sizes(),
            train_mixtures: phi,
            eval_mixtures: psi,
            eval_exploitability,
            meta_zero_sum_gap: meta.zero_sum_gap(),
            elapsed_ms: start.elapsed().as_secs_f64() * 1000.0,
        });
    }
    Ok(PsroTrace {
        epochs: trace,
        population,
    })
}
