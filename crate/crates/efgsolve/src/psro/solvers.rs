//! Meta-strategy solvers: maps from the payoff tensors over the populations
//! to one mixture per player. Baselines (uniform, LP Nash, regret matching,
//! projected replicator dynamics) plus the annealed blended solver pair used
//! for training and evaluation.

use minilp::{ComparisonOp, OptimizationDirection, Problem, Variable};

use crate::error::{Error, Result};
use crate::psro::MetaGame;

const ZERO_SUM_TOL: f64 = 1e-9;

/// Produces one mixture per player for the current meta-game. Solvers that
/// anneal across calls carry their own counters, hence `&mut self`.
pub trait MetaStrategySolver {
    fn solve(&mut self, meta: &MetaGame) -> Result<Vec<Vec<f64>>>;
}

/// Player `player`'s payoff for each own pure choice with every other axis
/// summed out against that player's mixture. Axes are contracted from the
/// highest index down so lower axis numbers stay valid mid-reduction.
pub fn contracted_payoffs(meta: &MetaGame, player: usize, mixtures: &[Vec<f64>]) -> Vec<f64> {
    let players = meta.num_players();
    let mut t = meta.tensors[player].clone();
    for q in (0..players).rev() {
        if q != player {
            t = t.contract(q, &mixtures[q]);
        }
    }
    t.data().to_vec()
}

fn uniform(n: usize) -> Vec<f64> {
    vec![1.0 / n as f64; n]
}

fn normalized_or_uniform(v: Vec<f64>) -> Vec<f64> {
    let total: f64 = v.iter().sum();
    if total > 0.0 {
        v.into_iter().map(|x| x / total).collect()
    } else {
        uniform(v.len())
    }
}

fn positive_share(regrets: &[f64]) -> Vec<f64> {
    let total: f64 = regrets.iter().map(|r| r.max(0.0)).sum();
    if total > 1e-12 {
        regrets.iter().map(|r| r.max(0.0) / total).collect()
    } else {
        uniform(regrets.len())
    }
}

/// Equal weight on every population member, independent of payoffs.
pub struct UniformMss;

impl MetaStrategySolver for UniformMss {
    fn solve(&mut self, meta: &MetaGame) -> Result<Vec<Vec<f64>>> {
        Ok(meta.shape().iter().map(|&n| uniform(n)).collect())
    }
}

/// Exact equilibrium of a two-player zero-sum meta-game, one max-min linear
/// program per player.
pub struct NashLpMss;

impl MetaStrategySolver for NashLpMss {
    fn solve(&mut self, meta: &MetaGame) -> Result<Vec<Vec<f64>>> {
        if meta.num_players() != 2 {
            return Err(Error::NotTwoPlayer("nash_lp"));
        }
        let gap = meta.zero_sum_gap().unwrap();
        if gap > ZERO_SUM_TOL {
            return Err(Error::NotZeroSum(gap));
        }
        let rows = meta.shape()[0];
        let cols = meta.shape()[1];
        if rows == 0 || cols == 0 {
            return Ok(vec![Vec::new(), Vec::new()]);
        }
        let row_mix = maximin(rows, cols, &|i, j| meta.tensors[0].get(&[i, j]))?;
        let col_mix = maximin(cols, rows, &|j, i| meta.tensors[1].get(&[i, j]))?;
        Ok(vec![row_mix, col_mix])
    }
}

/// Maximizes the worst-case expected payoff `min_j sum_i x_i payoff(i, j)`
/// over the simplex.
fn maximin(own: usize, opp: usize, payoff: &dyn Fn(usize, usize) -> f64) -> Result<Vec<f64>> {
    let mut problem = Problem::new(OptimizationDirection::Maximize);
    let value = problem.add_var(1.0, (f64::NEG_INFINITY, f64::INFINITY));
    let mix: Vec<Variable> = (0..own)
        .map(|_| problem.add_var(0.0, (0.0, f64::INFINITY)))
        .collect();
    for j in 0..opp {
        let mut terms: Vec<(Variable, f64)> = vec![(value, -1.0)];
        for (i, &x) in mix.iter().enumerate() {
            terms.push((x, payoff(i, j)));
        }
        problem.add_constraint(terms, ComparisonOp::Ge, 0.0);
    }
    let simplex: Vec<(Variable, f64)> = mix.iter().map(|&x| (x, 1.0)).collect();
    problem.add_constraint(simplex, ComparisonOp::Eq, 1.0);
    let solution = problem
        .solve()
        .map_err(|e| Error::Config(format!("meta-game linear program failed: {e}")))?;
    Ok(normalized_or_uniform(
        mix.iter().map(|&x| solution[x].max(0.0)).collect(),
    ))
}

/// Iterated regret matching on the meta-game, returning the time-averaged
/// mixtures. Regrets accumulate signed; only their positive parts carry mass.
pub struct RegretMatchingMss {
    pub iterations: usize,
}

impl Default for RegretMatchingMss {
    fn default() -> Self {
        RegretMatchingMss { iterations: 10_000 }
    }
}

impl MetaStrategySolver for RegretMatchingMss {
    fn solve(&mut self, meta: &MetaGame) -> Result<Vec<Vec<f64>>> {
        let players = meta.num_players();
        let sizes = meta.shape().to_vec();
        if sizes.iter().any(|&s| s == 0) {
            return Ok(vec![Vec::new(); players]);
        }
        let mut current: Vec<Vec<f64>> = sizes.iter().map(|&s| uniform(s)).collect();
        let mut cumulative: Vec<Vec<f64>> = sizes.iter().map(|&s| vec![0.0; s]).collect();
        let mut average: Vec<Vec<f64>> = sizes.iter().map(|&s| vec![0.0; s]).collect();
        for _ in 0..self.iterations {
            for p in 0..players {
                let payoffs = contracted_payoffs(meta, p, &current);
                let expected: f64 = payoffs.iter().zip(&current[p]).map(|(u, s)| u * s).sum();
                for (r, u) in cumulative[p].iter_mut().zip(&payoffs) {
                    *r += u - expected;
                }
                current[p] = positive_share(&cumulative[p]);
                for (a, s) in average[p].iter_mut().zip(&current[p]) {
                    *a += s;
                }
            }
        }
        Ok(average.into_iter().map(normalized_or_uniform).collect())
    }
}

/// Euler-discretized replicator dynamics with a post-step projection onto the
/// simplex with a per-coordinate exploration floor; returns the time-average.
pub struct PrdMss {
    pub iterations: usize,
    pub step: f64,
    pub floor: f64,
}

impl Default for PrdMss {
    fn default() -> Self {
        PrdMss {
            iterations: 50_000,
            step: 1e-3,
            floor: 1e-10,
        }
    }
}

impl MetaStrategySolver for PrdMss {
    fn solve(&mut self, meta: &MetaGame) -> Result<Vec<Vec<f64>>> {
        let players = meta.num_players();
        let sizes = meta.shape().to_vec();
        if sizes.iter().any(|&s| s == 0) {
            return Ok(vec![Vec::new(); players]);
        }
        let mut current: Vec<Vec<f64>> = sizes.iter().map(|&s| uniform(s)).collect();
        let mut average: Vec<Vec<f64>> = sizes.iter().map(|&s| vec![0.0; s]).collect();
        for _ in 0..self.iterations {
            let mut next = Vec::with_capacity(players);
            for p in 0..players {
                let payoffs = contracted_payoffs(meta, p, &current);
                let expected: f64 = payoffs.iter().zip(&current[p]).map(|(u, s)| u * s).sum();
                let drifted: Vec<f64> = current[p]
                    .iter()
                    .zip(&payoffs)
                    .map(|(x, u)| x + self.step * x * (u - expected))
                    .collect();
                next.push(floored_simplex_projection(&drifted, self.floor));
            }
            current = next;
            for p in 0..players {
                for (a, s) in average[p].iter_mut().zip(&current[p]) {
                    *a += s;
                }
            }
        }
        Ok(average.into_iter().map(normalized_or_uniform).collect())
    }
}

/// Euclidean projection onto `{x : x_i >= floor, sum x = 1}`.
fn floored_simplex_projection(point: &[f64], floor: f64) -> Vec<f64> {
    let target = 1.0 - floor * point.len() as f64;
    debug_assert!(target > 0.0);
    let shifted: Vec<f64> = point.iter().map(|v| v - floor).collect();
    let mut sorted = shifted.clone();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut cumulative = 0.0;
    let mut threshold = 0.0;
    for (i, &u) in sorted.iter().enumerate() {
        cumulative += u;
        let candidate = (cumulative - target) / (i + 1) as f64;
        if u - candidate > 0.0 {
            threshold = candidate;
        }
    }
    shifted
        .iter()
        .map(|&z| (z - threshold).max(0.0) + floor)
        .collect()
}

/// Softmax over `(payoffs - max) / temperature`; uniform when the exponential
/// mass underflows entirely.
pub fn smoothed_best_pure(payoffs: &[f64], temperature: f64) -> Vec<f64> {
    let max = payoffs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = payoffs
        .iter()
        .map(|&v| ((v - max) / temperature).exp())
        .collect();
    let total: f64 = exps.iter().sum();
    if total > 1e-12 {
        exps.into_iter().map(|e| e / total).collect()
    } else {
        uniform(payoffs.len())
    }
}

/// Knobs of [`hybrid_orm_solver`].
#[derive(Clone, Debug)]
pub struct HybridParams {
    pub blend: f64,
    pub temperature: f64,
    pub momentum: f64,
    pub gain_normalization: bool,
    pub diversity: f64,
    pub return_average: bool,
}

/// Optimistic regret matching with floored cumulative regrets, mean-centered
/// gains, an optional diversity bonus and gain normalization, blended each
/// step with a softmax pull toward the best pure strategy.
///
/// Players update in index order within one internal iteration, so later
/// players already see earlier players' refreshed mixtures. Returns the
/// normalized time-averages, or the final iterates when `return_average` is
/// off. Any empty population yields empty mixtures.
pub fn hybrid_orm_solver(
    meta: &MetaGame,
    iterations: usize,
    params: &HybridParams,
) -> Vec<Vec<f64>> {
    let players = meta.num_players();
    let sizes = meta.shape().to_vec();
    if sizes.iter().any(|&s| s == 0) {
        return vec![Vec::new(); players];
    }
    let mut current: Vec<Vec<f64>> = sizes.iter().map(|&s| uniform(s)).collect();
    let mut cumulative: Vec<Vec<f64>> = sizes.iter().map(|&s| vec![0.0; s]).collect();
    let mut average: Vec<Vec<f64>> = sizes.iter().map(|&s| vec![0.0; s]).collect();
    let mut previous_centered: Vec<Vec<f64>> = sizes.iter().map(|&s| vec![0.0; s]).collect();
    for _ in 0..iterations {
        for p in 0..players {
            let payoffs = contracted_payoffs(meta, p, &current);
            let mean: f64 = payoffs.iter().sum::<f64>() / payoffs.len() as f64;
            let centered: Vec<f64> = payoffs.iter().map(|u| u - mean).collect();
            let mut gains: Vec<f64> = (0..sizes[p])
                .map(|i| {
                    (1.0 + params.momentum) * centered[i]
                        - params.momentum * previous_centered[p][i]
                        + params.diversity * (1.0 - current[p][i])
                })
                .collect();
            if params.gain_normalization {
                let max_abs = gains.iter().fold(0.0f64, |m, g| m.max(g.abs()));
                if max_abs > 1e-8 {
                    for g in &mut gains {
                        *g /= max_abs;
                    }
                }
            }
            for (r, g) in cumulative[p].iter_mut().zip(&gains) {
                *r = (*r + g).max(0.0);
            }
            let orm = positive_share(&cumulative[p]);
            let smoothed = smoothed_best_pure(&payoffs, params.temperature);
            for i in 0..sizes[p] {
                current[p][i] = (1.0 - params.blend) * orm[i] + params.blend * smoothed[i];
            }
            previous_centered[p] = centered;
            if params.return_average {
                for (a, s) in average[p].iter_mut().zip(&current[p]) {
                    *a += s;
                }
            }
        }
    }
    if params.return_average {
        average.into_iter().map(normalized_or_uniform).collect()
    } else {
        current
    }
}

/// Training meta-solver: the blended optimistic loop with blend, temperature
/// and diversity annealed linearly over the first `anneal_horizon` calls and
/// internal iterations scaled with the population. One call advances the
/// anneal clock by one epoch.
#[derive(Clone, Debug)]
pub struct ShorTrainParams {
    pub base_iters: usize,
    pub iters_per_policy: usize,
    pub max_iters: usize,
    pub initial_blend: f64,
    pub final_blend: f64,
    pub initial_temperature: f64,
    pub final_temperature: f64,
    pub initial_diversity: f64,
    pub final_diversity: f64,
    pub momentum: f64,
    pub gain_normalization: bool,
    pub anneal_horizon: u32,
    pub epoch_counter: u32,
}

impl Default for ShorTrainParams {
    fn default() -> Self {
        ShorTrainParams {
            base_iters: 1000,
            iters_per_policy: 20,
            max_iters: 5000,
            initial_blend: 0.30,
            final_blend: 0.05,
            initial_temperature: 0.50,
            final_temperature: 0.01,
            initial_diversity: 0.05,
            final_diversity: 0.001,
            momentum: 0.5,
            gain_normalization: true,
            anneal_horizon: 75,
            epoch_counter: 0,
        }
    }
}

impl ShorTrainParams {
    /// `(blend, temperature, diversity)` after `epoch_counter` calls; linear
    /// from the initial to the final constants, saturating at the horizon and
    /// clamped to the range they span.
    pub fn annealed_at(&self, epoch_counter: u32) -> (f64, f64, f64) {
        let progress = (epoch_counter as f64 / self.anneal_horizon.max(1) as f64).min(1.0);
        let lerp = |from: f64, to: f64| {
            let value = from * (1.0 - progress) + to * progress;
            value.min(from.max(to)).max(from.min(to))
        };
        (
            lerp(self.initial_blend, self.final_blend),
            lerp(self.initial_temperature, self.final_temperature),
            lerp(self.initial_diversity, self.final_diversity),
        )
    }

    /// Internal loop length for a given first-player population size.
    pub fn solver_iterations(&self, population: usize) -> usize {
        let scaled = self.base_iters + self.iters_per_policy * population.saturating_sub(1);
        scaled.clamp(self.base_iters.min(self.max_iters), self.max_iters)
    }
}

impl MetaStrategySolver for ShorTrainParams {
    fn solve(&mut self, meta: &MetaGame) -> Result<Vec<Vec<f64>>> {
        self.epoch_counter += 1;
        let (blend, temperature, diversity) = self.annealed_at(self.epoch_counter);
        let iterations = self.solver_iterations(meta.shape()[0]);
        Ok(hybrid_orm_solver(
            meta,
            iterations,
            &HybridParams {
                blend,
                temperature,
                momentum: self.momentum,
                gain_normalization: self.gain_normalization,
                diversity,
                return_average: true,
            },
        ))
    }
}

/// Evaluation meta-solver: the same blended loop with sharp, fixed constants
/// and the final iterate returned instead of the average. Stateless across
/// calls.
#[derive(Clone, Debug)]
pub struct ShorEvalParams {
    pub base_iters: usize,
    pub iters_per_policy: usize,
    pub max_iters: usize,
    pub blend: f64,
    pub temperature: f64,
    pub momentum: f64,
    pub diversity: f64,
    pub gain_normalization: bool,
}

impl Default for ShorEvalParams {
    fn default() -> Self {
        ShorEvalParams {
            base_iters: 8000,
            iters_per_policy: 50,
            max_iters: 15_000,
            blend: 0.01,
            temperature: 0.001,
            momentum: 0.2,
            diversity: 0.0,
            gain_normalization: true,
        }
    }
}

impl ShorEvalParams {
    pub fn solver_iterations(&self, population: usize) -> usize {
        let scaled = self.base_iters + self.iters_per_policy * population.saturating_sub(1);
        scaled.clamp(self.base_iters.min(self.max_iters), self.max_iters)
    }
}

impl MetaStrategySolver for ShorEvalParams {
    fn solve(&mut self, meta: &MetaGame) -> Result<Vec<Vec<f64>>> {
        let iterations = self.solver_iterations(meta.shape()[0]);
        Ok(hybrid_orm_solver(
            meta,
            iterations,
            &HybridParams {
                blend: self.blend,
                temperature: self.temperature,
                momentum: self.momentum,
                gain_normalization: self.gain_normalization,
                diversity: self.diversity,
                return_average: false,
            },
        ))
    }
}
