//! Volatility-adaptive discounting solver components.
//!
//! All three components react to the magnitude of the instantaneous regrets.
//! The regret accumulator discounts history with sign-dependent exponents
//! that soften as a smoothed volatility estimate rises, boosts positive
//! instantaneous regrets, and caps how negative a cumulative regret may get.
//! The current policy comes from a one-step optimistic projection of the
//! same discounted update. Policy averaging stays disabled for a warmup
//! window, then weights iterations polynomially with extra factors that
//! favor calm, late iterations.
//!
//! The accumulator and the projection rule each keep their own running
//! volatility average, so a component instance must not be shared between
//! solver runs.

use std::collections::BTreeMap;

use super::{
    CfrComponents, InfoStateNode, PolicyAccumulator, PolicyFromRegretAccumulator,
    RegretAccumulator, UpdateMode,
};
use crate::game::ActionId;

#[derive(Clone, Debug)]
pub struct VadParams {
    /// Baseline discount exponent for positive cumulative regrets.
    pub base_alpha: f64,
    /// Baseline discount exponent for negative cumulative regrets.
    pub base_beta: f64,
    /// How strongly volatility pulls both exponents down.
    pub volatility_sensitivity: f64,
    /// Normalizer turning regret magnitude into a volatility in [0, 1].
    pub max_expected_instantaneous_regret: f64,
    /// Multiplier on positive instantaneous regrets.
    pub instantaneous_regret_boost_factor: f64,
    /// Smoothing rate of the running regret-magnitude average.
    pub ewma_decay_factor: f64,
    /// Floor for cumulative regrets.
    pub negative_regret_cap: f64,
    /// Starting weight of the optimistic one-step projection.
    pub initial_optimism_factor: f64,
    /// Iteration scale over which optimism decays.
    pub optimism_decay_factor: f64,
    /// Exponent applied to positive projected regrets before normalizing.
    pub positive_policy_exponent: f64,
    /// Baseline polynomial-averaging exponent.
    pub base_gamma: f64,
    /// Upper bound on the adaptive averaging exponent.
    pub gamma_max: f64,
    /// How strongly volatility raises the averaging exponent.
    pub gamma_volatility_sensitivity: f64,
    /// Iterations to skip before policy averaging starts.
    pub warmup_iterations: usize,
    /// Exponent of the stability down-weighting factor.
    pub stability_exponent: f64,
    /// Exponent of the magnitude up-weighting factor.
    pub regret_magnitude_weighting_exponent: f64,
}

impl Default for VadParams {
    fn default() -> VadParams {
        VadParams {
            base_alpha: 1.5,
            base_beta: -0.1,
            volatility_sensitivity: 0.5,
            max_expected_instantaneous_regret: 2.0,
            instantaneous_regret_boost_factor: 1.1,
            ewma_decay_factor: 0.1,
            negative_regret_cap: -20.0,
            initial_optimism_factor: 1.0,
            optimism_decay_factor: 100.0,
            positive_policy_exponent: 1.5,
            base_gamma: 2.0,
            gamma_max: 4.0,
            gamma_volatility_sensitivity: 1.5,
            warmup_iterations: 500,
            stability_exponent: 1.5,
            regret_magnitude_weighting_exponent: 0.5,
        }
    }
}

/// Shared per-iteration quantities derived from the instantaneous regrets.
#[derive(Clone, Copy, Debug)]
pub struct AdaptiveParams {
    pub ewma: f64,
    pub volatility: f64,
    pub effective_alpha: f64,
    pub effective_beta: f64,
    pub discount_positive: f64,
    pub discount_negative: f64,
}

/// Computes the adaptive discounts for one component call. `current_ewma` is
/// the caller's running average; the returned `ewma` replaces it. On
/// iteration 0 the average is seeded with the raw magnitude.
pub fn adaptive_params(
    iteration: usize,
    cfr_regrets: &BTreeMap<ActionId, f64>,
    params: &VadParams,
    current_ewma: f64,
) -> AdaptiveParams {
    let t_plus_one = (iteration + 1) as f64;
    let magnitude = cfr_regrets.values().fold(0.0f64, |m, &r| m.max(r.abs()));
    let ewma = if iteration == 0 {
        magnitude
    } else {
        params.ewma_decay_factor * magnitude + (1.0 - params.ewma_decay_factor) * current_ewma
    };
    let volatility = if params.max_expected_instantaneous_regret > 0.0 {
        (ewma / params.max_expected_instantaneous_regret).min(1.0)
    } else {
        0.0
    };
    let effective_alpha = (params.base_alpha - params.volatility_sensitivity * volatility).max(0.1);
    let effective_beta =
        (params.base_beta - params.volatility_sensitivity * volatility).min(effective_alpha);
    let discount_positive =
        t_plus_one.powf(effective_alpha) / (t_plus_one.powf(effective_alpha) + 1.0);
    let discount_negative =
        t_plus_one.powf(effective_beta) / (t_plus_one.powf(effective_beta) + 1.0);
    AdaptiveParams {
        ewma,
        volatility,
        effective_alpha,
        effective_beta,
        discount_positive,
        discount_negative,
    }
}

pub fn components(params: &VadParams) -> CfrComponents {
    CfrComponents {
        regret_accumulator: Box::new(VadRegretAccumulator {
            params: params.clone(),
            ewma: 0.0,
        }),
        policy_from_regret: Box::new(VadPolicyFromRegret {
            params: params.clone(),
            ewma: 0.0,
        }),
        policy_accumulator: Box::new(VadPolicyAccumulator { params: params.clone() }),
        update_mode: UpdateMode::Alternating,
    }
}

pub struct VadRegretAccumulator {
    params: VadParams,
    ewma: f64,
}

impl RegretAccumulator for VadRegretAccumulator {
    fn update(
        &mut self,
        node: &InfoStateNode,
        iteration: usize,
        cfr_regrets: &BTreeMap<ActionId, f64>,
    ) -> BTreeMap<ActionId, f64> {
        let adaptive = adaptive_params(iteration, cfr_regrets, &self.params, self.ewma);
        self.ewma = adaptive.ewma;
        cfr_regrets
            .iter()
            .map(|(&a, &r)| {
                let old = node.cumulative_regret.get(&a).copied().unwrap_or(0.0);
                let boosted = if r > 0.0 {
                    r * self.params.instantaneous_regret_boost_factor
                } else {
                    r
                };
                let discounted = if old >= 0.0 {
                    adaptive.discount_positive * old
                } else {
                    adaptive.discount_negative * old
                };
                (a, (discounted + boosted).max(self.params.negative_regret_cap))
            })
            .collect()
    }
}

pub struct VadPolicyFromRegret {
    params: VadParams,
    ewma: f64,
}

impl PolicyFromRegretAccumulator for VadPolicyFromRegret {
    fn update(
        &mut self,
        node: &InfoStateNode,
        iteration: usize,
        cfr_regrets: &BTreeMap<ActionId, f64>,
        _previous_policy: &BTreeMap<ActionId, f64>,
    ) -> BTreeMap<ActionId, f64> {
        let adaptive = adaptive_params(iteration, cfr_regrets, &self.params, self.ewma);
        self.ewma = adaptive.ewma;
        let base_optimism = self.params.initial_optimism_factor
            / (1.0 + iteration as f64 / self.params.optimism_decay_factor);
        let dampening =
            (1.0 - self.params.volatility_sensitivity * adaptive.volatility).max(0.0);
        let optimism = base_optimism * dampening;

        let mut scaled = BTreeMap::new();
        let mut total = 0.0;
        for &a in &node.legal_actions {
            let old = node.cumulative_regret.get(&a).copied().unwrap_or(0.0);
            let mut inst = cfr_regrets.get(&a).copied().unwrap_or(0.0);
            if inst > 0.0 {
                inst *= self.params.instantaneous_regret_boost_factor;
            }
            let discounted = if old >= 0.0 {
                adaptive.discount_positive * old
            } else {
                adaptive.discount_negative * old
            };
            let projected = discounted + optimism * inst;
            let s = projected.max(0.0).powf(self.params.positive_policy_exponent);
            scaled.insert(a, s);
            total += s;
        }
        if total > 0.0 {
            scaled.iter().map(|(&a, &s)| (a, s / total)).collect()
        } else {
            let w = 1.0 / node.legal_actions.len() as f64;
            node.legal_actions.iter().map(|&a| (a, w)).collect()
        }
    }
}

pub struct VadPolicyAccumulator {
    params: VadParams,
}

impl PolicyAccumulator for VadPolicyAccumulator {
    fn update(
        &mut self,
        node: &InfoStateNode,
        iteration: usize,
        info_state_policy: &BTreeMap<ActionId, f64>,
        cfr_regrets: &BTreeMap<ActionId, f64>,
        reach_prob: f64,
        _counterfactual_reach_prob: f64,
    ) -> BTreeMap<ActionId, f64> {
        if iteration < self.params.warmup_iterations {
            return node.cumulative_policy.clone();
        }
        let magnitude = cfr_regrets.values().fold(0.0f64, |m, &r| m.max(r.abs()));
        let volatility = if self.params.max_expected_instantaneous_regret > 0.0 {
            (magnitude / self.params.max_expected_instantaneous_regret).min(1.0)
        } else {
            0.0
        };
        let gamma = (self.params.base_gamma
            + self.params.gamma_volatility_sensitivity * volatility)
            .min(self.params.gamma_max);
        let temporal = ((iteration + 1) as f64).powf(gamma);
        let stability = 1.0 / (1.0 + magnitude.powf(self.params.stability_exponent));
        let mag_weight = (1.0 + magnitude / self.params.max_expected_instantaneous_regret)
            .powf(self.params.regret_magnitude_weighting_exponent)
            .max(0.1);
        let weight = temporal * stability * mag_weight;
        info_state_policy
            .iter()
            .map(|(&a, &p)| {
                let prev = node.cumulative_policy.get(&a).copied().unwrap_or(0.0);
                (a, prev + weight * reach_prob * p)
            })
            .collect()
    }
}
