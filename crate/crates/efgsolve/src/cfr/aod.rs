//! Asymmetric-discounting solver components with scheduled exponents.
//!
//! The regret accumulator discounts positive and negative cumulative regrets
//! with exponents that follow independent linear schedules, and scales each
//! incoming instantaneous regret by a factor chosen from the sign pattern of
//! the pair (cumulative, instantaneous). The current policy applies regret
//! matching to the cumulative regret plus a trend bonus, the deviation of the
//! regret from its own per-action running average. Policy averaging uses a
//! polynomial weight whose exponent also follows a linear schedule, applied
//! both as a discount on the old sum and as the new contribution's weight.

use std::collections::{BTreeMap, HashMap};

use super::{
    CfrComponents, InfoStateNode, PolicyAccumulator, PolicyFromRegretAccumulator,
    RegretAccumulator, UpdateMode,
};
use crate::game::ActionId;

const SIGN_EPSILON: f64 = 1e-9;
const NORM_EPSILON: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct AodParams {
    /// Positive-regret discount exponent at iteration 0.
    pub alpha_start: f64,
    /// Positive-regret discount exponent after the schedule completes.
    pub alpha_max: f64,
    /// Iterations over which alpha moves from start to max.
    pub schedule_t_alpha: f64,
    /// Negative-regret discount exponent at iteration 0.
    pub beta_start: f64,
    /// Negative-regret discount exponent after the schedule completes.
    pub beta_max: f64,
    /// Iterations over which beta moves from start to max.
    pub schedule_t_beta: f64,
    /// Scale when cumulative and instantaneous regret are both positive.
    pub pos_cum_pos_inst_scale: f64,
    /// Scale for positive cumulative, negative instantaneous.
    pub pos_cum_neg_inst_scale: f64,
    /// Scale for negative cumulative, positive instantaneous.
    pub neg_cum_pos_inst_scale: f64,
    /// Scale when both are negative.
    pub neg_cum_neg_inst_scale: f64,
    /// Square the positive policy weights instead of using them linearly.
    pub use_squared_weights: bool,
    /// Smoothing rate of the per-action cumulative-regret average.
    pub cumulative_regret_ema_alpha: f64,
    /// Weight of the trend bonus added before regret matching.
    pub optimism_trend_scale: f64,
    /// Averaging exponent at iteration 0.
    pub gamma_start: f64,
    /// Averaging exponent after the schedule completes.
    pub gamma_max: f64,
    /// Iterations over which gamma moves from start to max.
    pub gamma_schedule_t: f64,
}

impl Default for AodParams {
    fn default() -> AodParams {
        AodParams {
            alpha_start: 1.0,
            alpha_max: 2.5,
            schedule_t_alpha: 500.0,
            beta_start: 0.5,
            beta_max: 0.0,
            schedule_t_beta: 500.0,
            pos_cum_pos_inst_scale: 1.1,
            pos_cum_neg_inst_scale: 0.9,
            neg_cum_pos_inst_scale: 0.7,
            neg_cum_neg_inst_scale: 1.2,
            use_squared_weights: true,
            cumulative_regret_ema_alpha: 0.1,
            optimism_trend_scale: 0.5,
            gamma_start: 1.0,
            gamma_max: 5.0,
            gamma_schedule_t: 500.0,
        }
    }
}

pub fn components(params: &AodParams) -> CfrComponents {
    CfrComponents {
        regret_accumulator: Box::new(AodRegretAccumulator { params: params.clone() }),
        policy_from_regret: Box::new(AodPolicyFromRegret {
            params: params.clone(),
            ema: HashMap::new(),
        }),
        policy_accumulator: Box::new(AodPolicyAccumulator { params: params.clone() }),
        update_mode: UpdateMode::Alternating,
    }
}

fn scheduled(start: f64, end: f64, iteration: usize, horizon: f64) -> f64 {
    let progress = (iteration as f64 / horizon.max(1.0)).min(1.0);
    start + (end - start) * progress
}

fn saturating_discount(t: f64, exponent: f64) -> f64 {
    let p = t.powf(exponent);
    if p.is_infinite() {
        1.0
    } else {
        p / (p + 1.0)
    }
}

pub struct AodRegretAccumulator {
    params: AodParams,
}

impl RegretAccumulator for AodRegretAccumulator {
    fn update(
        &mut self,
        node: &InfoStateNode,
        iteration: usize,
        cfr_regrets: &BTreeMap<ActionId, f64>,
    ) -> BTreeMap<ActionId, f64> {
        let t = (iteration + 1) as f64;
        let alpha = scheduled(
            self.params.alpha_start,
            self.params.alpha_max,
            iteration,
            self.params.schedule_t_alpha,
        );
        let beta = scheduled(
            self.params.beta_start,
            self.params.beta_max,
            iteration,
            self.params.schedule_t_beta,
        );
        node.legal_actions
            .iter()
            .map(|&a| {
                let prev = node.cumulative_regret.get(&a).copied().unwrap_or(0.0);
                let inst = cfr_regrets.get(&a).copied().unwrap_or(0.0);
                let scale = if prev > SIGN_EPSILON {
                    if inst > SIGN_EPSILON {
                        self.params.pos_cum_pos_inst_scale
                    } else if inst < -SIGN_EPSILON {
                        self.params.pos_cum_neg_inst_scale
                    } else {
                        1.0
                    }
                } else if prev < -SIGN_EPSILON {
                    if inst > SIGN_EPSILON {
                        self.params.neg_cum_pos_inst_scale
                    } else if inst < -SIGN_EPSILON {
                        self.params.neg_cum_neg_inst_scale
                    } else {
                        1.0
                    }
                } else {
                    1.0
                };
                let discount = if prev > 0.0 {
                    saturating_discount(t, alpha)
                } else {
                    saturating_discount(t, beta)
                };
                (a, prev * discount + inst * scale)
            })
            .collect()
    }
}

pub struct AodPolicyFromRegret {
    params: AodParams,
    ema: HashMap<usize, BTreeMap<ActionId, f64>>,
}

impl PolicyFromRegretAccumulator for AodPolicyFromRegret {
    fn update(
        &mut self,
        node: &InfoStateNode,
        _iteration: usize,
        _cfr_regrets: &BTreeMap<ActionId, f64>,
        _previous_policy: &BTreeMap<ActionId, f64>,
    ) -> BTreeMap<ActionId, f64> {
        if node.legal_actions.is_empty() {
            return BTreeMap::new();
        }
        let ema_map = self.ema.entry(node.index_in_tabular_policy).or_default();
        let mut weights = BTreeMap::new();
        let mut new_ema = BTreeMap::new();
        let mut total = 0.0;
        for &a in &node.legal_actions {
            let regret = node.cumulative_regret.get(&a).copied().unwrap_or(0.0);
            let prev_ema = ema_map.get(&a).copied().unwrap_or(0.0);
            let trend = regret - prev_ema;
            let combined = regret + self.params.optimism_trend_scale * trend;
            let positive = combined.max(0.0);
            let w = if self.params.use_squared_weights {
                positive * positive
            } else {
                positive
            };
            weights.insert(a, w);
            total += w;
            new_ema.insert(
                a,
                self.params.cumulative_regret_ema_alpha * regret
                    + (1.0 - self.params.cumulative_regret_ema_alpha) * prev_ema,
            );
        }
        for (&a, &e) in &new_ema {
            ema_map.insert(a, e);
        }
        if total > NORM_EPSILON {
            weights.iter().map(|(&a, &w)| (a, w / total)).collect()
        } else {
            let w = 1.0 / node.legal_actions.len() as f64;
            node.legal_actions.iter().map(|&a| (a, w)).collect()
        }
    }
}

pub struct AodPolicyAccumulator {
    params: AodParams,
}

impl PolicyAccumulator for AodPolicyAccumulator {
    fn update(
        &mut self,
        node: &InfoStateNode,
        iteration: usize,
        info_state_policy: &BTreeMap<ActionId, f64>,
        _cfr_regrets: &BTreeMap<ActionId, f64>,
        reach_prob: f64,
        _counterfactual_reach_prob: f64,
    ) -> BTreeMap<ActionId, f64> {
        let t = (iteration + 1) as f64;
        let gamma = scheduled(
            self.params.gamma_start,
            self.params.gamma_max,
            iteration,
            self.params.gamma_schedule_t,
        );
        let t_pow_gamma = t.powf(gamma);
        let discount = if t_pow_gamma.is_infinite() {
            1.0
        } else {
            t_pow_gamma / (t_pow_gamma + 1.0)
        };
        let contribution_weight = t_pow_gamma * reach_prob;

        let mut updated = BTreeMap::new();
        for &a in node.legal_actions.iter().chain(node.cumulative_policy.keys()) {
            if updated.contains_key(&a) {
                continue;
            }
            let prev = node.cumulative_policy.get(&a).copied().unwrap_or(0.0);
            let prob = info_state_policy.get(&a).copied().unwrap_or(0.0);
            updated.insert(a, prev * discount + contribution_weight * prob);
        }
        updated
    }
}
