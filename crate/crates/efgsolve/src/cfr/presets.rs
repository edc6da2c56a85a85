//! The five classical solver variants as component triples.
//!
//! Accumulators that discount history do so when folding in the next
//! iteration's regrets. The factor is therefore evaluated at the number of
//! already-completed iterations, which reproduces the classical weightings
//! exactly: with `lcfr` the regret from iteration t ends up weighted by t,
//! and a `dcfr` gamma of 1 gives the same linear average-policy weights.

use std::collections::BTreeMap;

use super::{
    regret_matching, CfrComponents, InfoStateNode, PolicyAccumulator,
    PolicyFromRegretAccumulator, RegretAccumulator, UpdateMode,
};
use crate::error::{Error, Result};
use crate::game::ActionId;
use crate::cfr::{aod, vad};

/// Builds the component triple for a named variant: `cfr`, `cfr_plus`,
/// `lcfr`, `dcfr`, `pcfr_plus`, `vad`, or `aod`.
pub fn preset(name: &str) -> Result<CfrComponents> {
    match name {
        "cfr" => Ok(CfrComponents {
            regret_accumulator: Box::new(SumRegrets),
            policy_from_regret: Box::new(MatchRegrets),
            policy_accumulator: Box::new(PolynomialAverage { degree: 0 }),
            update_mode: UpdateMode::Simultaneous,
        }),
        "cfr_plus" => Ok(CfrComponents {
            regret_accumulator: Box::new(FlooredRegrets),
            policy_from_regret: Box::new(MatchRegrets),
            policy_accumulator: Box::new(PolynomialAverage { degree: 1 }),
            update_mode: UpdateMode::Alternating,
        }),
        "lcfr" => Ok(discounted(1.0, 1.0, 1.0)),
        "dcfr" => Ok(discounted(1.5, 0.0, 2.0)),
        "pcfr_plus" => Ok(CfrComponents {
            regret_accumulator: Box::new(FlooredRegrets),
            policy_from_regret: Box::new(PredictiveMatch),
            policy_accumulator: Box::new(PolynomialAverage { degree: 2 }),
            update_mode: UpdateMode::Alternating,
        }),
        "vad" => Ok(vad::components(&vad::VadParams::default())),
        "aod" => Ok(aod::components(&aod::AodParams::default())),
        other => Err(Error::UnknownPreset(other.to_string())),
    }
}

/// Discounted regret accumulation with sign-dependent exponents and
/// polynomially weighted policy averaging.
pub fn discounted(alpha: f64, beta: f64, gamma: f64) -> CfrComponents {
    CfrComponents {
        regret_accumulator: Box::new(DiscountedRegrets { alpha, beta }),
        policy_from_regret: Box::new(MatchRegrets),
        policy_accumulator: Box::new(DiscountedAverage { gamma }),
        update_mode: UpdateMode::Alternating,
    }
}

struct SumRegrets;

impl RegretAccumulator for SumRegrets {
    fn update(
        &mut self,
        node: &InfoStateNode,
        _iteration: usize,
        cfr_regrets: &BTreeMap<ActionId, f64>,
    ) -> BTreeMap<ActionId, f64> {
        cfr_regrets
            .iter()
            .map(|(&a, &r)| (a, node.cumulative_regret.get(&a).copied().unwrap_or(0.0) + r))
            .collect()
    }
}

struct FlooredRegrets;

impl RegretAccumulator for FlooredRegrets {
    fn update(
        &mut self,
        node: &InfoStateNode,
        _iteration: usize,
        cfr_regrets: &BTreeMap<ActionId, f64>,
    ) -> BTreeMap<ActionId, f64> {
        cfr_regrets
            .iter()
            .map(|(&a, &r)| {
                let prev = node.cumulative_regret.get(&a).copied().unwrap_or(0.0);
                (a, (prev + r).max(0.0))
            })
            .collect()
    }
}

struct DiscountedRegrets {
    alpha: f64,
    beta: f64,
}

impl RegretAccumulator for DiscountedRegrets {
    fn update(
        &mut self,
        node: &InfoStateNode,
        iteration: usize,
        cfr_regrets: &BTreeMap<ActionId, f64>,
    ) -> BTreeMap<ActionId, f64> {
        let t = iteration as f64;
        let (pos, neg) = if iteration == 0 {
            (0.0, 0.0)
        } else {
            (
                t.powf(self.alpha) / (t.powf(self.alpha) + 1.0),
                t.powf(self.beta) / (t.powf(self.beta) + 1.0),
            )
        };
        cfr_regrets
            .iter()
            .map(|(&a, &r)| {
                let prev = node.cumulative_regret.get(&a).copied().unwrap_or(0.0);
                let d = if prev >= 0.0 { pos } else { neg };
                (a, prev * d + r)
            })
            .collect()
    }
}

struct MatchRegrets;

impl PolicyFromRegretAccumulator for MatchRegrets {
    fn update(
        &mut self,
        node: &InfoStateNode,
        _iteration: usize,
        _cfr_regrets: &BTreeMap<ActionId, f64>,
        _previous_policy: &BTreeMap<ActionId, f64>,
    ) -> BTreeMap<ActionId, f64> {
        regret_matching(&node.cumulative_regret)
    }
}

struct PredictiveMatch;

impl PolicyFromRegretAccumulator for PredictiveMatch {
    fn update(
        &mut self,
        node: &InfoStateNode,
        _iteration: usize,
        cfr_regrets: &BTreeMap<ActionId, f64>,
        _previous_policy: &BTreeMap<ActionId, f64>,
    ) -> BTreeMap<ActionId, f64> {
        let predicted: BTreeMap<ActionId, f64> = node
            .legal_actions
            .iter()
            .map(|&a| {
                let q = node.cumulative_regret.get(&a).copied().unwrap_or(0.0);
                let r = cfr_regrets.get(&a).copied().unwrap_or(0.0);
                (a, (q + r).max(0.0))
            })
            .collect();
        regret_matching(&predicted)
    }
}

struct PolynomialAverage {
    degree: i32,
}

impl PolicyAccumulator for PolynomialAverage {
    fn update(
        &mut self,
        node: &InfoStateNode,
        iteration: usize,
        info_state_policy: &BTreeMap<ActionId, f64>,
        _cfr_regrets: &BTreeMap<ActionId, f64>,
        reach_prob: f64,
        _counterfactual_reach_prob: f64,
    ) -> BTreeMap<ActionId, f64> {
        let weight = ((iteration + 1) as f64).powi(self.degree);
        info_state_policy
            .iter()
            .map(|(&a, &p)| {
                let prev = node.cumulative_policy.get(&a).copied().unwrap_or(0.0);
                (a, prev + weight * reach_prob * p)
            })
            .collect()
    }
}

struct DiscountedAverage {
    gamma: f64,
}

impl PolicyAccumulator for DiscountedAverage {
    fn update(
        &mut self,
        node: &InfoStateNode,
        iteration: usize,
        info_state_policy: &BTreeMap<ActionId, f64>,
        _cfr_regrets: &BTreeMap<ActionId, f64>,
        reach_prob: f64,
        _counterfactual_reach_prob: f64,
    ) -> BTreeMap<ActionId, f64> {
        let t = iteration as f64;
        let factor = if iteration == 0 {
            0.0
        } else {
            (t / (t + 1.0)).powf(self.gamma)
        };
        info_state_policy
            .iter()
            .map(|(&a, &p)| {
                let prev = node.cumulative_policy.get(&a).copied().unwrap_or(0.0);
                (a, prev * factor + reach_prob * p)
            })
            .collect()
    }
}
