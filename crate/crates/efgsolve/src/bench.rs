//! Experiment runner behind the command-line interface: flat key=value
//! configuration with later pairs overriding earlier ones, CSV convergence
//! traces with a seed sidecar line, and the fitness aggregate over a named
//! game suite.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use crate::cfr::{aod, presets, vad, CfrComponents, CfrSolver, UpdateMode};
use crate::cfr::aod::AodParams;
use crate::cfr::vad::VadParams;
use crate::error::{Error, Result};
use crate::exploitability::exploitability;
use crate::game::{Game, GameSpec};
use crate::policy::TabularPolicy;
use crate::psro::solvers::{
    MetaStrategySolver, NashLpMss, PrdMss, RegretMatchingMss, ShorEvalParams, ShorTrainParams,
    UniformMss,
};
use crate::psro::{run_psro, PsroTrace};

/// Splits `key = value` lines, skipping blanks and `#` comments.
pub fn parse_kv_text(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for (number, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Config(format!(
                "config line {}: expected `key = value`, got `{}`",
                number + 1,
                line
            )));
        };
        pairs.push((key.trim().to_string(), value.trim().to_string()));
    }
    Ok(pairs)
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("cannot parse `{value}` for key `{key}`")))
}

fn parse_update_mode(value: &str) -> Result<UpdateMode> {
    match value {
        "simultaneous" => Ok(UpdateMode::Simultaneous),
        "alternating" => Ok(UpdateMode::Alternating),
        other => Err(Error::Config(format!(
            "unknown update mode `{other}`; expected simultaneous or alternating"
        ))),
    }
}

const OVERRIDE_PREFIXES: [&str; 6] = ["vad", "aod", "shor", "shor_eval", "rm", "prd"];

/// Fully merged settings for one run. Build with [`RunConfig::from_pairs`];
/// callers append command-line pairs after config-file pairs so the command
/// line wins.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub game: String,
    pub players: usize,
    pub cards: usize,
    pub dice_sides: usize,
    pub variant: String,
    pub train_mss: String,
    pub eval_mss: String,
    pub iterations: usize,
    pub epochs: usize,
    pub eval_every: usize,
    pub seed: u64,
    pub out: Option<String>,
    pub update_mode: Option<UpdateMode>,
    pub suite: String,
    overrides: BTreeMap<String, String>,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            game: "kuhn".into(),
            players: 2,
            cards: 4,
            dice_sides: 5,
            variant: "cfr".into(),
            train_mss: "uniform".into(),
            eval_mss: "uniform".into(),
            iterations: 1000,
            epochs: 100,
            eval_every: 10,
            seed: 0,
            out: None,
            update_mode: None,
            suite: "train".into(),
            overrides: BTreeMap::new(),
        }
    }
}

impl RunConfig {
    pub fn from_pairs(pairs: &[(String, String)]) -> Result<RunConfig> {
        let mut config = RunConfig::default();
        for (key, value) in pairs {
            config.apply(key, value)?;
        }
        if config.eval_every < 1 {
            return Err(Error::Config("eval_every must be at least 1".into()));
        }
        if config.epochs < 1 {
            return Err(Error::Config("epochs must be at least 1".into()));
        }
        Ok(config)
    }

    fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "game" => self.game = value.to_string(),
            "players" => self.players = parse_value(key, value)?,
            "cards" => self.cards = parse_value(key, value)?,
            "dice_sides" => self.dice_sides = parse_value(key, value)?,
            "variant" => self.variant = value.to_string(),
            "train_mss" => self.train_mss = value.to_string(),
            "eval_mss" => self.eval_mss = value.to_string(),
            "iterations" => self.iterations = parse_value(key, value)?,
            "epochs" => self.epochs = parse_value(key, value)?,
            "eval_every" => self.eval_every = parse_value(key, value)?,
            "seed" => self.seed = parse_value(key, value)?,
            "out" => self.out = Some(value.to_string()),
            "update_mode" => self.update_mode = Some(parse_update_mode(value)?),
            "suite" => self.suite = value.to_string(),
            dotted if dotted.contains('.') => {
                let prefix = dotted.split('.').next().unwrap();
                if !OVERRIDE_PREFIXES.contains(&prefix) {
                    return Err(Error::Config(format!(
                        "unknown parameter namespace `{prefix}`; expected one of {:?}",
                        OVERRIDE_PREFIXES
                    )));
                }
                self.overrides.insert(dotted.to_string(), value.to_string());
            }
            other => return Err(Error::Config(format!("unknown config key `{other}`"))),
        }
        Ok(())
    }

    fn overrides_for<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = (&'a str, &'a str)> {
        self.overrides.iter().filter_map(move |(key, value)| {
            let rest = key.strip_prefix(prefix)?.strip_prefix('.')?;
            (!rest.contains('.')).then_some((rest, value.as_str()))
        })
    }

    pub fn vad_params(&self) -> Result<VadParams> {
        let mut p = VadParams::default();
        for (field, value) in self.overrides_for("vad") {
            let key = format!("vad.{field}");
            match field {
                "base_alpha" => p.base_alpha = parse_value(&key, value)?,
                "base_beta" => p.base_beta = parse_value(&key, value)?,
                "volatility_sensitivity" => p.volatility_sensitivity = parse_value(&key, value)?,
                "max_expected_instantaneous_regret" => {
                    p.max_expected_instantaneous_regret = parse_value(&key, value)?
                }
                "instantaneous_regret_boost_factor" => {
                    p.instantaneous_regret_boost_factor = parse_value(&key, value)?
                }
                "ewma_decay_factor" => p.ewma_decay_factor = parse_value(&key, value)?,
                "negative_regret_cap" => p.negative_regret_cap = parse_value(&key, value)?,
                "initial_optimism_factor" => {
                    p.initial_optimism_factor = parse_value(&key, value)?
                }
                "optimism_decay_factor" => p.optimism_decay_factor = parse_value(&key, value)?,
                "positive_policy_exponent" => {
                    p.positive_policy_exponent = parse_value(&key, value)?
                }
                "base_gamma" => p.base_gamma = parse_value(&key, value)?,
                "gamma_max" => p.gamma_max = parse_value(&key, value)?,
                "gamma_volatility_sensitivity" => {
                    p.gamma_volatility_sensitivity = parse_value(&key, value)?
                }
                "warmup_iterations" => p.warmup_iterations = parse_value(&key, value)?,
                "stability_exponent" => p.stability_exponent = parse_value(&key, value)?,
                "regret_magnitude_weighting_exponent" => {
                    p.regret_magnitude_weighting_exponent = parse_value(&key, value)?
                }
                other => {
                    return Err(Error::Config(format!("unknown vad parameter `{other}`")));
                }
            }
        }
        Ok(p)
    }

    pub fn aod_params(&self) -> Result<AodParams> {
        let mut p = AodParams::default();
        for (field, value) in self.overrides_for("aod") {
            let key = format!("aod.{field}");
            match field {
                "alpha_start" => p.alpha_start = parse_value(&key, value)?,
                "alpha_max" => p.alpha_max = parse_value(&key, value)?,
                "schedule_t_alpha" => p.schedule_t_alpha = parse_value(&key, value)?,
                "beta_start" => p.beta_start = parse_value(&key, value)?,
                "beta_max" => p.beta_max = parse_value(&key, value)?,
                "schedule_t_beta" => p.schedule_t_beta = parse_value(&key, value)?,
                "pos_cum_pos_inst_scale" => p.pos_cum_pos_inst_scale = parse_value(&key, value)?,
                "pos_cum_neg_inst_scale" => p.pos_cum_neg_inst_scale = parse_value(&key, value)?,
                "neg_cum_pos_inst_scale" => p.neg_cum_pos_inst_scale = parse_value(&key, value)?,
                "neg_cum_neg_inst_scale" => p.neg_cum_neg_inst_scale = parse_value(&key, value)?,
                "use_squared_weights" => p.use_squared_weights = parse_value(&key, value)?,
                "cumulative_regret_ema_alpha" => {
                    p.cumulative_regret_ema_alpha = parse_value(&key, value)?
                }
                "optimism_trend_scale" => p.optimism_trend_scale = parse_value(&key, value)?,
                "gamma_start" => p.gamma_start = parse_value(&key, value)?,
                "gamma_max" => p.gamma_max = parse_value(&key, value)?,
                "gamma_schedule_t" => p.gamma_schedule_t = parse_value(&key, value)?,
                other => {
                    return Err(Error::Config(format!("unknown aod parameter `{other}`")));
                }
            }
        }
        Ok(p)
    }

    pub fn shor_train_params(&self) -> Result<ShorTrainParams> {
        let mut p = ShorTrainParams::default();
        for (field, value) in self.overrides_for("shor") {
            let key = format!("shor.{field}");
            match field {
                "base_iters" => p.base_iters = parse_value(&key, value)?,
                "iters_per_policy" => p.iters_per_policy = parse_value(&key, value)?,
                "max_iters" => p.max_iters = parse_value(&key, value)?,
                "initial_blend" => p.initial_blend = parse_value(&key, value)?,
                "final_blend" => p.final_blend = parse_value(&key, value)?,
                "initial_temperature" => p.initial_temperature = parse_value(&key, value)?,
                "final_temperature" => p.final_temperature = parse_value(&key, value)?,
                "initial_diversity" => p.initial_diversity = parse_value(&key, value)?,
                "final_diversity" => p.final_diversity = parse_value(&key, value)?,
                "momentum" => p.momentum = parse_value(&key, value)?,
                "gain_normalization" => p.gain_normalization = parse_value(&key, value)?,
                "anneal_horizon" => p.anneal_horizon = parse_value(&key, value)?,
                other => {
                    return Err(Error::Config(format!("unknown shor parameter `{other}`")));
                }
            }
        }
        Ok(p)
    }

    pub fn shor_eval_params(&self) -> Result<ShorEvalParams> {
        let mut p = ShorEvalParams::default();
        for (field, value) in self.overrides_for("shor_eval") {
            let key = format!("shor_eval.{field}");
            match field {
                "base_iters" => p.base_iters = parse_value(&key, value)?,
                "iters_per_policy" => p.iters_per_policy = parse_value(&key, value)?,
                "max_iters" => p.max_iters = parse_value(&key, value)?,
                "blend" => p.blend = parse_value(&key, value)?,
                "temperature" => p.temperature = parse_value(&key, value)?,
                "momentum" => p.momentum = parse_value(&key, value)?,
                "diversity" => p.diversity = parse_value(&key, value)?,
                "gain_normalization" => p.gain_normalization = parse_value(&key, value)?,
                other => {
                    return Err(Error::Config(format!(
                        "unknown shor_eval parameter `{other}`"
                    )));
                }
            }
        }
        Ok(p)
    }

    fn rm_mss(&self) -> Result<RegretMatchingMss> {
        let mut p = RegretMatchingMss::default();
        for (field, value) in self.overrides_for("rm") {
            match field {
                "iterations" => p.iterations = parse_value("rm.iterations", value)?,
                other => {
                    return Err(Error::Config(format!("unknown rm parameter `{other}`")));
                }
            }
        }
        Ok(p)
    }

    fn prd_mss(&self) -> Result<PrdMss> {
        let mut p = PrdMss::default();
        for (field, value) in self.overrides_for("prd") {
            let key = format!("prd.{field}");
            match field {
                "iterations" => p.iterations = parse_value(&key, value)?,
                "step" => p.step = parse_value(&key, value)?,
                "floor" => p.floor = parse_value(&key, value)?,
                other => {
                    return Err(Error::Config(format!("unknown prd parameter `{other}`")));
                }
            }
        }
        Ok(p)
    }
}

/// Instantiates the configured game.
pub fn game_spec(config: &RunConfig) -> Result<GameSpec> {
    match config.game.as_str() {
        "kuhn" => Ok(GameSpec::Kuhn {
            players: config.players,
        }),
        "leduc" => Ok(GameSpec::Leduc {
            players: config.players,
        }),
        "goofspiel" => {
            if config.players != 2 {
                return Err(Error::Config(
                    "goofspiel is two-player; size it with `cards`".into(),
                ));
            }
            Ok(GameSpec::Goofspiel {
                cards: config.cards,
            })
        }
        "liars_dice" => {
            if config.players != 2 {
                return Err(Error::Config(
                    "liars_dice is two-player; size it with `dice_sides`".into(),
                ));
            }
            Ok(GameSpec::LiarsDice {
                sides: config.dice_sides,
            })
        }
        other => Err(Error::Config(format!(
            "unknown game `{other}`; expected kuhn, leduc, goofspiel, or liars_dice"
        ))),
    }
}

/// Component triple for a variant name, with the optional update-mode
/// override applied.
pub fn variant_components(config: &RunConfig) -> Result<CfrComponents> {
    let mut components = match config.variant.as_str() {
        "vad_cfr" | "vad" => vad::components(&config.vad_params()?),
        "aod_cfr" | "aod" => aod::components(&config.aod_params()?),
        name @ ("cfr" | "cfr_plus" | "lcfr" | "dcfr" | "pcfr_plus") => presets::preset(name)?,
        other => return Err(Error::UnknownVariant(other.to_string())),
    };
    if let Some(mode) = config.update_mode {
        components.update_mode = mode;
    }
    Ok(components)
}

fn meta_solver(config: &RunConfig, name: &str, training: bool) -> Result<Box<dyn MetaStrategySolver>> {
    match name {
        "uniform" => Ok(Box::new(UniformMss)),
        "nash_lp" => Ok(Box::new(NashLpMss)),
        "rm" => Ok(Box::new(config.rm_mss()?)),
        "prd" => Ok(Box::new(config.prd_mss()?)),
        "shor" if training => Ok(Box::new(config.shor_train_params()?)),
        "shor_eval" if !training => Ok(Box::new(config.shor_eval_params()?)),
        "shor" | "shor_eval" => Err(Error::Config(format!(
            "`{name}` is {} solver; use `shor` for training and `shor_eval` for evaluation",
            if name == "shor" { "a training" } else { "an evaluation" }
        ))),
        "alpharank" => Err(Error::Config(
            "alpharank is not implemented; pick uniform, nash_lp, rm, prd, shor, or shor_eval"
                .into(),
        )),
        other => Err(Error::Config(format!(
            "unknown meta-strategy solver `{other}`"
        ))),
    }
}

pub fn train_solver(config: &RunConfig) -> Result<Box<dyn MetaStrategySolver>> {
    meta_solver(config, &config.train_mss, true)
}

pub fn eval_solver(config: &RunConfig) -> Result<Box<dyn MetaStrategySolver>> {
    meta_solver(config, &config.eval_mss, false)
}

#[derive(Clone, Debug)]
pub struct CfrTraceRow {
    pub iteration: usize,
    pub exploitability: f64,
    pub elapsed_ms: f64,
}

/// Runs the configured variant, scoring the average policy every
/// `eval_every` iterations.
pub fn run_cfr_trace(config: &RunConfig) -> Result<Vec<CfrTraceRow>> {
    let game = Game::new(game_spec(config)?)?;
    let mut solver = CfrSolver::new(game, variant_components(config)?)?;
    let start = Instant::now();
    let mut rows = Vec::new();
    for iteration in 1..=config.iterations {
        solver.run_iteration();
        if iteration % config.eval_every == 0 {
            let policies = solver.average_policies();
            let refs: Vec<&TabularPolicy> = policies.iter().collect();
            rows.push(CfrTraceRow {
                iteration,
                exploitability: exploitability(solver.game(), &refs)?,
                elapsed_ms: start.elapsed().as_secs_f64() * 1000.0,
            });
        }
    }
    Ok(rows)
}

/// Runs the population loop with the configured solver pair.
pub fn run_psro_trace(config: &RunConfig) -> Result<PsroTrace> {
    let game = Game::new(game_spec(config)?)?;
    if game.num_players() != 2
        && (config.train_mss == "nash_lp" || config.eval_mss == "nash_lp")
    {
        return Err(Error::Config(format!(
            "nash_lp needs a two-player game, but {} has {} players",
            game.spec().label(),
            game.num_players()
        )));
    }
    let mut train = train_solver(config)?;
    let mut eval = eval_solver(config)?;
    run_psro(&game, train.as_mut(), eval.as_mut(), config.epochs)
}

/// Decimal rendering with 12 significant digits and no exponent notation.
pub fn fmt_sig(value: f64) -> String {
    if value == 0.0 {
        return format!("{:.11}", 0.0);
    }
    let magnitude = value.abs().log10().floor() as i32;
    let precision = (11 - magnitude).max(0) as usize;
    format!("{value:.precision$}")
}

/// CSV with a `# seed` sidecar line and a one-line header.
pub fn cfr_trace_csv(config: &RunConfig, rows: &[CfrTraceRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# seed = {}", config.seed);
    let _ = writeln!(out, "iteration,exploitability,elapsed_ms");
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{}",
            row.iteration,
            fmt_sig(row.exploitability),
            fmt_sig(row.elapsed_ms)
        );
    }
    out
}

pub fn psro_trace_csv(config: &RunConfig, trace: &PsroTrace) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# seed = {}", config.seed);
    let _ = writeln!(out, "epoch,population_size,eval_exploitability,elapsed_ms");
    for row in &trace.epochs {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            row.epoch,
            row.population_sizes[0],
            fmt_sig(row.eval_exploitability),
            fmt_sig(row.elapsed_ms)
        );
    }
    out
}

/// Built-in game suites.
pub fn suite(name: &str) -> Result<Vec<GameSpec>> {
    match name {
        "train" => Ok(vec![
            GameSpec::Kuhn { players: 3 },
            GameSpec::Leduc { players: 2 },
            GameSpec::Goofspiel { cards: 4 },
            GameSpec::LiarsDice { sides: 5 },
        ]),
        "test" => Ok(vec![
            GameSpec::Kuhn { players: 4 },
            GameSpec::Leduc { players: 3 },
            GameSpec::Goofspiel { cards: 5 },
            GameSpec::LiarsDice { sides: 6 },
        ]),
        other => Err(Error::Config(format!(
            "unknown suite `{other}`; expected train or test"
        ))),
    }
}

#[derive(Clone, Debug)]
pub struct FitnessReport {
    pub suite: String,
    pub variant: String,
    pub per_game: Vec<(String, f64)>,
    pub fitness: f64,
}

/// Negative mean final exploitability of the variant across the suite at the
/// configured horizon.
pub fn fitness(config: &RunConfig) -> Result<FitnessReport> {
    let specs = suite(&config.suite)?;
    let mut per_game = Vec::with_capacity(specs.len());
    let mut total = 0.0;
    for spec in specs {
        let game = Game::new(spec.clone())?;
        let mut solver = CfrSolver::new(game, variant_components(config)?)?;
        solver.run(config.iterations);
        let policies = solver.average_policies();
        let refs: Vec<&TabularPolicy> = policies.iter().collect();
        let value = exploitability(solver.game(), &refs)?;
        total += value;
        per_game.push((spec.label(), value));
    }
    Ok(FitnessReport {
        suite: config.suite.clone(),
        variant: config.variant.clone(),
        fitness: -total / per_game.len() as f64,
        per_game,
    })
}

pub fn fitness_csv(config: &RunConfig, report: &FitnessReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# seed = {}", config.seed);
    let _ = writeln!(out, "game,final_exploitability");
    for (label, value) in &report.per_game {
        let _ = writeln!(out, "{},{}", label, fmt_sig(*value));
    }
    let _ = writeln!(out, "# fitness = {}", fmt_sig(report.fitness));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(items: &[(&str, &str)]) -> Vec<(String, String)> {
        items
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    }

    #[test]
    fn kv_text_skips_comments_and_trims() {
        let text = "# horizon\n\n iterations = 250 \ngame=leduc\nvad.base_alpha = 1.25\n";
        let parsed = parse_kv_text(text).unwrap();
        assert_eq!(
            parsed,
            pairs(&[
                ("iterations", "250"),
                ("game", "leduc"),
                ("vad.base_alpha", "1.25")
            ])
        );
        assert!(parse_kv_text("iterations 250").is_err());
    }

    #[test]
    fn later_pairs_win() {
        let config = RunConfig::from_pairs(&pairs(&[
            ("iterations", "250"),
            ("game", "leduc"),
            ("iterations", "75"),
        ]))
        .unwrap();
        assert_eq!(config.iterations, 75);
        assert_eq!(config.game, "leduc");
        assert_eq!(config.epochs, 100);
        assert_eq!(config.eval_every, 10);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(RunConfig::from_pairs(&pairs(&[("iterations", "abc")])).is_err());
        assert!(RunConfig::from_pairs(&pairs(&[("horizon", "10")])).is_err());
        assert!(RunConfig::from_pairs(&pairs(&[("mystery.knob", "1")])).is_err());
        assert!(RunConfig::from_pairs(&pairs(&[("eval_every", "0")])).is_err());
    }

    #[test]
    fn parameter_namespaces_reach_the_solvers() {
        let config = RunConfig::from_pairs(&pairs(&[
            ("vad.base_alpha", "1.25"),
            ("shor.momentum", "0.7"),
            ("shor_eval.base_iters", "400"),
            ("prd.step", "0.01"),
            ("rm.iterations", "123"),
        ]))
        .unwrap();
        assert_eq!(config.vad_params().unwrap().base_alpha, 1.25);
        assert_eq!(config.shor_train_params().unwrap().momentum, 0.7);
        assert_eq!(config.shor_eval_params().unwrap().base_iters, 400);
        assert_eq!(config.prd_mss().unwrap().step, 0.01);
        assert_eq!(config.rm_mss().unwrap().iterations, 123);

        let bad = RunConfig::from_pairs(&pairs(&[("vad.not_a_knob", "1")])).unwrap();
        assert!(bad.vad_params().is_err());
    }

    #[test]
    fn variant_lookup_and_update_mode_override() {
        let mut config = RunConfig::default();
        config.variant = "nope".into();
        assert!(matches!(
            variant_components(&config),
            Err(Error::UnknownVariant(_))
        ));
        config.variant = "cfr".into();
        assert_eq!(
            variant_components(&config).unwrap().update_mode,
            UpdateMode::Simultaneous
        );
        config.update_mode = Some(UpdateMode::Alternating);
        assert_eq!(
            variant_components(&config).unwrap().update_mode,
            UpdateMode::Alternating
        );
        config.variant = "vad_cfr".into();
        config.update_mode = None;
        assert_eq!(
            variant_components(&config).unwrap().update_mode,
            UpdateMode::Alternating
        );
    }

    #[test]
    fn solver_factory_enforces_roles() {
        let mut config = RunConfig::default();
        config.train_mss = "alpharank".into();
        let err = match train_solver(&config) {
            Err(err) => err,
            Ok(_) => panic!("alpharank should be rejected"),
        };
        assert!(err.to_string().contains("alpharank"));
        config.train_mss = "shor_eval".into();
        assert!(train_solver(&config).is_err());
        config.train_mss = "shor".into();
        assert!(train_solver(&config).is_ok());
        config.eval_mss = "shor".into();
        assert!(eval_solver(&config).is_err());
        config.eval_mss = "shor_eval".into();
        assert!(eval_solver(&config).is_ok());
    }

    #[test]
    fn game_spec_distinguishes_size_flags() {
        let mut config = RunConfig::default();
        config.game = "liars_dice".into();
        config.dice_sides = 3;
        assert_eq!(game_spec(&config).unwrap(), GameSpec::LiarsDice { sides: 3 });
        config.game = "goofspiel".into();
        config.players = 3;
        assert!(game_spec(&config).is_err());
        config.players = 2;
        config.cards = 5;
        assert_eq!(game_spec(&config).unwrap(), GameSpec::Goofspiel { cards: 5 });
    }

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_sig(0.0), "0.00000000000");
        assert_eq!(fmt_sig(1.0), "1.00000000000");
        assert_eq!(fmt_sig(0.015), "0.0150000000000");
        assert_eq!(fmt_sig(123.456), "123.456000000");
        assert_eq!(fmt_sig(-0.25), "-0.250000000000");
        assert_eq!(fmt_sig(1e-9), "0.00000000100000000000");
        assert_eq!(fmt_sig(98765432109876.0), "98765432109876");
    }

    #[test]
    fn trace_row_cadence_matches_eval_every() {
        let config = RunConfig::from_pairs(&pairs(&[
            ("variant", "cfr_plus"),
            ("iterations", "50"),
            ("eval_every", "10"),
        ]))
        .unwrap();
        let rows = run_cfr_trace(&config).unwrap();
        let iterations: Vec<usize> = rows.iter().map(|r| r.iteration).collect();
        assert_eq!(iterations, vec![10, 20, 30, 40, 50]);
        assert!(rows.iter().all(|r| r.exploitability >= 0.0));

        let one = RunConfig::from_pairs(&pairs(&[
            ("iterations", "50"),
            ("eval_every", "50"),
        ]))
        .unwrap();
        assert_eq!(run_cfr_trace(&one).unwrap().len(), 1);
    }

    #[test]
    fn csv_shape_and_sidecar() {
        let config = RunConfig::from_pairs(&pairs(&[
            ("iterations", "20"),
            ("eval_every", "10"),
            ("seed", "7"),
        ]))
        .unwrap();
        let rows = run_cfr_trace(&config).unwrap();
        let csv = cfr_trace_csv(&config, &rows);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# seed = 7");
        assert_eq!(lines[1], "iteration,exploitability,elapsed_ms");
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[2].split(',').count(), 3);
    }

    #[test]
    fn suites_are_fixed() {
        let train: Vec<String> = suite("train").unwrap().iter().map(|s| s.label()).collect();
        assert_eq!(train, ["kuhn3", "leduc2", "goofspiel4", "liars_dice5"]);
        let test: Vec<String> = suite("test").unwrap().iter().map(|s| s.label()).collect();
        assert_eq!(test, ["kuhn4", "leduc3", "goofspiel5", "liars_dice6"]);
        assert!(suite("dev").is_err());
    }

    #[test]
    fn psro_rejects_lp_beyond_two_players() {
        let config = RunConfig::from_pairs(&pairs(&[
            ("players", "3"),
            ("train_mss", "nash_lp"),
            ("epochs", "1"),
        ]))
        .unwrap();
        let err = run_psro_trace(&config).unwrap_err();
        assert!(err.to_string().contains("two-player"));
    }
}
