use thiserror::Error;

/// Errors surfaced by games, policies, solvers, and the bench runner.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid game spec: {0}")]
    InvalidSpec(String),
    #[error("action {0} is illegal in this state")]
    IllegalAction(usize),
    #[error("returns are only defined at terminal states")]
    NotTerminal,
    #[error("policy has no entry for info set `{0}`")]
    MissingInfoSet(String),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("unknown variant `{0}`")]
    UnknownVariant(String),
    #[error("{0} requires a two-player game")]
    NotTwoPlayer(&'static str),
    #[error("meta-game is not zero-sum (max deviation {0:.3e})")]
    NotZeroSum(f64),
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
    #[error("mixture weights are all zero")]
    AllZeroWeights,
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
