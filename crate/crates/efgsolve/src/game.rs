//! Game kernel: specs, states, and exact expected returns.
//!
//! All four built-in families expose the same state interface. Actions are
//! dense integer identifiers per state (`0..n`), ordered deterministically:
//! pass/fold-style actions before bet/call/raise-style actions, and cards or
//! bids in ascending order. Information-set keys are canonical strings of the
//! form `<family>|p<player>|<private>|<public>` so that two histories share a
//! key exactly when the acting player cannot tell them apart.

use crate::error::{Error, Result};
use crate::games::{goofspiel::GoofspielState, kuhn::KuhnState, leduc::LeducState, liars_dice::LiarsDiceState};
use crate::policy::TabularPolicy;

pub type ActionId = usize;

/// Immutable description of a game instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GameSpec {
    /// N-player Kuhn poker with a deck of N+1 ranked cards.
    Kuhn { players: usize },
    /// N-player Leduc poker with a deck of 2 suits x (N+1) ranks.
    Leduc { players: usize },
    /// Two-player Goofspiel with `cards` cards per hand and descending prizes.
    Goofspiel { cards: usize },
    /// Two-player Liar's Dice, one die each with `sides` faces.
    LiarsDice { sides: usize },
}

impl GameSpec {
    pub fn family(&self) -> &'static str {
        match self {
            GameSpec::Kuhn { .. } => "kuhn",
            GameSpec::Leduc { .. } => "leduc",
            GameSpec::Goofspiel { .. } => "goofspiel",
            GameSpec::LiarsDice { .. } => "liars_dice",
        }
    }

    /// Short label such as `kuhn3` or `liars_dice5`, used in suite reports.
    pub fn label(&self) -> String {
        match self {
            GameSpec::Kuhn { players } => format!("kuhn{players}"),
            GameSpec::Leduc { players } => format!("leduc{players}"),
            GameSpec::Goofspiel { cards } => format!("goofspiel{cards}"),
            GameSpec::LiarsDice { sides } => format!("liars_dice{sides}"),
        }
    }
}

/// A validated game. Cheap to clone; all state lives in [`GameState`].
#[derive(Clone, Debug)]
pub struct Game {
    spec: GameSpec,
    players: usize,
}

impl Game {
    pub fn new(spec: GameSpec) -> Result<Game> {
        let players = match &spec {
            GameSpec::Kuhn { players } | GameSpec::Leduc { players } => {
                if *players < 2 {
                    return Err(Error::InvalidSpec(format!(
                        "{} needs at least 2 players",
                        spec.family()
                    )));
                }
                *players
            }
            GameSpec::Goofspiel { cards } => {
                if *cards < 3 {
                    return Err(Error::InvalidSpec("goofspiel needs at least 3 cards".into()));
                }
                2
            }
            GameSpec::LiarsDice { sides } => {
                if *sides < 2 {
                    return Err(Error::InvalidSpec("liars_dice needs at least 2 die sides".into()));
                }
                2
            }
        };
        Ok(Game { spec, players })
    }

    pub fn spec(&self) -> &GameSpec {
        &self.spec
    }

    pub fn num_players(&self) -> usize {
        self.players
    }

    pub fn initial_state(&self) -> GameState {
        match &self.spec {
            GameSpec::Kuhn { players } => GameState::Kuhn(KuhnState::new(*players)),
            GameSpec::Leduc { players } => GameState::Leduc(LeducState::new(*players)),
            GameSpec::Goofspiel { cards } => GameState::Goofspiel(GoofspielState::new(*cards)),
            GameSpec::LiarsDice { sides } => GameState::LiarsDice(LiarsDiceState::new(*sides)),
        }
    }
}

/// Whose turn it is at a state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ToMove {
    Chance,
    Player(usize),
    Terminal,
}

/// Key identifying an information set: the acting player plus a canonical
/// string that encodes everything the player has observed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InfoKey {
    pub player: usize,
    pub key: String,
}

/// A game history. Clones are cheap enough for full-tree recursion.
#[derive(Clone, Debug)]
pub enum GameState {
    Kuhn(KuhnState),
    Leduc(LeducState),
    Goofspiel(GoofspielState),
    LiarsDice(LiarsDiceState),
}

macro_rules! dispatch {
    ($self:ident, $s:ident => $body:expr) => {
        match $self {
            GameState::Kuhn($s) => $body,
            GameState::Leduc($s) => $body,
            GameState::Goofspiel($s) => $body,
            GameState::LiarsDice($s) => $body,
        }
    };
}

impl GameState {
    pub fn to_move(&self) -> ToMove {
        dispatch!(self, s => s.to_move())
    }

    pub fn is_terminal(&self) -> bool {
        self.to_move() == ToMove::Terminal
    }

    /// Dense action ids `0..n`; empty exactly at terminal states.
    pub fn legal_actions(&self) -> Vec<ActionId> {
        dispatch!(self, s => s.legal_actions())
    }

    /// `(action, probability)` pairs at chance nodes; empty elsewhere.
    pub fn chance_outcomes(&self) -> Vec<(ActionId, f64)> {
        dispatch!(self, s => s.chance_outcomes())
    }

    /// Applies an action, returning the successor state.
    pub fn child(&self, action: ActionId) -> Result<GameState> {
        match self {
            GameState::Kuhn(s) => s.child(action).map(GameState::Kuhn),
            GameState::Leduc(s) => s.child(action).map(GameState::Leduc),
            GameState::Goofspiel(s) => s.child(action).map(GameState::Goofspiel),
            GameState::LiarsDice(s) => s.child(action).map(GameState::LiarsDice),
        }
    }

    /// Zero-sum utilities, defined only at terminal states.
    pub fn returns(&self) -> Result<Vec<f64>> {
        dispatch!(self, s => s.returns())
    }

    /// Information-set key for the player to move.
    ///
    /// # Panics
    /// Panics at chance or terminal states.
    pub fn info_key(&self) -> InfoKey {
        dispatch!(self, s => s.info_key())
    }

    /// All action ids applied since the root, including chance actions.
    pub fn history(&self) -> &[ActionId] {
        dispatch!(self, s => s.history())
    }
}

/// Exact expected returns of a joint policy, one [`TabularPolicy`] per player.
///
/// # Errors
/// `MissingInfoSet` if a reachable info set has no entry in the player's
/// policy, `LengthMismatch` if `profile.len() != num_players`.
pub fn expected_returns(game: &Game, profile: &[&TabularPolicy]) -> Result<Vec<f64>> {
    if profile.len() != game.num_players() {
        return Err(Error::LengthMismatch(format!(
            "profile has {} policies for a {}-player game",
            profile.len(),
            game.num_players()
        )));
    }
    returns_rec(&game.initial_state(), profile, game.num_players())
}

fn returns_rec(state: &GameState, profile: &[&TabularPolicy], n: usize) -> Result<Vec<f64>> {
    match state.to_move() {
        ToMove::Terminal => state.returns(),
        ToMove::Chance => {
            let mut value = vec![0.0; n];
            for (action, prob) in state.chance_outcomes() {
                let child = returns_rec(&state.child(action)?, profile, n)?;
                for (v, c) in value.iter_mut().zip(&child) {
                    *v += prob * c;
                }
            }
            Ok(value)
        }
        ToMove::Player(p) => {
            let key = state.info_key();
            let dist = profile[p]
                .distribution(&key.key)
                .ok_or_else(|| Error::MissingInfoSet(key.key.clone()))?;
            let mut value = vec![0.0; n];
            for &(action, prob) in dist {
                if prob == 0.0 {
                    continue;
                }
                let child = returns_rec(&state.child(action)?, profile, n)?;
                for (v, c) in value.iter_mut().zip(&child) {
                    *v += prob * c;
                }
            }
            Ok(value)
        }
    }
}
