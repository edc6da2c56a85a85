//! Two-player Liar's Dice with one die of `sides` faces per player.
//!
//! After the private rolls, players alternate starting with player 0. A bid
//! claims that at least `quantity` dice (1 or 2) show `face`; bids are ordered
//! lexicographically by quantity then face and must strictly increase. Once a
//! bid exists the player to move may instead call the bluff, ending the game.
//! The highest face is wild and counts toward every face. Utilities are +1/-1
//! by whether the last bid stands.
//!
//! Dense action ids list the remaining bids in ascending order followed by
//! the challenge action.

use crate::error::{Error, Result};
use crate::game::{ActionId, InfoKey, ToMove};

#[derive(Clone, Debug)]
pub struct LiarsDiceState {
    sides: usize,
    history: Vec<ActionId>,
    dice: Vec<u8>,
    bids: Vec<u8>,
    challenged: bool,
}

impl LiarsDiceState {
    pub fn new(sides: usize) -> LiarsDiceState {
        LiarsDiceState {
            sides,
            history: Vec::new(),
            dice: Vec::new(),
            bids: Vec::new(),
            challenged: false,
        }
    }

    fn total_bids(&self) -> usize {
        2 * self.sides
    }

    fn next_bid_base(&self) -> usize {
        self.bids.last().map(|&b| b as usize + 1).unwrap_or(0)
    }

    fn open_bids(&self) -> usize {
        self.total_bids() - self.next_bid_base()
    }

    fn bid_label(&self, bid: u8) -> String {
        let quantity = bid as usize / self.sides + 1;
        let face = bid as usize % self.sides + 1;
        format!("{quantity}.{face}")
    }

    pub fn to_move(&self) -> ToMove {
        if self.dice.len() < 2 {
            ToMove::Chance
        } else if self.challenged {
            ToMove::Terminal
        } else {
            ToMove::Player(self.bids.len() % 2)
        }
    }

    pub fn legal_actions(&self) -> Vec<ActionId> {
        match self.to_move() {
            ToMove::Chance => (0..self.sides).collect(),
            ToMove::Terminal => Vec::new(),
            ToMove::Player(_) => {
                let n = self.open_bids() + usize::from(!self.bids.is_empty());
                (0..n).collect()
            }
        }
    }

    pub fn chance_outcomes(&self) -> Vec<(ActionId, f64)> {
        if self.to_move() != ToMove::Chance {
            return Vec::new();
        }
        (0..self.sides).map(|a| (a, 1.0 / self.sides as f64)).collect()
    }

    pub fn child(&self, action: ActionId) -> Result<LiarsDiceState> {
        let mut next = self.clone();
        match self.to_move() {
            ToMove::Terminal => return Err(Error::IllegalAction(action)),
            ToMove::Chance => {
                if action >= self.sides {
                    return Err(Error::IllegalAction(action));
                }
                next.dice.push(action as u8 + 1);
            }
            ToMove::Player(_) => {
                let open = self.open_bids();
                if action < open {
                    next.bids.push((self.next_bid_base() + action) as u8);
                } else if action == open && !self.bids.is_empty() {
                    next.challenged = true;
                } else {
                    return Err(Error::IllegalAction(action));
                }
            }
        }
        next.history.push(action);
        Ok(next)
    }

    pub fn returns(&self) -> Result<Vec<f64>> {
        if self.to_move() != ToMove::Terminal {
            return Err(Error::NotTerminal);
        }
        let last = *self.bids.last().expect("challenge requires a bid") as usize;
        let quantity = last / self.sides + 1;
        let face = (last % self.sides + 1) as u8;
        let wild = self.sides as u8;
        let count = self
            .dice
            .iter()
            .filter(|&&die| die == face || die == wild)
            .count();
        let bidder = (self.bids.len() - 1) % 2;
        let mut returns = vec![0.0; 2];
        if count >= quantity {
            returns[bidder] = 1.0;
            returns[1 - bidder] = -1.0;
        } else {
            returns[bidder] = -1.0;
            returns[1 - bidder] = 1.0;
        }
        Ok(returns)
    }

    pub fn info_key(&self) -> InfoKey {
        let p = match self.to_move() {
            ToMove::Player(p) => p,
            other => panic!("info_key requested at a {other:?} node"),
        };
        let seq: Vec<String> = self.bids.iter().map(|&b| self.bid_label(b)).collect();
        InfoKey {
            player: p,
            key: format!("liars_dice|p{p}|{}|{}", self.dice[p], seq.join("/")),
        }
    }

    pub fn history(&self) -> &[ActionId] {
        &self.history
    }
}
