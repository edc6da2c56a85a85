//! N-player Kuhn poker.
//!
//! Deck of N+1 ranked cards, one private card each, everyone antes 1. A single
//! betting round: in seat order each player passes (0) or bets 1 (1); once
//! somebody bets, every other player in wrapping seat order folds (0) or
//! calls 1 (1). Showdown among the non-folders, highest card takes the pot.

use crate::error::{Error, Result};
use crate::game::{ActionId, InfoKey, ToMove};

#[derive(Clone, Debug)]
pub struct KuhnState {
    players: usize,
    history: Vec<ActionId>,
    cards: Vec<u8>,
    bets: Vec<ActionId>,
    first_bettor: Option<usize>,
    responded: usize,
    folded: Vec<bool>,
}

impl KuhnState {
    pub fn new(players: usize) -> KuhnState {
        KuhnState {
            players,
            history: Vec::new(),
            cards: Vec::new(),
            bets: Vec::new(),
            first_bettor: None,
            responded: 0,
            folded: vec![false; players],
        }
    }

    fn remaining_cards(&self) -> Vec<u8> {
        (0..=self.players as u8)
            .filter(|c| !self.cards.contains(c))
            .collect()
    }

    pub fn to_move(&self) -> ToMove {
        if self.cards.len() < self.players {
            return ToMove::Chance;
        }
        match self.first_bettor {
            None => {
                if self.bets.len() == self.players {
                    ToMove::Terminal
                } else {
                    ToMove::Player(self.bets.len())
                }
            }
            Some(b) => {
                if self.responded == self.players - 1 {
                    ToMove::Terminal
                } else {
                    ToMove::Player((b + 1 + self.responded) % self.players)
                }
            }
        }
    }

    pub fn legal_actions(&self) -> Vec<ActionId> {
        match self.to_move() {
            ToMove::Chance => (0..self.remaining_cards().len()).collect(),
            ToMove::Player(_) => vec![0, 1],
            ToMove::Terminal => Vec::new(),
        }
    }

    pub fn chance_outcomes(&self) -> Vec<(ActionId, f64)> {
        if self.to_move() != ToMove::Chance {
            return Vec::new();
        }
        let n = self.remaining_cards().len();
        (0..n).map(|a| (a, 1.0 / n as f64)).collect()
    }

    pub fn child(&self, action: ActionId) -> Result<KuhnState> {
        let mut next = self.clone();
        match self.to_move() {
            ToMove::Chance => {
                let remaining = self.remaining_cards();
                let card = *remaining.get(action).ok_or(Error::IllegalAction(action))?;
                next.cards.push(card);
            }
            ToMove::Player(p) => {
                if action > 1 {
                    return Err(Error::IllegalAction(action));
                }
                next.bets.push(action);
                match self.first_bettor {
                    None => {
                        if action == 1 {
                            next.first_bettor = Some(p);
                        }
                    }
                    Some(_) => {
                        if action == 0 {
                            next.folded[p] = true;
                        }
                        next.responded += 1;
                    }
                }
            }
            ToMove::Terminal => return Err(Error::IllegalAction(action)),
        }
        next.history.push(action);
        Ok(next)
    }

    pub fn returns(&self) -> Result<Vec<f64>> {
        if self.to_move() != ToMove::Terminal {
            return Err(Error::NotTerminal);
        }
        let mut contrib = vec![1u32; self.players];
        let mut active = vec![true; self.players];
        if let Some(b) = self.first_bettor {
            contrib[b] += 1;
            for p in 0..self.players {
                if p == b {
                    continue;
                }
                if self.folded[p] {
                    active[p] = false;
                } else {
                    contrib[p] += 1;
                }
            }
        }
        let pot: u32 = contrib.iter().sum();
        let winner = (0..self.players)
            .filter(|&p| active[p])
            .max_by_key(|&p| self.cards[p])
            .expect("at least one active player");
        Ok((0..self.players)
            .map(|p| {
                let share = if p == winner { pot as f64 } else { 0.0 };
                share - contrib[p] as f64
            })
            .collect())
    }

    pub fn info_key(&self) -> InfoKey {
        let p = match self.to_move() {
            ToMove::Player(p) => p,
            other => panic!("info_key requested at a {other:?} node"),
        };
        let seq: Vec<String> = self.bets.iter().map(|a| a.to_string()).collect();
        InfoKey {
            player: p,
            key: format!("kuhn|p{p}|{}|{}", self.cards[p], seq.join("/")),
        }
    }

    pub fn history(&self) -> &[ActionId] {
        &self.history
    }
}
