//! Two-player Goofspiel.
//!
//! Prizes worth K, K-1, ..., 1 are auctioned in that fixed order. Each round
//! both players secretly bid one card from their hand of 1..=K; the higher
//! bid takes the prize and ties discard it. Bids are serialized as player 0
//! then player 1, with player 1's information key hiding player 0's pending
//! bid. Past bids are public. The terminal utility is the sign of the point
//! differential.

use crate::error::{Error, Result};
use crate::game::{ActionId, InfoKey, ToMove};

#[derive(Clone, Debug)]
pub struct GoofspielState {
    cards: usize,
    history: Vec<ActionId>,
    hands: [Vec<u8>; 2],
    scores: [u32; 2],
    round: usize,
    pending: Option<u8>,
    past: [Vec<u8>; 2],
}

impl GoofspielState {
    pub fn new(cards: usize) -> GoofspielState {
        let hand: Vec<u8> = (1..=cards as u8).collect();
        GoofspielState {
            cards,
            history: Vec::new(),
            hands: [hand.clone(), hand],
            scores: [0, 0],
            round: 0,
            pending: None,
            past: [Vec::new(), Vec::new()],
        }
    }

    pub fn to_move(&self) -> ToMove {
        if self.round == self.cards {
            ToMove::Terminal
        } else if self.pending.is_none() {
            ToMove::Player(0)
        } else {
            ToMove::Player(1)
        }
    }

    pub fn legal_actions(&self) -> Vec<ActionId> {
        match self.to_move() {
            ToMove::Player(p) => (0..self.hands[p].len()).collect(),
            _ => Vec::new(),
        }
    }

    pub fn chance_outcomes(&self) -> Vec<(ActionId, f64)> {
        Vec::new()
    }

    pub fn child(&self, action: ActionId) -> Result<GoofspielState> {
        let p = match self.to_move() {
            ToMove::Player(p) => p,
            _ => return Err(Error::IllegalAction(action)),
        };
        if action >= self.hands[p].len() {
            return Err(Error::IllegalAction(action));
        }
        let mut next = self.clone();
        let card = next.hands[p].remove(action);
        match self.pending {
            None => next.pending = Some(card),
            Some(first) => {
                let prize = (self.cards - self.round) as u32;
                if first > card {
                    next.scores[0] += prize;
                } else if card > first {
                    next.scores[1] += prize;
                }
                next.past[0].push(first);
                next.past[1].push(card);
                next.pending = None;
                next.round += 1;
            }
        }
        next.history.push(action);
        Ok(next)
    }

    pub fn returns(&self) -> Result<Vec<f64>> {
        if self.to_move() != ToMove::Terminal {
            return Err(Error::NotTerminal);
        }
        let diff = self.scores[0] as i64 - self.scores[1] as i64;
        let sign = (diff.signum()) as f64;
        Ok(vec![sign, -sign])
    }

    pub fn info_key(&self) -> InfoKey {
        let p = match self.to_move() {
            ToMove::Player(p) => p,
            other => panic!("info_key requested at a {other:?} node"),
        };
        let join = |bids: &[u8]| {
            bids.iter()
                .map(|b| b.to_string())
                .collect::<Vec<_>>()
                .join("/")
        };
        InfoKey {
            player: p,
            key: format!(
                "goofspiel|p{p}|{}|{}",
                join(&self.past[p]),
                join(&self.past[1 - p])
            ),
        }
    }

    pub fn history(&self) -> &[ActionId] {
        &self.history
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn play(cards: usize, actions: &[ActionId]) -> GoofspielState {
        let mut state = GoofspielState::new(cards);
        for &a in actions {
            state = state.child(a).unwrap();
        }
        state
    }

    #[test]
    fn tie_discards_prize() {
        // Both bid 3 for the prize of 3, then play out deterministically.
        let state = play(3, &[2, 2, 0, 1, 0, 0]);
        // Round 2: p0 bids 1, p1 bids 3 -> p1 takes prize 2.
        // Round 3: p0 bids 2, p1 bids 1 -> p0 takes prize 1.
        assert_eq!(state.scores, [1, 2]);
        assert_eq!(state.returns().unwrap(), vec![-1.0, 1.0]);
    }

    #[test]
    fn utility_is_sign_of_differential() {
        // p0 takes the prizes of 3 and 2, p1 only the prize of 1.
        let state = play(3, &[1, 0, 1, 0, 0, 0]);
        assert_eq!(state.scores, [5, 1]);
        assert_eq!(state.returns().unwrap(), vec![1.0, -1.0]);
    }

    #[test]
    fn player_one_key_hides_pending_bid() {
        let after_p0 = play(3, &[1]);
        assert_eq!(after_p0.to_move(), ToMove::Player(1));
        let key = after_p0.info_key();
        assert_eq!(key.key, "goofspiel|p1||");
        // Resolved bids become public for both players.
        let next_round = play(3, &[1, 0]);
        assert_eq!(next_round.info_key().key, "goofspiel|p0|2|1");
    }
}
