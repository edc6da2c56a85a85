//! N-player Leduc poker.
//!
//! Deck of 2 suits x (N+1) ranks; card `c` has rank `c / 2`. Everyone antes 1
//! and receives one private card. Two betting rounds with at most two raises
//! each (raise size 2 in round one, 4 in round two), separated by a public
//! card. At showdown a private card pairing the public rank beats everything,
//! otherwise the highest rank wins; exact ties split the pot.
//!
//! Dense action ids when facing a bet are fold 0 / call 1 / raise 2, otherwise
//! check 0 / raise 1.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::game::{ActionId, InfoKey, ToMove};

const BOARD_TOKEN_BASE: u16 = 100;

#[derive(Clone, Debug)]
pub struct LeducState {
    players: usize,
    history: Vec<ActionId>,
    cards: Vec<u8>,
    board: Option<u8>,
    round: u8,
    board_pending: bool,
    finished: bool,
    folded: Vec<bool>,
    contrib: Vec<u32>,
    round_contrib: Vec<u32>,
    raises: u8,
    queue: VecDeque<usize>,
    pub_seq: Vec<u16>,
}

impl LeducState {
    pub fn new(players: usize) -> LeducState {
        LeducState {
            players,
            history: Vec::new(),
            cards: Vec::new(),
            board: None,
            round: 0,
            board_pending: false,
            finished: false,
            folded: vec![false; players],
            contrib: vec![1; players],
            round_contrib: vec![0; players],
            raises: 0,
            queue: VecDeque::new(),
            pub_seq: Vec::new(),
        }
    }

    fn deck_size(&self) -> u8 {
        2 * (self.players as u8 + 1)
    }

    fn remaining_cards(&self) -> Vec<u8> {
        (0..self.deck_size())
            .filter(|c| !self.cards.contains(c) && self.board != Some(*c))
            .collect()
    }

    fn raise_size(&self) -> u32 {
        if self.round == 1 {
            2
        } else {
            4
        }
    }

    fn level(&self) -> u32 {
        *self.round_contrib.iter().max().unwrap()
    }

    fn active_count(&self) -> usize {
        self.folded.iter().filter(|f| !**f).count()
    }

    fn start_round(&mut self, round: u8) {
        self.round = round;
        self.raises = 0;
        self.round_contrib = vec![0; self.players];
        self.queue = (0..self.players).filter(|&p| !self.folded[p]).collect();
    }

    pub fn to_move(&self) -> ToMove {
        if self.cards.len() < self.players || self.board_pending {
            ToMove::Chance
        } else if self.finished {
            ToMove::Terminal
        } else {
            ToMove::Player(*self.queue.front().expect("queue nonempty while betting"))
        }
    }

    pub fn legal_actions(&self) -> Vec<ActionId> {
        match self.to_move() {
            ToMove::Chance => (0..self.remaining_cards().len()).collect(),
            ToMove::Terminal => Vec::new(),
            ToMove::Player(p) => {
                let facing = self.round_contrib[p] < self.level();
                let can_raise = self.raises < 2;
                let n = if facing { 2 } else { 1 } + usize::from(can_raise);
                (0..n).collect()
            }
        }
    }

    pub fn chance_outcomes(&self) -> Vec<(ActionId, f64)> {
        if self.to_move() != ToMove::Chance {
            return Vec::new();
        }
        let n = self.remaining_cards().len();
        (0..n).map(|a| (a, 1.0 / n as f64)).collect()
    }

    pub fn child(&self, action: ActionId) -> Result<LeducState> {
        let mut next = self.clone();
        match self.to_move() {
            ToMove::Terminal => return Err(Error::IllegalAction(action)),
            ToMove::Chance => {
                let remaining = self.remaining_cards();
                let card = *remaining.get(action).ok_or(Error::IllegalAction(action))?;
                if self.board_pending {
                    next.board = Some(card);
                    next.board_pending = false;
                    next.pub_seq.push(BOARD_TOKEN_BASE + card as u16);
                    next.start_round(2);
                } else {
                    next.cards.push(card);
                    if next.cards.len() == self.players {
                        next.start_round(1);
                    }
                }
            }
            ToMove::Player(p) => {
                if !self.legal_actions().contains(&action) {
                    return Err(Error::IllegalAction(action));
                }
                next.queue.pop_front();
                let level = self.level();
                let facing = self.round_contrib[p] < level;
                enum Move {
                    Fold,
                    Match,
                    Raise,
                }
                let mv = match (facing, action) {
                    (true, 0) => Move::Fold,
                    (true, 1) => Move::Match,
                    (true, 2) => Move::Raise,
                    (false, 0) => Move::Match,
                    (false, 1) => Move::Raise,
                    _ => unreachable!(),
                };
                match mv {
                    Move::Fold => next.folded[p] = true,
                    Move::Match => {
                        next.contrib[p] += level - self.round_contrib[p];
                        next.round_contrib[p] = level;
                    }
                    Move::Raise => {
                        let target = level + self.raise_size();
                        next.contrib[p] += target - self.round_contrib[p];
                        next.round_contrib[p] = target;
                        next.raises += 1;
                        next.queue = (1..self.players)
                            .map(|i| (p + i) % self.players)
                            .filter(|&q| !next.folded[q])
                            .collect();
                    }
                }
                next.pub_seq.push(action as u16);
                if next.active_count() == 1 {
                    next.finished = true;
                } else if next.queue.is_empty() {
                    if self.round == 1 {
                        next.board_pending = true;
                    } else {
                        next.finished = true;
                    }
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
        let pot: u32 = self.contrib.iter().sum();
        let active: Vec<usize> = (0..self.players).filter(|&p| !self.folded[p]).collect();
        let winners: Vec<usize> = if active.len() == 1 {
            active
        } else {
            let board_rank = self.board.expect("showdown has a board card") / 2;
            let paired: Vec<usize> = active
                .iter()
                .copied()
                .filter(|&p| self.cards[p] / 2 == board_rank)
                .collect();
            if !paired.is_empty() {
                paired
            } else {
                let best = active.iter().map(|&p| self.cards[p] / 2).max().unwrap();
                active
                    .into_iter()
                    .filter(|&p| self.cards[p] / 2 == best)
                    .collect()
            }
        };
        let share = pot as f64 / winners.len() as f64;
        Ok((0..self.players)
            .map(|p| {
                let win = if winners.contains(&p) { share } else { 0.0 };
                win - self.contrib[p] as f64
            })
            .collect())
    }

    pub fn info_key(&self) -> InfoKey {
        let p = match self.to_move() {
            ToMove::Player(p) => p,
            other => panic!("info_key requested at a {other:?} node"),
        };
        let seq: Vec<String> = self
            .pub_seq
            .iter()
            .map(|&t| {
                if t >= BOARD_TOKEN_BASE {
                    format!("b{}", t - BOARD_TOKEN_BASE)
                } else {
                    t.to_string()
                }
            })
            .collect();
        InfoKey {
            player: p,
            key: format!("leduc|p{p}|{}|{}", self.cards[p], seq.join("/")),
        }
    }

    pub fn history(&self) -> &[ActionId] {
        &self.history
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn play(players: usize, actions: &[ActionId]) -> LeducState {
        let mut state = LeducState::new(players);
        for &a in actions {
            state = state.child(a).unwrap();
        }
        state
    }

    #[test]
    fn raise_cap_enforced() {
        // Deal cards 0 and 1; p0 raises, p1 reraises, p0 now cannot raise again.
        let state = play(2, &[0, 0, 1, 2]);
        assert_eq!(state.legal_actions(), vec![0, 1]);
    }

    #[test]
    fn pair_with_board_beats_high_card() {
        // p0 holds card 0 (rank 0), p1 holds card 4 (rank 2); both check both
        // rounds; board is card 1 (rank 0), pairing p0.
        let state = play(2, &[0, 3, 0, 0, 0, 0, 0]);
        assert_eq!(state.board, Some(1));
        assert_eq!(state.returns().unwrap(), vec![1.0, -1.0]);
    }

    #[test]
    fn equal_ranks_split_pot() {
        // p0 holds card 4, p1 holds card 5: both rank 2. Board is rank 0.
        let state = play(2, &[4, 4, 0, 0, 0, 0, 0]);
        assert_eq!(state.board, Some(0));
        assert_eq!(state.returns().unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn fold_ends_hand_without_board() {
        let state = play(2, &[0, 1, 1, 0]);
        assert!(state.board.is_none());
        // p0 raised to 2 after the ante, p1 folded.
        assert_eq!(state.returns().unwrap(), vec![1.0, -1.0]);
    }

    #[test]
    fn bets_accumulate_across_rounds() {
        // Round 1: p0 raise, p1 call. Round 2: p0 raise, p1 call. Showdown.
        let state = play(2, &[2, 4, 1, 1, 0, 1, 1]);
        // Contributions: 1 ante + 2 + 4 each; p1 holds the higher rank.
        assert_eq!(state.returns().unwrap(), vec![-7.0, 7.0]);
    }

    #[test]
    fn public_sequence_key() {
        let state = play(2, &[0, 2, 1, 1, 0]);
        let key = state.info_key();
        assert_eq!(key.key, "leduc|p0|0|1/1/b1");
    }

    #[test]
    fn zero_sum_everywhere() {
        fn walk(state: &LeducState, count: &mut usize) {
            if state.to_move() == ToMove::Terminal {
                let total: f64 = state.returns().unwrap().iter().sum();
                assert!(total.abs() < 1e-12);
                *count += 1;
                return;
            }
            for a in state.legal_actions() {
                walk(&state.child(a).unwrap(), count);
            }
        }
        let mut terminals = 0;
        walk(&LeducState::new(2), &mut terminals);
        assert!(terminals > 0);
    }
}
