//! Memoized minimax over claim states for boards of at most 16 elements.

use std::collections::HashMap;

use rand_chacha::ChaCha8Rng;

use super::{Bias, GameState, Player, Strategy, WinningFamily};
use crate::error::{Error, Result};

pub const MAX_BOARD: usize = 16;
const MAX_STATES: usize = 20_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Node {
    maker: u32,
    breaker: u32,
    to_move: Player,
    remaining: u8,
    /// Within a turn claims are made in increasing id order.
    min_next: u8,
}

/// Game-value oracle for one family and bias.
#[derive(Debug)]
pub struct Solver {
    size: usize,
    sets: Vec<u32>,
    bias: Bias,
    memo: HashMap<Node, Player>,
}

impl Solver {
    pub fn new(f: &WinningFamily, bias: Bias) -> Result<Solver> {
        let size = f.board_size();
        if size > MAX_BOARD {
            return Err(Error::Budget(format!(
                "exhaustive play supports at most {MAX_BOARD} elements, got {size}"
            )));
        }
        let sets = f
            .sets()
            .iter()
            .map(|s| s.iter().fold(0u32, |m, &x| m | 1 << x))
            .collect();
        Ok(Solver {
            size,
            sets,
            bias,
            memo: HashMap::new(),
        })
    }

    fn full(&self) -> u32 {
        if self.size == 32 {
            u32::MAX
        } else {
            (1u32 << self.size) - 1
        }
    }

    fn node_of(&self, state: &GameState) -> Result<Node> {
        if state.size() != self.size || state.bias() != self.bias {
            return Err(Error::Domain("state does not match the solver's board or bias".into()));
        }
        let mask = |p| state.elements_of(p).into_iter().fold(0u32, |m, x| m | 1 << x);
        Ok(Node {
            maker: mask(Player::Maker),
            breaker: mask(Player::Breaker),
            to_move: state.to_move(),
            remaining: state.remaining() as u8,
            min_next: 0,
        })
    }

    fn child(&self, n: Node, x: usize) -> Node {
        let bit = 1u32 << x;
        let (maker, breaker) = match n.to_move {
            Player::Maker => (n.maker | bit, n.breaker),
            Player::Breaker => (n.maker, n.breaker | bit),
        };
        let unclaimed = (self.full() & !(maker | breaker)).count_ones() as usize;
        if n.remaining == 1 || unclaimed == 0 {
            let to_move = n.to_move.other();
            Node {
                maker,
                breaker,
                to_move,
                remaining: self.bias.of(to_move).min(unclaimed) as u8,
                min_next: 0,
            }
        } else {
            Node {
                maker,
                breaker,
                to_move: n.to_move,
                remaining: n.remaining - 1,
                min_next: x as u8 + 1,
            }
        }
    }

    fn solve(&mut self, n: Node) -> Result<Player> {
        if self.sets.iter().any(|&s| s & !n.maker == 0) {
            return Ok(Player::Maker);
        }
        let free = self.full() & !(n.maker | n.breaker);
        if free == 0 || self.sets.iter().all(|&s| s & n.breaker != 0) {
            return Ok(Player::Breaker);
        }
        if let Some(&v) = self.memo.get(&n) {
            return Ok(v);
        }
        if self.memo.len() >= MAX_STATES {
            return Err(Error::Budget("exhaustive search exceeded its state cap".into()));
        }
        let me = n.to_move;
        let mut value = me.other();
        for x in n.min_next as usize..self.size {
            if free & (1 << x) == 0 {
                continue;
            }
            if self.solve(self.child(n, x))? == me {
                value = me;
                break;
            }
        }
        self.memo.insert(n, value);
        Ok(value)
    }

    /// Winner under optimal play from `state`.
    pub fn value(&mut self, state: &GameState) -> Result<Player> {
        let n = self.node_of(state)?;
        self.solve(n)
    }

    /// A claim that keeps the position won for the player to move, or the
    /// lowest unclaimed element if none does.
    pub fn best_claim(&mut self, state: &GameState) -> Result<usize> {
        let n = self.node_of(state)?;
        let me = n.to_move;
        let free: Vec<usize> = state.unclaimed();
        for &x in &free {
            if self.solve(self.child(n, x))? == me {
                return Ok(x);
            }
        }
        free.first()
            .copied()
            .ok_or_else(|| Error::IllegalMove("the board is exhausted".into()))
    }
}

/// Winner of the game on `f` under optimal play by both sides.
pub fn exhaustive_value(f: &WinningFamily, bias: Bias, first: Player) -> Result<Player> {
    let mut s = Solver::new(f, bias)?;
    s.value(&GameState::new(f.board_size(), bias, first))
}

/// Whether some Maker strategy beats the deterministic Breaker `breaker`.
pub fn maker_beats<B>(f: &WinningFamily, bias: Bias, first: Player, mut breaker: B) -> Result<bool>
where
    B: FnMut(&GameState) -> Result<Vec<usize>>,
{
    if f.board_size() > MAX_BOARD {
        return Err(Error::Budget(format!(
            "exhaustive play supports at most {MAX_BOARD} elements"
        )));
    }
    let mut memo = HashMap::new();
    search(f, &GameState::new(f.board_size(), bias, first), &mut breaker, &mut memo)
}

type Key = (Vec<Option<Player>>, Player, usize);

fn search<B>(f: &WinningFamily, s: &GameState, breaker: &mut B, memo: &mut HashMap<Key, bool>) -> Result<bool>
where
    B: FnMut(&GameState) -> Result<Vec<usize>>,
{
    if f.maker_owns_set(s) {
        return Ok(true);
    }
    if s.is_over() {
        return Ok(false);
    }
    let key: Key = ((0..s.size()).map(|x| s.owner(x)).collect(), s.to_move(), s.remaining());
    if let Some(&v) = memo.get(&key) {
        return Ok(v);
    }
    let v = match s.to_move() {
        Player::Breaker => {
            let mut t = s.clone();
            for x in breaker(s)? {
                t.claim_as(Player::Breaker, x)?;
            }
            search(f, &t, breaker, memo)?
        }
        Player::Maker => {
            let mut any = false;
            for x in s.unclaimed() {
                let mut t = s.clone();
                t.claim(x)?;
                if search(f, &t, breaker, memo)? {
                    any = true;
                    break;
                }
            }
            any
        }
    };
    memo.insert(key, v);
    Ok(v)
}

/// Optimal play from the exhaustive solver.
#[derive(Debug)]
pub struct MinimaxStrategy {
    solver: Solver,
}

impl MinimaxStrategy {
    pub fn new(f: &WinningFamily, bias: Bias) -> Result<Self> {
        Ok(MinimaxStrategy {
            solver: Solver::new(f, bias)?,
        })
    }
}

impl Strategy for MinimaxStrategy {
    fn name(&self) -> String {
        "minimax".into()
    }

    fn choose(&mut self, state: &GameState, count: usize, _rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
        let mut sim = state.clone();
        let me = state.to_move();
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let x = self.solver.best_claim(&sim)?;
            sim.claim_as(me, x)?;
            out.push(x);
        }
        Ok(out)
    }
}
