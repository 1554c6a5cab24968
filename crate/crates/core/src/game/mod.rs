//! Biased Maker-Breaker games on abstract hypergraph boards and on the edge
//! sets of graphs.
//!
//! Elements are dense ids `0..size`. On a graph board the element id is the
//! edge id of the host graph.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub mod auxiliary;
pub mod combinators;
pub mod dirac;
pub mod engines;
pub mod exhaustive;
pub mod potential;
pub mod strategies;

pub use combinators::{fake_bias, split_board, FakeBias, SplitBoard};
pub use dirac::{maker_dirac_strategy, DiracMaker, HamiltonGoal};
pub use exhaustive::{exhaustive_value, MinimaxStrategy, Solver};
pub use potential::{beck_criterion, breaker_potential_move, potential, PotentialBreaker};
pub use strategies::{GreedyBlockBreaker, RandomStrategy};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Maker,
    Breaker,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::Maker => Player::Breaker,
            Player::Breaker => Player::Maker,
        }
    }
}

impl std::fmt::Display for Player {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Player::Maker => "maker",
            Player::Breaker => "breaker",
        })
    }
}

/// Claims per turn: `(maker : breaker)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bias {
    pub maker: usize,
    pub breaker: usize,
}

impl Bias {
    pub fn new(maker: usize, breaker: usize) -> Result<Self> {
        if maker == 0 || breaker == 0 {
            return Err(Error::Domain(format!(
                "bias must be positive on both sides, got ({maker}:{breaker})"
            )));
        }
        Ok(Bias { maker, breaker })
    }

    pub fn of(self, p: Player) -> usize {
        match p {
            Player::Maker => self.maker,
            Player::Breaker => self.breaker,
        }
    }
}

/// The universe of claimable elements; for graph boards, the host graph.
#[derive(Clone, Debug)]
pub struct Board {
    size: usize,
    graph: Option<Graph>,
}

impl Board {
    pub fn abstract_board(size: usize) -> Board {
        Board { size, graph: None }
    }

    pub fn graph_board(g: Graph) -> Board {
        Board {
            size: g.m(),
            graph: Some(g),
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn graph(&self) -> Option<&Graph> {
        self.graph.as_ref()
    }
}

/// Winning sets, each stored sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WinningFamily {
    board_size: usize,
    sets: Vec<Vec<usize>>,
}

impl WinningFamily {
    pub fn new(board_size: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        let mut out = Vec::with_capacity(sets.len());
        for mut s in sets {
            s.sort_unstable();
            s.dedup();
            if s.is_empty() {
                return Err(Error::Domain("winning sets must be nonempty".into()));
            }
            if let Some(&x) = s.iter().find(|&&x| x >= board_size) {
                return Err(Error::Domain(format!(
                    "element {x} is outside a board of size {board_size}"
                )));
            }
            out.push(s);
        }
        Ok(WinningFamily { board_size, sets: out })
    }

    pub fn board_size(&self) -> usize {
        self.board_size
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Whether Maker owns every element of some winning set.
    pub fn maker_owns_set(&self, state: &GameState) -> bool {
        self.sets
            .iter()
            .any(|s| s.iter().all(|&x| state.owner(x) == Some(Player::Maker)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Move {
    pub player: Player,
    pub element: usize,
    pub turn: usize,
}

/// Position of a game: ownership of every element, whose turn it is and how
/// many claims remain in the current turn.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameState {
    size: usize,
    bias: Bias,
    first: Player,
    owner: Vec<Option<Player>>,
    to_move: Player,
    remaining: usize,
    turn: usize,
    unclaimed: usize,
    history: Vec<Move>,
}

#[derive(Serialize)]
struct Canonical<'a> {
    size: usize,
    bias: Bias,
    first: Player,
    to_move: Player,
    remaining: usize,
    turn: usize,
    maker: Vec<usize>,
    breaker: Vec<usize>,
    history: &'a [Move],
}

impl GameState {
    pub fn new(size: usize, bias: Bias, first: Player) -> GameState {
        GameState {
            size,
            bias,
            first,
            owner: vec![None; size],
            to_move: first,
            remaining: bias.of(first).min(size),
            turn: 0,
            unclaimed: size,
            history: Vec::new(),
        }
    }

    /// Rebuilds a state from a move log, checking every claim.
    pub fn replay(size: usize, bias: Bias, first: Player, history: &[Move]) -> Result<GameState> {
        let mut s = GameState::new(size, bias, first);
        for mv in history {
            // turns that were ended early leave gaps in the log
            while s.turn < mv.turn {
                s.finish_turn();
            }
            if mv.turn != s.turn {
                return Err(Error::IllegalMove(format!(
                    "move log is out of order at turn {}",
                    mv.turn
                )));
            }
            s.claim_as(mv.player, mv.element)?;
        }
        Ok(s)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn bias(&self) -> Bias {
        self.bias
    }

    pub fn first(&self) -> Player {
        self.first
    }

    pub fn to_move(&self) -> Player {
        self.to_move
    }

    /// Claims left in the current turn.
    pub fn remaining(&self) -> usize {
        self.remaining
    }

    pub fn turn(&self) -> usize {
        self.turn
    }

    pub fn history(&self) -> &[Move] {
        &self.history
    }

    pub fn owner(&self, x: usize) -> Option<Player> {
        self.owner.get(x).copied().flatten()
    }

    pub fn is_unclaimed(&self, x: usize) -> bool {
        x < self.size && self.owner[x].is_none()
    }

    pub fn unclaimed_count(&self) -> usize {
        self.unclaimed
    }

    pub fn is_over(&self) -> bool {
        self.unclaimed == 0
    }

    pub fn elements_of(&self, p: Player) -> Vec<usize> {
        (0..self.size).filter(|&x| self.owner[x] == Some(p)).collect()
    }

    pub fn unclaimed(&self) -> Vec<usize> {
        (0..self.size).filter(|&x| self.owner[x].is_none()).collect()
    }

    /// Claims `x` for the player to move.
    pub fn claim(&mut self, x: usize) -> Result<()> {
        self.claim_as(self.to_move, x)
    }

    pub fn claim_as(&mut self, p: Player, x: usize) -> Result<()> {
        if self.is_over() {
            return Err(Error::IllegalMove("the board is exhausted".into()));
        }
        if p != self.to_move {
            return Err(Error::IllegalMove(format!("not {p}'s turn")));
        }
        if x >= self.size {
            return Err(Error::IllegalMove(format!("element {x} is not on the board")));
        }
        if self.owner[x].is_some() {
            return Err(Error::IllegalMove(format!("element {x} is already claimed")));
        }
        self.owner[x] = Some(p);
        self.unclaimed -= 1;
        self.remaining -= 1;
        self.history.push(Move {
            player: p,
            element: x,
            turn: self.turn,
        });
        if self.remaining == 0 || self.unclaimed == 0 {
            self.finish_turn();
        }
        Ok(())
    }

    /// Ends the current turn even if claims remain. Used by strategy
    /// wrappers that replay virtual games with short turns.
    pub fn finish_turn(&mut self) {
        self.to_move = self.to_move.other();
        self.turn += 1;
        self.remaining = self.bias.of(self.to_move).min(self.unclaimed);
    }

    /// Checks disjointness, per-turn counts and that the log replays to
    /// the current ownership.
    pub fn check_invariants(&self) -> Result<()> {
        let mut owner = vec![None; self.size];
        let mut per_turn: Vec<(Player, usize)> = Vec::new();
        for mv in &self.history {
            if mv.element >= self.size || owner[mv.element].is_some() {
                return Err(Error::IllegalMove(format!(
                    "element {} claimed twice or off the board",
                    mv.element
                )));
            }
            owner[mv.element] = Some(mv.player);
            if per_turn.len() <= mv.turn {
                per_turn.resize(mv.turn + 1, (mv.player, 0));
            }
            let slot = &mut per_turn[mv.turn];
            if slot.0 != mv.player {
                return Err(Error::IllegalMove(format!("turn {} mixes players", mv.turn)));
            }
            slot.1 += 1;
            if slot.1 > self.bias.of(mv.player) {
                return Err(Error::IllegalMove(format!(
                    "turn {} exceeds the {} bias",
                    mv.turn, mv.player
                )));
            }
        }
        if owner != self.owner {
            return Err(Error::IllegalMove("history does not replay to the claimed sets".into()));
        }
        Ok(())
    }

    /// SHA-256 of a canonical JSON rendering, hex encoded.
    pub fn state_hash(&self) -> String {
        let c = Canonical {
            size: self.size,
            bias: self.bias,
            first: self.first,
            to_move: self.to_move,
            remaining: self.remaining,
            turn: self.turn,
            maker: self.elements_of(Player::Maker),
            breaker: self.elements_of(Player::Breaker),
            history: &self.history,
        };
        let bytes = serde_json::to_vec(&c).expect("canonical state serializes");
        hex::encode(Sha256::digest(bytes))
    }
}

/// Decides whether Maker has already won.
pub trait Goal {
    fn maker_wins(&mut self, state: &GameState) -> bool;

    /// Evidence for the last positive answer, if any.
    fn certificate(&self) -> Option<Vec<usize>> {
        None
    }
}

impl Goal for WinningFamily {
    fn maker_wins(&mut self, state: &GameState) -> bool {
        self.maker_owns_set(state)
    }

    fn certificate(&self) -> Option<Vec<usize>> {
        None
    }
}

/// A player's policy. `choose` receives the position and the number of
/// claims due this turn and must return that many distinct unclaimed
/// elements.
pub trait Strategy: Send {
    fn name(&self) -> String;

    fn choose(&mut self, state: &GameState, count: usize, rng: &mut ChaCha8Rng) -> Result<Vec<usize>>;

    /// Called by [`SplitBoard`] before `choose` with the real position and
    /// the map from local to real element ids.
    fn observe_global(&mut self, _global: &GameState, _local_to_global: &[usize]) {}

    /// Vertex sequence worth highlighting, for example Maker's longest path.
    fn overlay(&self) -> Option<Vec<usize>> {
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Forfeit {
    pub player: Player,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Transcript {
    pub state: GameState,
    pub winner: Player,
    pub forfeit: Option<Forfeit>,
    /// Potential after every claim, when a family was supplied.
    pub potentials: Vec<f64>,
    pub certificate: Option<Vec<usize>>,
}

impl Transcript {
    pub fn moves(&self) -> &[Move] {
        self.state.history()
    }
}

/// Validates a batch against the position; `Err` carries the reason.
pub fn check_batch(state: &GameState, batch: &[usize], count: usize) -> std::result::Result<(), String> {
    if batch.len() != count {
        return Err(format!("expected {count} claims, got {}", batch.len()));
    }
    let mut seen = std::collections::HashSet::new();
    for &x in batch {
        if x >= state.size() {
            return Err(format!("element {x} is not on the board"));
        }
        if !state.is_unclaimed(x) {
            return Err("claimed".into());
        }
        if !seen.insert(x) {
            return Err(format!("element {x} repeated"));
        }
    }
    Ok(())
}

pub struct PlayConfig<'a> {
    pub bias: Bias,
    pub first: Player,
    pub seed: u64,
    /// Family used to report the running potential.
    pub potential_family: Option<&'a WinningFamily>,
}

/// Plays to board exhaustion or an early Maker win. An illegal batch ends
/// the game with a forfeit against the player who produced it.
pub fn play(
    board: &Board,
    goal: &mut dyn Goal,
    maker: &mut dyn Strategy,
    breaker: &mut dyn Strategy,
    cfg: PlayConfig<'_>,
) -> Result<Transcript> {
    let mut state = GameState::new(board.size(), cfg.bias, cfg.first);
    let mut maker_rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    maker_rng.set_stream(0);
    let mut breaker_rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    breaker_rng.set_stream(1);
    let mut potentials = Vec::new();
    let mut won = goal.maker_wins(&state);
    while !won && !state.is_over() {
        let who = state.to_move();
        let count = state.remaining();
        let chosen = match who {
            Player::Maker => maker.choose(&state, count, &mut maker_rng),
            Player::Breaker => breaker.choose(&state, count, &mut breaker_rng),
        };
        let verdict = chosen
            .map_err(|e| e.to_string())
            .and_then(|b| check_batch(&state, &b, count).map(|_| b));
        let batch = match verdict {
            Ok(b) => b,
            Err(reason) => {
                return Ok(Transcript {
                    state,
                    winner: who.other(),
                    forfeit: Some(Forfeit { player: who, reason }),
                    potentials,
                    certificate: None,
                });
            }
        };
        for x in batch {
            state.claim_as(who, x)?;
            if let Some(f) = cfg.potential_family {
                potentials.push(potential(f, &state, cfg.bias.maker, cfg.bias.breaker));
            }
            if who == Player::Maker && goal.maker_wins(&state) {
                won = true;
                break;
            }
        }
        state.check_invariants()?;
    }
    Ok(Transcript {
        winner: if won { Player::Maker } else { Player::Breaker },
        certificate: if won { goal.certificate() } else { None },
        state,
        forfeit: None,
        potentials,
    })
}
