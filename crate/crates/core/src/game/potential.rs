//! Beck's potential for `(p:q)` games and the greedy Breaker built on it.

use rand_chacha::ChaCha8Rng;

use super::{GameState, Player, Strategy, WinningFamily};
use crate::error::{Error, Result};

fn weight(unclaimed: usize, p: usize, q: usize) -> f64 {
    (1.0 + q as f64).powf(-(unclaimed as f64) / p as f64)
}

/// `Σ_B (1+q)^(−|B|/p)` and whether it is below `1/(1+q)`.
pub fn beck_criterion(f: &WinningFamily, p: usize, q: usize) -> Result<(f64, bool)> {
    if p == 0 || q == 0 {
        return Err(Error::Domain(format!("p and q must be at least 1, got ({p}:{q})")));
    }
    let value: f64 = f.sets().iter().map(|s| weight(s.len(), p, q)).sum();
    Ok((value, value < 1.0 / (1.0 + q as f64)))
}

/// Running potential: the sum over sets Breaker has not touched of
/// `(1+q)^(−u/p)`, `u` the number of elements Maker still lacks.
pub fn potential(f: &WinningFamily, state: &GameState, p: usize, q: usize) -> f64 {
    f.sets()
        .iter()
        .filter_map(|s| {
            let mut u = 0;
            for &x in s {
                match state.owner(x) {
                    Some(Player::Breaker) => return None,
                    Some(Player::Maker) => {}
                    None => u += 1,
                }
            }
            Some(weight(u, p, q))
        })
        .sum()
}

/// Breaker's claims for this turn, chosen one at a time: each is the
/// unclaimed element whose loss to Maker's sets removes the most potential.
pub fn breaker_potential_move(f: &WinningFamily, state: &GameState) -> Result<Vec<usize>> {
    if state.to_move() != Player::Breaker || state.is_over() {
        return Err(Error::IllegalMove("not breaker's turn".into()));
    }
    let (p, q) = (state.bias().maker, state.bias().breaker);
    let mut sim = state.clone();
    let mut out = Vec::with_capacity(state.remaining());
    for _ in 0..state.remaining() {
        let mut drop = vec![0.0f64; sim.size()];
        for s in f.sets() {
            let mut u = 0;
            let mut dead = false;
            for &x in s {
                match sim.owner(x) {
                    Some(Player::Breaker) => {
                        dead = true;
                        break;
                    }
                    Some(Player::Maker) => {}
                    None => u += 1,
                }
            }
            if dead {
                continue;
            }
            let w = weight(u, p, q);
            for &x in s {
                if sim.owner(x).is_none() {
                    drop[x] += w;
                }
            }
        }
        let mut best: Option<usize> = None;
        for x in 0..sim.size() {
            if sim.is_unclaimed(x) && best.is_none_or(|b| drop[x] > drop[b]) {
                best = Some(x);
            }
        }
        let x = best.expect("a turn never outlasts the board");
        sim.claim_as(Player::Breaker, x)?;
        out.push(x);
    }
    Ok(out)
}

/// Breaker playing [`breaker_potential_move`] against a fixed family.
#[derive(Clone, Debug)]
pub struct PotentialBreaker {
    family: WinningFamily,
}

impl PotentialBreaker {
    pub fn new(family: WinningFamily) -> Self {
        PotentialBreaker { family }
    }
}

impl Strategy for PotentialBreaker {
    fn name(&self) -> String {
        "potential".into()
    }

    fn choose(&mut self, state: &GameState, _count: usize, _rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
        breaker_potential_move(&self.family, state)
    }
}
