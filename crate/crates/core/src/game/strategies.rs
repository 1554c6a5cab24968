//! Simple reference strategies.

use rand::seq::IndexedRandom;
use rand_chacha::ChaCha8Rng;

use super::{GameState, Player, Strategy};
use crate::error::Result;
use crate::graph::Graph;

/// Uniformly random unclaimed elements.
#[derive(Clone, Debug, Default)]
pub struct RandomStrategy;

impl Strategy for RandomStrategy {
    fn name(&self) -> String {
        "random".into()
    }

    fn choose(&mut self, state: &GameState, count: usize, rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
        let free = state.unclaimed();
        Ok(free.choose_multiple(rng, count).copied().collect())
    }
}

/// Graph-board Breaker that tries to starve a vertex: it claims the edge
/// whose scarcer endpoint has the fewest edges not yet Breaker's, preferring
/// edges where Maker is already strong.
#[derive(Clone, Debug)]
pub struct GreedyBlockBreaker {
    g: Graph,
}

impl GreedyBlockBreaker {
    pub fn new(g: Graph) -> Self {
        GreedyBlockBreaker { g }
    }
}

impl Strategy for GreedyBlockBreaker {
    fn name(&self) -> String {
        "greedy-block".into()
    }

    fn choose(&mut self, state: &GameState, count: usize, _rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
        let n = self.g.n();
        let mut avail = vec![0usize; n];
        let mut maker = vec![0usize; n];
        for (id, &(u, v)) in self.g.edges().iter().enumerate() {
            match state.owner(id) {
                Some(Player::Breaker) => {}
                Some(Player::Maker) => {
                    for x in [u, v] {
                        avail[x] += 1;
                        maker[x] += 1;
                    }
                }
                None => {
                    avail[u] += 1;
                    avail[v] += 1;
                }
            }
        }
        let mut taken = vec![false; self.g.m()];
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let best = self
                .g
                .edges()
                .iter()
                .enumerate()
                .filter(|&(id, _)| state.is_unclaimed(id) && !taken[id])
                .min_by_key(|&(id, &(u, v))| (avail[u].min(avail[v]), std::cmp::Reverse(maker[u] + maker[v]), id));
            let Some((id, &(u, v))) = best else { break };
            taken[id] = true;
            avail[u] -= 1;
            avail[v] -= 1;
            out.push(id);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Bias;
    use crate::generators as gen;
    use rand::SeedableRng;

    #[test]
    fn random_returns_distinct_unclaimed() {
        let mut s = GameState::new(6, Bias::new(1, 3).unwrap(), Player::Maker);
        s.claim(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let b = RandomStrategy.choose(&s, 3, &mut rng).unwrap();
        assert!(crate::game::check_batch(&s, &b, 3).is_ok());
    }

    #[test]
    fn greedy_block_targets_starved_vertex() {
        // star centre 0 plus a triangle 1-2-3: leaves of the star have degree 1
        let g = Graph::from_edges(5, &[(0, 4), (1, 2), (1, 3), (2, 3)]).unwrap();
        let s = GameState::new(g.m(), Bias::new(1, 1).unwrap(), Player::Breaker);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let id = g.edge_id(0, 4).unwrap();
        assert_eq!(GreedyBlockBreaker::new(g).choose(&s, 1, &mut rng).unwrap(), vec![id]);
        let k = gen::complete(4);
        let s = GameState::new(k.m(), Bias::new(1, 2).unwrap(), Player::Breaker);
        let b = GreedyBlockBreaker::new(k).choose(&s, 2, &mut rng).unwrap();
        assert!(crate::game::check_batch(&s, &b, 2).is_ok());
    }
}
