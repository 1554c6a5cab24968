//! Maker strategy wrappers: playing on a partitioned board, and pretending
//! Breaker has a larger bias.

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{check_batch, Bias, GameState, Player, Strategy};
use crate::error::{Error, Result};

/// Round-robin over sub-boards. Sub-board `i` is a virtual game with bias
/// `(1 : a·b)` in which Breaker moves first; before each of its turns the
/// sub-strategy receives every Breaker claim made on its sub-board since it
/// last moved. A sub-strategy may pass by returning no claim, which hands
/// the slot to the next sub-board.
pub struct SplitBoard {
    parts: Vec<Vec<usize>>,
    home: Vec<(usize, usize)>,
    subs: Vec<Box<dyn Strategy>>,
    virt: Vec<GameState>,
    pending: Vec<Vec<usize>>,
    seen: usize,
    next: usize,
    deliveries: Vec<(usize, usize)>,
}

/// Builds a [`SplitBoard`] over `partition`, which must cover
/// `0..board_size` disjointly, for a real game of bias `bias`.
pub fn split_board(
    board_size: usize,
    partition: Vec<Vec<usize>>,
    subs: Vec<Box<dyn Strategy>>,
    bias: Bias,
) -> Result<SplitBoard> {
    if partition.is_empty() || partition.len() != subs.len() {
        return Err(Error::Domain(format!(
            "need one sub-strategy per part, got {} parts and {} strategies",
            partition.len(),
            subs.len()
        )));
    }
    let mut home = vec![(usize::MAX, 0); board_size];
    for (i, part) in partition.iter().enumerate() {
        for (j, &x) in part.iter().enumerate() {
            if x >= board_size || home[x].0 != usize::MAX {
                return Err(Error::Domain(format!("element {x} is off the board or in two parts")));
            }
            home[x] = (i, j);
        }
    }
    if let Some(x) = home.iter().position(|h| h.0 == usize::MAX) {
        return Err(Error::Domain(format!("the partition misses element {x}")));
    }
    let a = partition.len();
    let vbias = Bias::new(1, a * bias.breaker)?;
    let virt = partition
        .iter()
        .map(|p| GameState::new(p.len(), vbias, Player::Breaker))
        .collect();
    Ok(SplitBoard {
        pending: vec![Vec::new(); a],
        parts: partition,
        home,
        subs,
        virt,
        seen: 0,
        next: 0,
        deliveries: Vec::new(),
    })
}

impl SplitBoard {
    /// `(part, number of Breaker claims delivered)` for every sub-turn.
    pub fn deliveries(&self) -> &[(usize, usize)] {
        &self.deliveries
    }

    pub fn virtual_state(&self, part: usize) -> &GameState {
        &self.virt[part]
    }

    fn ingest(&mut self, state: &GameState) {
        for mv in &state.history()[self.seen..] {
            if mv.player == Player::Breaker {
                let (i, j) = self.home[mv.element];
                self.pending[i].push(j);
            }
        }
        self.seen = state.history().len();
    }

    fn deliver(&mut self, i: usize) -> Result<()> {
        let v = &mut self.virt[i];
        let batch = std::mem::take(&mut self.pending[i]);
        if v.to_move() != Player::Breaker {
            return Err(Error::Domain("virtual game out of step".into()));
        }
        if batch.len() > v.remaining() {
            return Err(Error::Domain(format!(
                "sub-board {i} received {} Breaker claims, more than its virtual bias",
                batch.len()
            )));
        }
        for &x in &batch {
            v.claim_as(Player::Breaker, x)?;
        }
        if v.to_move() == Player::Breaker && !v.is_over() {
            v.finish_turn();
        }
        self.deliveries.push((i, batch.len()));
        Ok(())
    }
}

impl Strategy for SplitBoard {
    fn name(&self) -> String {
        let names: Vec<String> = self.subs.iter().map(|s| s.name()).collect();
        format!("split[{}]", names.join(","))
    }

    fn choose(&mut self, state: &GameState, count: usize, rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
        self.ingest(state);
        let a = self.parts.len();
        let mut out: Vec<usize> = Vec::with_capacity(count);
        for _ in 0..count {
            let live: Vec<usize> = (0..a)
                .map(|k| (self.next + k) % a)
                .filter(|&i| {
                    self.parts[i]
                        .iter()
                        .any(|&x| state.is_unclaimed(x) && !out.contains(&x))
                })
                .collect();
            let Some(&first_live) = live.first() else { break };
            let mut claimed = None;
            for &i in &live {
                self.deliver(i)?;
                self.subs[i].observe_global(state, &self.parts[i]);
                let local = self.subs[i].choose(&self.virt[i], 1, rng)?;
                if local.is_empty() {
                    // the sub-strategy passes and yields its slot
                    self.virt[i].finish_turn();
                    continue;
                }
                check_batch(&self.virt[i], &local, 1)
                    .map_err(|why| Error::IllegalMove(format!("sub-strategy {i}: {why}")))?;
                claimed = Some((i, local[0]));
                break;
            }
            let (i, local) = match claimed {
                Some(c) => c,
                None => {
                    // everyone passed: take the lowest free element of the first live part
                    let v = &mut self.virt[first_live];
                    if v.to_move() == Player::Breaker {
                        v.finish_turn();
                    }
                    let local = (0..self.parts[first_live].len())
                        .find(|&l| v.is_unclaimed(l))
                        .expect("live part has a free element");
                    (first_live, local)
                }
            };
            self.virt[i].claim_as(Player::Maker, local)?;
            out.push(self.parts[i][local]);
            self.next = (i + 1) % a;
        }
        Ok(out)
    }

    fn overlay(&self) -> Option<Vec<usize>> {
        self.subs.iter().find_map(|s| s.overlay())
    }
}

/// Plays a strategy written for Breaker bias `b0` in a game where Breaker
/// claims only `b ≤ b0`: after each real Breaker turn, enough fake Breaker
/// claims are added to the virtual game to make `b0`. A fake claim later
/// taken by the real Breaker is replaced by a fresh fake one.
pub struct FakeBias {
    inner: Box<dyn Strategy>,
    b0: usize,
    virt: Option<GameState>,
    fake: Vec<bool>,
    seen: usize,
    rng: ChaCha8Rng,
    rounds: Vec<usize>,
    replacements: usize,
}

pub fn fake_bias(inner: Box<dyn Strategy>, b0: usize, b: usize, seed: u64) -> Result<FakeBias> {
    if b == 0 || b > b0 {
        return Err(Error::Domain(format!("need 1 <= b <= b0, got b = {b}, b0 = {b0}")));
    }
    Ok(FakeBias {
        inner,
        b0,
        virt: None,
        fake: Vec::new(),
        seen: 0,
        rng: ChaCha8Rng::seed_from_u64(seed),
        rounds: Vec::new(),
        replacements: 0,
    })
}

impl FakeBias {
    /// New Breaker-or-fake claims the inner strategy saw per Breaker turn.
    pub fn rounds(&self) -> &[usize] {
        &self.rounds
    }

    /// Fake claims that the real Breaker later took.
    pub fn replacements(&self) -> usize {
        self.replacements
    }

    pub fn fake_elements(&self) -> Vec<usize> {
        (0..self.fake.len()).filter(|&x| self.fake[x]).collect()
    }

    pub fn virtual_state(&self) -> Option<&GameState> {
        self.virt.as_ref()
    }

    fn ingest(&mut self, state: &GameState) -> Result<()> {
        let v = self.virt.get_or_insert_with(|| {
            GameState::new(
                state.size(),
                Bias {
                    maker: state.bias().maker,
                    breaker: self.b0,
                },
                state.first(),
            )
        });
        if self.fake.is_empty() {
            self.fake = vec![false; state.size()];
        }
        let moves = &state.history()[self.seen..];
        let mut i = 0;
        while i < moves.len() {
            let turn = moves[i].turn;
            let player = moves[i].player;
            let mut j = i;
            while j < moves.len() && moves[j].turn == turn {
                j += 1;
            }
            let group: Vec<usize> = moves[i..j].iter().map(|m| m.element).collect();
            match player {
                Player::Maker => {
                    for x in group {
                        // a fake element Maker was forced to take stays Breaker's in the virtual game
                        if v.owner(x).is_none() {
                            v.claim_as(Player::Maker, x)?;
                        }
                    }
                    if v.to_move() == Player::Maker && !v.is_over() {
                        v.finish_turn();
                    }
                }
                Player::Breaker => {
                    let mut fresh = 0;
                    for x in group {
                        if self.fake[x] {
                            self.fake[x] = false;
                            self.replacements += 1;
                        } else {
                            v.claim_as(Player::Breaker, x)?;
                            fresh += 1;
                        }
                    }
                    let mut added = 0;
                    while fresh + added < self.b0 && v.to_move() == Player::Breaker && !v.is_over() {
                        let free = v.unclaimed();
                        let &y = free.choose(&mut self.rng).expect("board not over");
                        v.claim_as(Player::Breaker, y)?;
                        self.fake[y] = true;
                        added += 1;
                    }
                    if v.to_move() == Player::Breaker && !v.is_over() {
                        v.finish_turn();
                    }
                    self.rounds.push(fresh + added);
                }
            }
            i = j;
        }
        self.seen = state.history().len();
        Ok(())
    }
}

impl Strategy for FakeBias {
    fn name(&self) -> String {
        format!("fake-bias({})", self.inner.name())
    }

    fn choose(&mut self, state: &GameState, count: usize, rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
        self.ingest(state)?;
        let v = self.virt.as_ref().expect("ingest creates the virtual game");
        let mut out = Vec::with_capacity(count);
        if v.to_move() == Player::Maker && !v.is_over() {
            let k = count.min(v.remaining());
            out = self.inner.choose(v, k, rng)?;
            check_batch(v, &out, k).map_err(|why| Error::IllegalMove(format!("inner strategy: {why}")))?;
        }
        // the virtual board ran out before the real one: take fake elements
        for x in state.unclaimed() {
            if out.len() >= count {
                break;
            }
            if !out.contains(&x) {
                self.fake[x] = false;
                out.push(x);
            }
        }
        Ok(out)
    }

    fn observe_global(&mut self, global: &GameState, local_to_global: &[usize]) {
        self.inner.observe_global(global, local_to_global);
    }

    fn overlay(&self) -> Option<Vec<usize>> {
        self.inner.overlay()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{play, Board, PlayConfig, RandomStrategy, WinningFamily};

    /// Breaker claiming a fixed script, skipping claimed elements.
    struct Scripted(Vec<usize>);

    impl Strategy for Scripted {
        fn name(&self) -> String {
            "scripted".into()
        }

        fn choose(&mut self, s: &GameState, count: usize, _rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
            let mut out = Vec::new();
            for x in self.0.iter().copied().chain(0..s.size()) {
                if out.len() == count {
                    break;
                }
                if s.is_unclaimed(x) && !out.contains(&x) {
                    out.push(x);
                }
            }
            Ok(out)
        }
    }

    fn run(maker: &mut dyn Strategy, breaker: &mut dyn Strategy, size: usize, bias: Bias, seed: u64) -> GameState {
        let mut goal = WinningFamily::new(size, vec![]).unwrap();
        let t = play(
            &Board::abstract_board(size),
            &mut goal,
            maker,
            breaker,
            PlayConfig {
                bias,
                first: Player::Maker,
                seed,
                potential_family: None,
            },
        )
        .unwrap();
        assert!(t.forfeit.is_none(), "{:?}", t.forfeit);
        t.state
    }

    #[test]
    fn split_three_ways() {
        let parts = vec![vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 8]];
        let subs: Vec<Box<dyn Strategy>> = (0..3).map(|_| Box::new(RandomStrategy) as Box<dyn Strategy>).collect();
        let bias = Bias::new(1, 1).unwrap();
        let mut sb = split_board(9, parts, subs, bias).unwrap();
        run(&mut sb, &mut Scripted(vec![4, 5, 1, 7]), 9, bias, 3);
        assert!(sb.deliveries().iter().all(|&(_, k)| k <= 3));
        for i in 0..3 {
            sb.virtual_state(i).check_invariants().unwrap();
        }
    }

    #[test]
    fn split_rejects_bad_partitions() {
        let bias = Bias::new(1, 1).unwrap();
        let one = || vec![Box::new(RandomStrategy) as Box<dyn Strategy>];
        assert!(split_board(3, vec![vec![0, 1]], one(), bias).is_err());
        assert!(split_board(3, vec![vec![0, 1, 1, 2]], one(), bias).is_err());
        assert!(split_board(3, vec![vec![0, 1, 2]], vec![], bias).is_err());
    }

    #[test]
    fn single_part_is_identity() {
        let bias = Bias::new(1, 2).unwrap();
        let plain = run(&mut RandomStrategy, &mut Scripted(vec![]), 10, bias, 8);
        let mut sb = split_board(10, vec![(0..10).collect()], vec![Box::new(RandomStrategy)], bias).unwrap();
        let wrapped = run(&mut sb, &mut Scripted(vec![]), 10, bias, 8);
        assert_eq!(plain.history(), wrapped.history());
    }

    #[test]
    fn fake_bias_identity_and_errors() {
        assert!(fake_bias(Box::new(RandomStrategy), 1, 2, 0).is_err());
        let bias = Bias::new(1, 2).unwrap();
        let plain = run(&mut RandomStrategy, &mut Scripted(vec![]), 12, bias, 5);
        let mut fb = fake_bias(Box::new(RandomStrategy), 2, 2, 0).unwrap();
        let wrapped = run(&mut fb, &mut Scripted(vec![]), 12, bias, 5);
        assert_eq!(plain.history(), wrapped.history());
        assert!(fb.fake_elements().is_empty());
    }

    #[test]
    fn fake_claims_are_replaced() {
        let bias = Bias::new(1, 1).unwrap();
        let mut fb = fake_bias(Box::new(RandomStrategy), 2, 1, 9).unwrap();
        // Breaker sweeps ids in order, so it soon lands on a fake element
        let s = run(&mut fb, &mut Scripted((0..20).collect()), 20, bias, 2);
        assert!(fb.replacements() > 0);
        let rounds = fb.rounds();
        // exactly b0 per round until the virtual board runs out
        let full = rounds.iter().take_while(|&&k| k == 2).count();
        assert!(full >= 5, "{rounds:?}");
        assert!(rounds[full..].iter().all(|&k| k < 2), "{rounds:?}");
        assert!(fb.virtual_state().unwrap().is_over());
        for x in fb.fake_elements() {
            assert_ne!(s.owner(x), Some(Player::Maker));
        }
    }
}
