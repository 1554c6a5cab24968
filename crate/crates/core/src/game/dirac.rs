//! Maker's strategy for the Hamiltonicity game on a Dirac graph, and the
//! implicit Hamiltonicity goal.
//!
//! The host is classified first. In the dense-crossing case Maker plays one
//! staged strategy on the whole board. In the near-disconnected case the
//! board is split into crossing edges, where Maker collects two vertex
//! disjoint edges, and the rest. In the near-bipartite case with a larger
//! side `A`, the split is into edges inside `A`, where Maker collects
//! `2(|A| − |V∖A|)` disjoint edges, and the rest.
//!
//! The staged strategy is a heuristic stand-in for the auxiliary-game
//! argument: stage 1 repairs the expansion deficit of Maker's graph
//! (vertices of Maker degree below 2 first, then connectivity), stage 2
//! keeps a longest path `P` of Maker's graph and claims a host edge between
//! `v ∈ S_P` and `w ∈ T_v`, which closes a cycle on `V(P)`.

use std::sync::{Arc, Mutex};

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{split_board, Bias, GameState, Goal, Player, Strategy};
use crate::classify::{classify, Case, Classification, ClassifierParams, SearchMode};
use crate::error::{Error, Result};
use crate::graph::{is_dirac, min_degree, Graph};
use crate::oracle;
use crate::rotation::{endpoint_closure, extend_or_close, find_hamilton_cycle, Budget, EndpointAtlas, PathState, Step};

/// Classification thresholds used when picking Maker's plan. The game
/// constants proper (`α = 2⁻⁴⁰`) classify every playable host as dense.
pub const DESK_ALPHA: f64 = 0.05;
pub const DESK_GAMMA: f64 = 0.1;

/// Maker's graph has a Hamilton cycle. Checked exactly for `n ≤ 16` and by
/// the rotation search beyond.
#[derive(Clone, Debug)]
pub struct HamiltonGoal {
    g: Graph,
    budget: Budget,
    seed: u64,
    checked_at: usize,
    cert: Option<Vec<usize>>,
}

impl HamiltonGoal {
    pub fn new(g: Graph, budget: Budget, seed: u64) -> Self {
        HamiltonGoal {
            g,
            budget,
            seed,
            checked_at: usize::MAX,
            cert: None,
        }
    }
}

/// Maker's edges as a graph on the host's vertices.
pub fn maker_graph(g: &Graph, state: &GameState) -> Graph {
    g.filter_edges(|id, _| state.owner(id) == Some(Player::Maker))
}

impl Goal for HamiltonGoal {
    fn maker_wins(&mut self, state: &GameState) -> bool {
        let owned = state.history().iter().filter(|m| m.player == Player::Maker).count();
        if owned == self.checked_at {
            return self.cert.is_some();
        }
        self.checked_at = owned;
        let n = self.g.n();
        if owned < n || n < 3 {
            return false;
        }
        let m = maker_graph(&self.g, state);
        if min_degree(&m) < 2 || !m.is_connected() {
            return false;
        }
        let found = if n <= 16 {
            oracle::hamilton_cycle(&m).ok().flatten()
        } else {
            find_hamilton_cycle(&m, self.budget, self.seed)
                .ok()
                .and_then(|r| r.found)
                .map(|c| c.seq)
        };
        self.cert = found;
        self.cert.is_some()
    }

    fn certificate(&self) -> Option<Vec<usize>> {
        self.cert.clone()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Reason {
    /// A vertex short of Maker degree 2 was about to be starved.
    Threat,
    /// Stage 1: raising a low Maker degree or joining components.
    Expand,
    /// Stage 2: `edge = vw` with `v ∈ S_P`, `w ∈ T_v`; `witness` is a path
    /// of Maker's graph on `V(P)` from `v` to `w`.
    Rotate { v: usize, w: usize, witness: Vec<usize> },
    /// Stage 2 found no closing edge and added a pivot at an endpoint in
    /// `S_P` instead.
    Boost,
    /// Nothing above applied.
    Fallback,
    /// Collecting disjoint edges on a split sub-board.
    Disjoint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimRecord {
    pub edge: usize,
    pub reason: Reason,
}

pub type ClaimLog = Arc<Mutex<Vec<ClaimRecord>>>;

/// Staged Maker on a set of host edges. When used inside a split board it
/// reads the real position through [`Strategy::observe_global`].
pub struct DiracMaker {
    g: Graph,
    b: usize,
    switch_after: usize,
    board: Option<Vec<usize>>,
    global: Option<GameState>,
    moves: usize,
    log: ClaimLog,
    overlay: Option<Vec<usize>>,
}

impl DiracMaker {
    pub fn new(g: Graph, b: usize, beta: f64, log: ClaimLog) -> Self {
        let n = g.n().max(2) as f64;
        let switch_after = (beta * n * n.ln()).ceil().max(0.0) as usize;
        DiracMaker {
            g,
            b,
            switch_after,
            board: None,
            global: None,
            moves: 0,
            log,
            overlay: None,
        }
    }

    pub fn switch_after(&self) -> usize {
        self.switch_after
    }
}

struct View<'a> {
    g: &'a Graph,
    owner: Vec<Option<Player>>,
    allowed: Vec<bool>,
}

impl View<'_> {
    fn maker_graph(&self) -> Graph {
        self.g.filter_edges(|id, _| self.owner[id] == Some(Player::Maker))
    }

    fn free(&self, id: usize) -> bool {
        self.owner[id].is_none() && self.allowed[id]
    }
}

fn degrees(v: &View<'_>) -> (Vec<usize>, Vec<usize>) {
    let n = v.g.n();
    let mut mdeg = vec![0; n];
    let mut free = vec![0; n];
    for (id, &(a, b)) in v.g.edges().iter().enumerate() {
        match v.owner[id] {
            Some(Player::Maker) => {
                mdeg[a] += 1;
                mdeg[b] += 1;
            }
            None => {
                free[a] += 1;
                free[b] += 1;
            }
            Some(Player::Breaker) => {}
        }
    }
    (mdeg, free)
}

/// Allowed unclaimed edge at `v`, preferring partners that need degree,
/// then partners in another Maker component, then low Maker degree.
fn edge_at(v: usize, view: &View<'_>, mdeg: &[usize], comp: &[usize]) -> Option<usize> {
    let g = view.g;
    g.neighbors(v)
        .iter()
        .filter_map(|&w| g.edge_id(v, w).filter(|&id| view.free(id)).map(|id| (w, id)))
        .min_by_key(|&(w, id)| (mdeg[w] >= 2, comp[w] == comp[v], mdeg[w], id))
        .map(|(_, id)| id)
}

fn longest_path(m: &Graph, start: usize) -> Option<PathState> {
    let mut ps = PathState::new(m, vec![start], None).ok()?;
    for _ in 0..m.n() * m.n() + 1 {
        match extend_or_close(m, &ps) {
            Step::Extended(p) => ps = p,
            Step::Closed(_) => break,
            Step::Stuck => match endpoint_closure(m, &ps, false) {
                Ok(atlas) => match atlas.extension() {
                    Some(ext) if ext.len() > ps.len() || ext.is_extendable(m) => ps = ext.clone(),
                    _ => break,
                },
                Err(_) => break,
            },
        }
    }
    Some(ps)
}

/// A long path in Maker's graph, grown from the vertex of largest Maker
/// degree. Empty when Maker owns nothing.
pub fn maker_path_overlay(g: &Graph, state: &GameState) -> Vec<usize> {
    let m = maker_graph(g, state);
    let start = (0..m.n())
        .filter(|&v| m.degree(v) > 0)
        .max_by_key(|&v| (m.degree(v), std::cmp::Reverse(v)));
    start
        .and_then(|s| longest_path(&m, s))
        .map(|ps| ps.seq().to_vec())
        .unwrap_or_default()
}

impl DiracMaker {
    fn pick(&mut self, view: &View<'_>) -> Option<ClaimRecord> {
        let g = view.g;
        let n = g.n();
        let (mdeg, free) = degrees(view);
        let m = view.maker_graph();
        let comp = m.components();
        let needy = |v: usize| mdeg[v] < 2;

        // a vertex that Breaker could starve in one turn
        let threat = (0..n)
            .filter(|&v| needy(v))
            .map(|v| (free[v] as isize - (2 - mdeg[v]) as isize, v))
            .filter(|&(slack, _)| slack <= self.b as isize)
            .min();
        if let Some((_, v)) = threat {
            if let Some(id) = edge_at(v, view, &mdeg, &comp) {
                return Some(ClaimRecord {
                    edge: id,
                    reason: Reason::Threat,
                });
            }
        }

        let components = comp.iter().max().map_or(0, |c| c + 1);
        let deficit = (0..n).any(needy) || components > 1;
        if self.moves < self.switch_after && deficit {
            if let Some(id) = self.expand(view, &mdeg, &free, &comp) {
                return Some(ClaimRecord {
                    edge: id,
                    reason: Reason::Expand,
                });
            }
        }

        if let Some(rec) = self.rotate(view, &m, &mdeg) {
            return Some(rec);
        }
        if deficit {
            if let Some(id) = self.expand(view, &mdeg, &free, &comp) {
                return Some(ClaimRecord {
                    edge: id,
                    reason: Reason::Expand,
                });
            }
        }
        (0..g.m())
            .filter(|&id| view.free(id))
            .min_by_key(|&id| {
                let (a, b) = g.edges()[id];
                (mdeg[a] + mdeg[b], id)
            })
            .map(|id| ClaimRecord {
                edge: id,
                reason: Reason::Fallback,
            })
    }

    fn expand(&self, view: &View<'_>, mdeg: &[usize], free: &[usize], comp: &[usize]) -> Option<usize> {
        let g = view.g;
        let mut needy: Vec<usize> = (0..g.n()).filter(|&v| mdeg[v] < 2).collect();
        needy.sort_by_key(|&v| (mdeg[v], free[v], v));
        for v in needy {
            if let Some(id) = edge_at(v, view, mdeg, comp) {
                return Some(id);
            }
        }
        (0..g.m())
            .filter(|&id| view.free(id))
            .filter(|&id| {
                let (a, b) = g.edges()[id];
                comp[a] != comp[b]
            })
            .min_by_key(|&id| {
                let (a, b) = g.edges()[id];
                (mdeg[a] + mdeg[b], id)
            })
    }

    fn rotate(&mut self, view: &View<'_>, m: &Graph, mdeg: &[usize]) -> Option<ClaimRecord> {
        let g = view.g;
        let start = (0..g.n()).max_by_key(|&v| (mdeg[v], std::cmp::Reverse(v)))?;
        let ps = longest_path(m, start)?;
        self.overlay = Some(ps.seq().to_vec());
        if ps.len() < 2 || ps.is_extendable(m) {
            return None;
        }
        let mut atlas = endpoint_closure(m, &ps, false).ok()?;
        let closing = closing_edges(view, m, &mut atlas);
        if let Some(&(id, v, w)) = closing.iter().min() {
            let witness = atlas.t_witness(v, w)?.seq().to_vec();
            return Some(ClaimRecord {
                edge: id,
                reason: Reason::Rotate { v, w, witness },
            });
        }
        // no closing edge: add a pivot at some v in S_P, choosing the edge
        // that leaves the most closing edges behind
        let sp = atlas.s_p();
        let mut cands: Vec<usize> = (0..g.m())
            .filter(|&id| view.free(id))
            .filter(|&id| {
                let (a, b) = g.edges()[id];
                sp.contains(a) || sp.contains(b)
            })
            .collect();
        cands.truncate(BOOST_CANDIDATES);
        let mut best: Option<(usize, usize)> = None;
        for id in cands {
            let (a, b) = g.edges()[id];
            let m2 = m.with_edges(&[(a, b)]);
            let mut after = view.owner.clone();
            after[id] = Some(Player::Maker);
            let view2 = View {
                g,
                owner: after,
                allowed: view.allowed.clone(),
            };
            let Ok(mut at2) = endpoint_closure(&m2, &ps, false) else {
                // the new edge makes the path extendable
                return Some(ClaimRecord {
                    edge: id,
                    reason: Reason::Boost,
                });
            };
            let score = closing_edges(&view2, &m2, &mut at2).len();
            if best.is_none_or(|(s, _)| score > s) {
                best = Some((score, id));
            }
        }
        best.map(|(_, id)| ClaimRecord {
            edge: id,
            reason: Reason::Boost,
        })
    }
}

const BOOST_CANDIDATES: usize = 32;

/// Free host edges `vw` with `v ∈ S_P` and `w ∈ T_v`.
fn closing_edges(view: &View<'_>, m: &Graph, atlas: &mut EndpointAtlas) -> Vec<(usize, usize, usize)> {
    let g = view.g;
    let mut out = Vec::new();
    for v in atlas.discovery_order().to_vec() {
        let Ok(t) = atlas.compute_t(m, v) else { break };
        for w in t.iter() {
            if w == v {
                continue;
            }
            if let Some(id) = g.edge_id(v, w).filter(|&id| view.free(id)) {
                out.push((id, v, w));
            }
        }
    }
    out
}

impl Strategy for DiracMaker {
    fn name(&self) -> String {
        "dirac".into()
    }

    fn choose(&mut self, state: &GameState, count: usize, _rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
        let (real, local_map) = match (&self.global, &self.board) {
            (Some(gs), Some(map)) => (gs.clone(), Some(map.clone())),
            _ => (state.clone(), None),
        };
        let m = self.g.m();
        if real.size() != m {
            return Err(Error::Domain("board size differs from the host's edge count".into()));
        }
        let mut allowed = vec![local_map.is_none(); m];
        if let Some(map) = &local_map {
            for (local, &id) in map.iter().enumerate() {
                allowed[id] = state.is_unclaimed(local);
            }
        }
        let host = self.g.clone();
        let mut view = View {
            g: &host,
            owner: (0..m).map(|id| real.owner(id)).collect(),
            allowed,
        };
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let Some(rec) = self.pick(&view) else { break };
            view.owner[rec.edge] = Some(Player::Maker);
            self.moves += 1;
            let local = match &local_map {
                Some(map) => map
                    .iter()
                    .position(|&id| id == rec.edge)
                    .expect("edge is on the sub-board"),
                None => rec.edge,
            };
            out.push(local);
            self.log.lock().expect("claim log").push(rec);
        }
        Ok(out)
    }

    fn observe_global(&mut self, global: &GameState, local_to_global: &[usize]) {
        self.global = Some(global.clone());
        self.board = Some(local_to_global.to_vec());
    }

    fn overlay(&self) -> Option<Vec<usize>> {
        self.overlay.clone()
    }
}

/// Sub-board strategy collecting vertex-disjoint edges, lowest id first.
/// Passes once it owns `target` disjoint edges.
pub struct DisjointEdges {
    g: Graph,
    target: usize,
    board: Vec<usize>,
    global: Option<GameState>,
    log: ClaimLog,
}

impl Strategy for DisjointEdges {
    fn name(&self) -> String {
        "disjoint-edges".into()
    }

    fn choose(&mut self, state: &GameState, count: usize, _rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
        let owned: Vec<usize> = match &self.global {
            Some(gs) => self
                .board
                .iter()
                .copied()
                .filter(|&id| gs.owner(id) == Some(Player::Maker))
                .collect(),
            None => Vec::new(),
        };
        let mut used = vec![false; self.g.n()];
        let mut disjoint = 0;
        let mut sorted = owned.clone();
        sorted.sort_unstable();
        let mut matched = vec![false; self.g.n()];
        for id in sorted {
            let (a, b) = self.g.edges()[id];
            used[a] = true;
            used[b] = true;
            if !matched[a] && !matched[b] {
                matched[a] = true;
                matched[b] = true;
                disjoint += 1;
            }
        }
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            if disjoint >= self.target {
                break;
            }
            let pick = (0..self.board.len())
                .filter(|&l| state.is_unclaimed(l) && !out.contains(&l))
                .min_by_key(|&l| {
                    let (a, b) = self.g.edges()[self.board[l]];
                    (used[a] as u8 + used[b] as u8, self.board[l])
                });
            let Some(l) = pick else { break };
            let (a, b) = self.g.edges()[self.board[l]];
            if !used[a] && !used[b] {
                disjoint += 1;
            }
            used[a] = true;
            used[b] = true;
            out.push(l);
            self.log.lock().expect("claim log").push(ClaimRecord {
                edge: self.board[l],
                reason: Reason::Disjoint,
            });
        }
        Ok(out)
    }

    fn observe_global(&mut self, global: &GameState, local_to_global: &[usize]) {
        self.global = Some(global.clone());
        self.board = local_to_global.to_vec();
    }
}

/// Maker's plan for a Dirac host: the strategy, the classification it was
/// built from, and the shared log of claims with their reasons.
pub struct MakerPlan {
    pub strategy: Box<dyn Strategy>,
    pub classification: Option<Classification>,
    /// Disjoint edges Maker aims for on the special sub-board.
    pub disjoint_target: usize,
    pub log: ClaimLog,
}

/// Builds Maker's strategy for the `(1:b)` Hamiltonicity game on `g`.
/// `beta` scales the stage switch `⌈β·n·ln n⌉`.
pub fn maker_dirac_strategy(g: &Graph, b: usize, seed: u64, beta: f64) -> Result<MakerPlan> {
    if !is_dirac(g)? {
        return Err(Error::Precondition("the host graph is not Dirac".into()));
    }
    if b == 0 {
        return Err(Error::Domain("Breaker's bias must be at least 1".into()));
    }
    let log: ClaimLog = Arc::new(Mutex::new(Vec::new()));
    let staged = || Box::new(DiracMaker::new(g.clone(), b, beta, log.clone())) as Box<dyn Strategy>;
    let n = g.n();
    let mode = if n <= 12 { SearchMode::Exact } else { SearchMode::Local };
    let classification = if n >= 4 {
        classify(g, ClassifierParams::unchecked(DESK_ALPHA, DESK_GAMMA), mode, seed).ok()
    } else {
        None
    };
    let special: Option<(Vec<usize>, usize)> = classification.as_ref().and_then(|c| {
        let a = c.a.as_ref()?;
        let inside = a.mask(n);
        let edges = |keep: &dyn Fn(usize, usize) -> bool| -> Vec<usize> {
            (0..g.m())
                .filter(|&id| {
                    let (u, v) = g.edges()[id];
                    keep(u, v)
                })
                .collect()
        };
        match c.case {
            Case::DenseCrossing => None,
            Case::NearDisconnected => Some((edges(&|u, v| inside[u] != inside[v]), 2)),
            Case::NearBipartite => {
                let k = a.len().saturating_sub(n - a.len());
                (k > 0).then(|| (edges(&|u, v| inside[u] && inside[v]), 2 * k))
            }
        }
    });
    let (strategy, disjoint_target): (Box<dyn Strategy>, usize) = match special {
        Some((sp, target)) if !sp.is_empty() && sp.len() < g.m() => {
            let mark: Vec<bool> = {
                let mut m = vec![false; g.m()];
                for &id in &sp {
                    m[id] = true;
                }
                m
            };
            let rest: Vec<usize> = (0..g.m()).filter(|&id| !mark[id]).collect();
            let sub = Box::new(DisjointEdges {
                g: g.clone(),
                target,
                board: sp.clone(),
                global: None,
                log: log.clone(),
            });
            let split = split_board(g.m(), vec![sp, rest], vec![sub, staged()], Bias::new(1, b)?)?;
            (Box::new(split), target)
        }
        _ => (staged(), 0),
    };
    Ok(MakerPlan {
        strategy,
        classification,
        disjoint_target,
        log,
    })
}
