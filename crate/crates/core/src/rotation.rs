//! Pósa rotation–extension on general graphs.
//!
//! A [`PathState`] is a path together with the path it was derived from and
//! the log of rotations applied since. Edges of that origin path count as
//! usable even when they are not edges of the host graph, so every
//! operation works in `G ∪ P`.
//!
//! A rotation keeps one endpoint fixed. Rotating the back end of
//! `(v0, …, vℓ)` at pivot `vi` (needs the edge `vℓ vi`) gives
//! `(v0, …, vi, vℓ, …, vi+1)`; rotating the front end at pivot `vi` (needs
//! `v0 vi`) gives `(vi-1, …, v0, vi, …, vℓ)`. Either way exactly one path
//! edge, the broken edge, is removed.

use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{CycleCertificate, Graph, PathCertificate, VertexSet};

fn norm(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// One logged rotation: the pivot vertex and the path edge it broke.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rotation {
    pub pivot: usize,
    pub broken: (usize, usize),
}

/// Which endpoint moves during a rotation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum End {
    /// `v0` moves, `vℓ` stays fixed.
    Front,
    /// `vℓ` moves, `v0` stays fixed.
    Back,
}

#[derive(Debug)]
struct Origin {
    seq: Vec<usize>,
    pos: Vec<usize>,
}

impl Origin {
    fn new(seq: Vec<usize>, n: usize) -> Origin {
        let mut pos = vec![usize::MAX; n.max(seq.iter().map(|&v| v + 1).max().unwrap_or(0))];
        for (i, &v) in seq.iter().enumerate() {
            pos[v] = i;
        }
        Origin { seq, pos }
    }

    fn adjacent(&self, u: usize, v: usize) -> bool {
        match (self.pos.get(u), self.pos.get(v)) {
            (Some(&a), Some(&b)) if a != usize::MAX && b != usize::MAX => a.abs_diff(b) == 1,
            _ => false,
        }
    }
}

/// A path with an optional edge that must survive every rotation, plus the
/// rotation history relative to its origin path.
#[derive(Clone, Debug)]
pub struct PathState {
    seq: Vec<usize>,
    fixed_edge: Option<(usize, usize)>,
    rotations: Vec<Rotation>,
    origin: Arc<Origin>,
}

impl PathState {
    /// Starts a fresh history with `seq` as the origin path.
    pub fn new(g: &Graph, seq: Vec<usize>, fixed_edge: Option<(usize, usize)>) -> Result<Self> {
        let mut seen = vec![false; g.n()];
        for &v in &seq {
            if v >= g.n() || seen[v] {
                return Err(Error::Rotation(format!(
                    "path has an out-of-range or repeated vertex {v}"
                )));
            }
            seen[v] = true;
        }
        if seq.is_empty() {
            return Err(Error::Rotation("empty path".into()));
        }
        let fixed_edge = fixed_edge.map(|(a, b)| norm(a, b));
        if let Some((a, b)) = fixed_edge {
            if !seq.windows(2).any(|w| norm(w[0], w[1]) == (a, b)) {
                return Err(Error::Rotation(format!("fixed edge ({a},{b}) is not on the path")));
            }
        }
        let origin = Arc::new(Origin::new(seq.clone(), g.n()));
        Ok(PathState {
            seq,
            fixed_edge,
            rotations: Vec::new(),
            origin,
        })
    }

    pub fn seq(&self) -> &[usize] {
        &self.seq
    }

    /// Number of edges on the path.
    pub fn len(&self) -> usize {
        self.seq.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.seq.len() <= 1
    }

    pub fn first(&self) -> usize {
        self.seq[0]
    }

    pub fn last(&self) -> usize {
        *self.seq.last().unwrap()
    }

    pub fn fixed_edge(&self) -> Option<(usize, usize)> {
        self.fixed_edge
    }

    pub fn rotations(&self) -> &[Rotation] {
        &self.rotations
    }

    pub fn origin(&self) -> &[usize] {
        &self.origin.seq
    }

    /// Adjacency in `G ∪ origin path`.
    pub fn joined(&self, g: &Graph, u: usize, v: usize) -> bool {
        g.has_edge(u, v) || self.origin.adjacent(u, v)
    }

    pub(crate) fn neighbors_joined(&self, g: &Graph, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = g.neighbors(v).to_vec();
        if let Some(&i) = self.origin.pos.get(v) {
            if i != usize::MAX {
                if i > 0 {
                    out.push(self.origin.seq[i - 1]);
                }
                if i + 1 < self.origin.seq.len() {
                    out.push(self.origin.seq[i + 1]);
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    pub(crate) fn positions(&self, n: usize) -> Vec<usize> {
        let mut pos = vec![usize::MAX; n];
        for (i, &v) in self.seq.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }

    /// Back-end rotation at pivot index `i`: `(v0..vi, vℓ..vi+1)`.
    pub fn rotate(&self, g: &Graph, i: usize) -> Result<PathState> {
        self.rotate_at(g, End::Back, i)
    }

    pub fn rotate_at(&self, g: &Graph, end: End, i: usize) -> Result<PathState> {
        let l = self.len();
        let (pivot, moving, other) = match end {
            End::Back => {
                if l < 2 || i > l - 2 {
                    return Err(Error::Rotation(format!(
                        "back pivot index {i} outside 0..={}",
                        l.saturating_sub(2)
                    )));
                }
                (self.seq[i], self.seq[l], self.seq[i + 1])
            }
            End::Front => {
                if l < 2 || i < 2 || i > l {
                    return Err(Error::Rotation(format!("front pivot index {i} outside 2..={l}")));
                }
                (self.seq[i], self.seq[0], self.seq[i - 1])
            }
        };
        if !self.joined(g, moving, pivot) {
            return Err(Error::Rotation(format!(
                "no edge between endpoint {moving} and pivot {pivot}"
            )));
        }
        let broken = norm(pivot, other);
        if self.fixed_edge == Some(broken) {
            return Err(Error::Rotation(format!(
                "rotation would break the fixed edge ({},{})",
                broken.0, broken.1
            )));
        }
        let mut seq = self.seq.clone();
        match end {
            End::Back => seq[i + 1..].reverse(),
            End::Front => seq[..i].reverse(),
        }
        let mut rotations = self.rotations.clone();
        rotations.push(Rotation { pivot, broken });
        Ok(PathState {
            seq,
            fixed_edge: self.fixed_edge,
            rotations,
            origin: Arc::clone(&self.origin),
        })
    }

    /// Replays the rotation log from the origin path.
    pub fn replay(&self) -> Vec<usize> {
        replay(&self.origin.seq, &self.rotations)
    }

    fn with_seq(&self, g: &Graph, seq: Vec<usize>) -> PathState {
        PathState {
            origin: Arc::new(Origin::new(seq.clone(), g.n())),
            seq,
            fixed_edge: self.fixed_edge,
            rotations: Vec::new(),
        }
    }

    fn off_path_neighbor(&self, g: &Graph, v: usize, on: &[bool]) -> Option<usize> {
        g.neighbors(v).iter().copied().find(|&w| !on[w])
    }

    /// Whether either endpoint has a neighbour off the path.
    pub fn is_extendable(&self, g: &Graph) -> bool {
        let on = self.membership(g.n());
        self.off_path_neighbor(g, self.first(), &on).is_some() || self.off_path_neighbor(g, self.last(), &on).is_some()
    }

    pub(crate) fn membership(&self, n: usize) -> Vec<bool> {
        let mut on = vec![false; n];
        for &v in &self.seq {
            on[v] = true;
        }
        on
    }
}

/// Applies a rotation log to a path. Each entry's broken edge tells which
/// end moved: the vertex after the pivot for a back rotation, the one
/// before it for a front rotation.
pub fn replay(origin: &[usize], rotations: &[Rotation]) -> Vec<usize> {
    let mut seq = origin.to_vec();
    for r in rotations {
        let i = seq.iter().position(|&v| v == r.pivot).expect("pivot on path");
        let other = if r.broken.0 == r.pivot { r.broken.1 } else { r.broken.0 };
        if i + 1 < seq.len() && seq[i + 1] == other {
            seq[i + 1..].reverse();
        } else {
            seq[..i].reverse();
        }
    }
    seq
}

/// Result of one extension-or-closing attempt.
#[derive(Clone, Debug)]
pub enum Step {
    Extended(PathState),
    /// Closing edge present and the cycle cannot be re-opened into a longer
    /// path (either it spans the graph or no cycle vertex has an outside
    /// neighbour).
    Closed(CycleCertificate),
    Stuck,
}

/// Tries to lengthen `ps` by one vertex, or close it.
///
/// Prefers a direct extension at either end (lowest-id outside neighbour,
/// back end first). Otherwise, if the endpoints are joined, the cycle is
/// re-opened at a vertex with an outside neighbour into a path one longer,
/// keeping the fixed edge. Deterministic.
pub fn extend_or_close(g: &Graph, ps: &PathState) -> Step {
    let on = ps.membership(g.n());
    if let Some(w) = ps.off_path_neighbor(g, ps.last(), &on) {
        let mut seq = ps.seq.clone();
        seq.push(w);
        return Step::Extended(ps.with_seq(g, seq));
    }
    if let Some(w) = ps.off_path_neighbor(g, ps.first(), &on) {
        let mut seq = Vec::with_capacity(ps.seq.len() + 1);
        seq.push(w);
        seq.extend_from_slice(&ps.seq);
        return Step::Extended(ps.with_seq(g, seq));
    }
    if ps.seq.len() >= 3 && ps.joined(g, ps.first(), ps.last()) {
        return match reopen_cycle(g, &ps.seq, ps.fixed_edge, &on, |c| {
            g.neighbors(c).iter().copied().find(|&w| !on[w])
        }) {
            Some(seq) => Step::Extended(ps.with_seq(g, seq)),
            None => Step::Closed(CycleCertificate { seq: ps.seq.clone() }),
        };
    }
    Step::Stuck
}

/// Opens the cycle `cycle` (closing edge last→first) at a vertex with an
/// outside neighbour and prepends that neighbour, never cutting `fixed`.
fn reopen_cycle<F>(
    _g: &Graph,
    cycle: &[usize],
    fixed: Option<(usize, usize)>,
    _on: &[bool],
    mut outside: F,
) -> Option<Vec<usize>>
where
    F: FnMut(usize) -> Option<usize>,
{
    let k = cycle.len();
    for j in 0..k {
        let c = cycle[j];
        let Some(x) = outside(c) else { continue };
        let prev = cycle[(j + k - 1) % k];
        let next = cycle[(j + 1) % k];
        let mut seq = Vec::with_capacity(k + 1);
        seq.push(x);
        if fixed != Some(norm(prev, c)) {
            // x, c, next, ..., prev
            for t in 0..k {
                seq.push(cycle[(j + t) % k]);
            }
        } else {
            debug_assert_ne!(fixed, Some(norm(c, next)));
            // x, c, prev, ..., next
            for t in 0..k {
                seq.push(cycle[(j + k - t) % k]);
            }
        }
        return Some(seq);
    }
    None
}

/// Endpoints reachable by rotation, each with one witness path.
///
/// `S_P` holds the start vertices reached by rotating the front of the
/// source path with its back end fixed; every witness runs from its key to
/// [`fixed_end`](Self::fixed_end). `T_v`, filled on demand, holds the end
/// vertices reached by then rotating the back end of the witness for `v`
/// with `v` fixed.
#[derive(Clone, Debug)]
pub struct EndpointAtlas {
    pub fixed_end: usize,
    reached: BTreeMap<usize, PathState>,
    order: Vec<usize>,
    t_sets: BTreeMap<usize, BTreeMap<usize, PathState>>,
    extension: Option<PathState>,
    steps: usize,
    step_cap: usize,
}

impl EndpointAtlas {
    pub(crate) fn from_parts(
        fixed_end: usize,
        reached: ClosureMap,
        order: Vec<usize>,
        extension: Option<PathState>,
        steps: usize,
        step_cap: usize,
    ) -> Self {
        EndpointAtlas {
            fixed_end,
            reached,
            order,
            t_sets: BTreeMap::new(),
            extension,
            steps,
            step_cap,
        }
    }

    pub(crate) fn insert_t(&mut self, v: usize, map: ClosureMap, extension: Option<PathState>, steps: usize) {
        self.steps += steps;
        if self.extension.is_none() {
            self.extension = extension;
        }
        self.t_sets.insert(v, map);
    }

    pub(crate) fn remaining_steps(&self) -> usize {
        self.step_cap.saturating_sub(self.steps)
    }

    pub fn s_p(&self) -> VertexSet {
        VertexSet::collect(self.reached.keys().copied())
    }

    /// Endpoints of `S_P` in discovery order.
    pub fn discovery_order(&self) -> &[usize] {
        &self.order
    }

    pub fn witness(&self, v: usize) -> Option<&PathState> {
        self.reached.get(&v)
    }

    pub fn t_set(&self, v: usize) -> Option<VertexSet> {
        self.t_sets.get(&v).map(|m| VertexSet::collect(m.keys().copied()))
    }

    pub fn t_witness(&self, v: usize, w: usize) -> Option<&PathState> {
        self.t_sets.get(&v).and_then(|m| m.get(&w))
    }

    /// A rotated path whose endpoint has a neighbour off the path, if the
    /// closure ran into one.
    pub fn extension(&self) -> Option<&PathState> {
        self.extension.as_ref()
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Computes `T_v` for `v ∈ S_P` if not yet known.
    pub fn compute_t(&mut self, g: &Graph, v: usize) -> Result<VertexSet> {
        if !self.t_sets.contains_key(&v) {
            let start = self
                .reached
                .get(&v)
                .ok_or_else(|| Error::Precondition(format!("{v} is not in S_P")))?
                .clone();
            let budget = self.step_cap.saturating_sub(self.steps);
            let (map, _, ext, steps) = closure(g, &start, End::Back, budget);
            self.steps += steps;
            if self.extension.is_none() {
                self.extension = ext;
            }
            self.t_sets.insert(v, map);
        }
        Ok(self.t_set(v).unwrap())
    }
}

pub(crate) type ClosureMap = BTreeMap<usize, PathState>;

/// BFS over rotations at one end; one witness per endpoint.
///
/// `allow(p, i)` filters pivot indices beyond the geometric rules and
/// `extendable(q)` flags rotated paths that admit an extension.
pub(crate) fn closure_with<A, X>(
    g: &Graph,
    start: &PathState,
    end: End,
    step_cap: usize,
    allow: A,
    extendable: X,
) -> (ClosureMap, Vec<usize>, Option<PathState>, usize)
where
    A: Fn(&PathState, usize) -> bool,
    X: Fn(&PathState) -> bool,
{
    let n = g.n();
    let key = |p: &PathState| match end {
        End::Front => p.first(),
        End::Back => p.last(),
    };
    let mut reached = BTreeMap::new();
    let mut order = vec![key(start)];
    reached.insert(key(start), start.clone());
    let mut queue = VecDeque::from([start.clone()]);
    let mut extension = None;
    let mut steps = 0;
    let l = start.len();
    'bfs: while let Some(p) = queue.pop_front() {
        let moving = key(&p);
        let pos = p.positions(n);
        for w in p.neighbors_joined(g, moving) {
            let i = pos[w];
            if i == usize::MAX {
                continue;
            }
            let ok = match end {
                End::Front => i >= 2,
                End::Back => l >= 2 && i <= l - 2,
            };
            if !ok || !allow(&p, i) {
                continue;
            }
            let new_end = match end {
                End::Front => p.seq[i - 1],
                End::Back => p.seq[i + 1],
            };
            if reached.contains_key(&new_end) || reached.len() >= n {
                continue;
            }
            steps += 1;
            if steps > step_cap {
                break 'bfs;
            }
            let Ok(q) = p.rotate_at(g, end, i) else {
                continue;
            };
            if extension.is_none() && extendable(&q) {
                extension = Some(q.clone());
            }
            order.push(new_end);
            reached.insert(new_end, q.clone());
            queue.push_back(q);
        }
    }
    (reached, order, extension, steps)
}

fn closure(
    g: &Graph,
    start: &PathState,
    end: End,
    step_cap: usize,
) -> (ClosureMap, Vec<usize>, Option<PathState>, usize) {
    let n = g.n();
    closure_with(
        g,
        start,
        end,
        step_cap,
        |_, _| true,
        |q| {
            let on = q.membership(n);
            let tip = match end {
                End::Front => q.first(),
                End::Back => q.last(),
            };
            q.off_path_neighbor(g, tip, &on).is_some()
        },
    )
}

/// Builds the endpoint atlas of a path that admits no direct extension.
///
/// Deterministic in `g` and `ps`. At most `4n²` rotation steps are spent on
/// each closure.
pub fn endpoint_closure(g: &Graph, ps: &PathState, compute_t: bool) -> Result<EndpointAtlas> {
    if ps.is_extendable(g) {
        return Err(Error::Precondition(
            "path can be extended directly; extend it before computing the closure".into(),
        ));
    }
    let cap = 4 * g.n() * g.n();
    let (reached, order, extension, steps) = closure(g, ps, End::Front, cap);
    let mut atlas = EndpointAtlas {
        fixed_end: ps.last(),
        reached,
        order,
        t_sets: BTreeMap::new(),
        extension,
        steps,
        step_cap: cap * (g.n() + 1),
    };
    if compute_t {
        let keys: Vec<usize> = atlas.order.clone();
        for v in keys {
            atlas.compute_t(g, v)?;
        }
    }
    Ok(atlas)
}

/// Search limits for the randomized Hamilton searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub restarts: usize,
    pub max_steps: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            restarts: 50,
            max_steps: 1_000_000,
        }
    }
}

/// Outcome of a randomized search. `found == None` means the budget ran
/// out, not that no certificate exists.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchReport<C> {
    pub found: Option<C>,
    pub restarts: usize,
    pub steps: usize,
    /// Why the search stopped early, when it can tell.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

pub(crate) enum Progress {
    Continue(PathState),
    Done(Vec<usize>),
    Restart,
    Abort(String),
}

/// One restartable randomized search.
pub(crate) trait RestartSearch {
    fn reseed(&mut self, rng: ChaCha8Rng);
    fn steps(&self) -> usize;
    fn charge(&mut self, steps: usize);
    fn start(&mut self) -> Result<PathState>;
    fn advance(&mut self, ps: PathState) -> Result<Progress>;
}

pub(crate) fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

/// Runs restarts until success, budget exhaustion or an abort.
pub(crate) fn drive<S: RestartSearch>(s: &mut S, budget: Budget, seed: u64) -> Result<SearchReport<Vec<usize>>> {
    let restarts = budget.restarts.max(1);
    for restart in 0..restarts {
        s.reseed(restart_rng(seed, restart));
        let mut ps = s.start()?;
        loop {
            if s.steps() > budget.max_steps {
                return Ok(SearchReport {
                    found: None,
                    restarts: restart + 1,
                    steps: s.steps(),
                    note: Some("step budget exhausted".into()),
                });
            }
            s.charge(1);
            match s.advance(ps)? {
                Progress::Continue(next) => ps = next,
                Progress::Done(seq) => {
                    return Ok(SearchReport {
                        found: Some(seq),
                        restarts: restart + 1,
                        steps: s.steps(),
                        note: None,
                    })
                }
                Progress::Restart => break,
                Progress::Abort(why) => {
                    return Ok(SearchReport {
                        found: None,
                        restarts: restart + 1,
                        steps: s.steps(),
                        note: Some(why),
                    })
                }
            }
        }
    }
    Ok(SearchReport {
        found: None,
        restarts,
        steps: s.steps(),
        note: Some("all restarts used".into()),
    })
}

impl<C> SearchReport<C> {
    fn map<D>(self, f: impl FnOnce(C) -> D) -> SearchReport<D> {
        SearchReport {
            found: self.found.map(f),
            restarts: self.restarts,
            steps: self.steps,
            note: self.note,
        }
    }
}

struct Searcher<'a> {
    g: &'a Graph,
    rng: ChaCha8Rng,
    steps: usize,
    max_steps: usize,
    /// Initial path and fixed edge; a random single vertex when `None`.
    seed_path: Option<(Vec<usize>, (usize, usize))>,
}

impl RestartSearch for Searcher<'_> {
    fn reseed(&mut self, rng: ChaCha8Rng) {
        self.rng = rng;
    }

    fn steps(&self) -> usize {
        self.steps
    }

    fn charge(&mut self, steps: usize) {
        self.steps += steps;
    }

    fn start(&mut self) -> Result<PathState> {
        match &self.seed_path {
            Some((seq, e)) => PathState::new(self.g, seq.clone(), Some(*e)),
            None => {
                let v = self.rng.random_range(0..self.g.n());
                PathState::new(self.g, vec![v], None)
            }
        }
    }

    fn advance(&mut self, ps: PathState) -> Result<Progress> {
        Searcher::advance(self, ps)
    }
}

impl Searcher<'_> {
    /// Greedily extends both ends, choosing among outside neighbours the one
    /// with fewest outside neighbours of its own (ties at random).
    fn grow(&mut self, ps: PathState) -> PathState {
        let g = self.g;
        let n = g.n();
        let mut on = ps.membership(n);
        let mut seq: VecDeque<usize> = ps.seq.iter().copied().collect();
        let mut grew = false;
        loop {
            let mut moved = false;
            for back in [true, false] {
                let end = if back { *seq.back().unwrap() } else { seq[0] };
                let mut cands: Vec<usize> = g.neighbors(end).iter().copied().filter(|&w| !on[w]).collect();
                if cands.is_empty() {
                    continue;
                }
                cands.shuffle(&mut self.rng);
                let w = *cands
                    .iter()
                    .min_by_key(|&&w| g.neighbors(w).iter().filter(|&&x| !on[x]).count())
                    .unwrap();
                on[w] = true;
                if back {
                    seq.push_back(w);
                } else {
                    seq.push_front(w);
                }
                moved = true;
                grew = true;
            }
            if !moved {
                break;
            }
        }
        if grew {
            ps.with_seq(g, seq.into_iter().collect())
        } else {
            ps
        }
    }

    fn closes(&self, ps: &PathState) -> bool {
        ps.seq.len() >= 3 && ps.joined(self.g, ps.first(), ps.last())
    }

    /// Handles a path whose endpoints are joined: success if it spans,
    /// otherwise re-open into a longer path.
    fn on_cycle(&mut self, ps: &PathState, cycle: Vec<usize>) -> Progress {
        let g = self.g;
        if cycle.len() == g.n() {
            return Progress::Done(cycle);
        }
        let mut on = vec![false; g.n()];
        for &v in &cycle {
            on[v] = true;
        }
        match reopen_cycle(g, &cycle, ps.fixed_edge, &on, |c| {
            g.neighbors(c).iter().copied().find(|&w| !on[w])
        }) {
            Some(seq) => Progress::Continue(ps.with_seq(g, seq)),
            // a closed cycle with no way out: the graph is disconnected
            None => Progress::Abort("a closed cycle has no outside neighbour; the graph is disconnected".into()),
        }
    }

    fn advance(&mut self, ps: PathState) -> Result<Progress> {
        let g = self.g;
        let ps = self.grow(ps);
        if self.closes(&ps) {
            return Ok(self.on_cycle(&ps, ps.seq.clone()));
        }
        let mut atlas = endpoint_closure(g, &ps, false)?;
        self.steps += atlas.steps();
        if let Some(ext) = atlas.extension() {
            return Ok(Progress::Continue(ext.clone()));
        }
        let mut starts: Vec<usize> = atlas.discovery_order().to_vec();
        starts[1..].shuffle(&mut self.rng);
        for v in starts {
            if self.steps > self.max_steps {
                return Ok(Progress::Abort("step budget exhausted".into()));
            }
            let before = atlas.steps();
            let t = atlas.compute_t(g, v)?;
            self.steps += atlas.steps() - before;
            if let Some(ext) = atlas.extension() {
                return Ok(Progress::Continue(ext.clone()));
            }
            let close = t.iter().find(|&w| ps.joined(g, v, w) && w != v);
            if let Some(w) = close {
                let witness = atlas.t_witness(v, w).unwrap().clone();
                if witness.seq.len() >= 3 {
                    return Ok(self.on_cycle(&witness, witness.seq.clone()));
                }
            }
        }
        Ok(Progress::Restart)
    }
}

/// Randomized rotation–extension search for a Hamilton cycle.
///
/// Each restart grows a greedy path from a random vertex, then alternates
/// extension, closing and endpoint closures, closing through any edge
/// between `v ∈ S_P` and `w ∈ T_v`.
pub fn find_hamilton_cycle(g: &Graph, budget: Budget, seed: u64) -> Result<SearchReport<CycleCertificate>> {
    if g.n() < 3 {
        return Err(Error::Domain(format!("Hamilton cycles need n >= 3, got n = {}", g.n())));
    }
    let mut s = Searcher {
        g,
        rng: restart_rng(seed, 0),
        steps: 0,
        max_steps: budget.max_steps,
        seed_path: None,
    };
    Ok(drive(&mut s, budget, seed)?.map(|seq| CycleCertificate { seq }))
}

/// Randomized search for a Hamilton path from `u` to `v`.
///
/// Adds the edge `uv` if missing, keeps it fixed while searching for a
/// Hamilton cycle through it, then removes it.
pub fn find_path_between(
    g: &Graph,
    u: usize,
    v: usize,
    budget: Budget,
    seed: u64,
) -> Result<SearchReport<PathCertificate>> {
    if u == v {
        return Err(Error::Domain("endpoints of a Hamilton path must differ".into()));
    }
    if u >= g.n() || v >= g.n() {
        return Err(Error::Domain(format!("vertex out of range for n = {}", g.n())));
    }
    if g.n() == 2 {
        let found = g.has_edge(u, v).then(|| PathCertificate { seq: vec![u, v] });
        return Ok(SearchReport {
            found,
            restarts: 1,
            steps: 0,
            note: None,
        });
    }
    let h = g.with_edges(&[(u, v)]);
    let mut s = Searcher {
        g: &h,
        rng: restart_rng(seed, 0),
        steps: 0,
        max_steps: budget.max_steps,
        seed_path: Some((vec![u, v], (u, v))),
    };
    let report = drive(&mut s, budget, seed)?;
    Ok(report.map(|cycle| {
        let k = cycle.len();
        let iu = cycle.iter().position(|&x| x == u).unwrap();
        let seq: Vec<usize> = if cycle[(iu + 1) % k] == v {
            // v follows u: walk the other way round
            (0..k).map(|t| cycle[(iu + k - t) % k]).collect()
        } else {
            (0..k).map(|t| cycle[(iu + t) % k]).collect()
        };
        debug_assert_eq!(*seq.last().unwrap(), v);
        PathCertificate { seq }
    }))
}

/// Rotation statistics over sampled maximal paths: `|S_P|/n` and `|T_v|/n`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RotationProfile {
    pub paths_sampled: usize,
    pub min_s_fraction: f64,
    pub mean_s_fraction: f64,
    pub min_t_fraction: f64,
}

/// Samples greedy maximal paths and measures their endpoint sets. The
/// minimum over samples is an upper estimate for the largest `ξ` with
/// which the rotation property could hold.
pub fn rotation_profile(g: &Graph, samples: usize, seed: u64) -> Result<RotationProfile> {
    let n = g.n();
    if n == 0 {
        return Err(Error::Domain("empty graph".into()));
    }
    let mut s = Searcher {
        g,
        rng: restart_rng(seed, 0),
        steps: 0,
        max_steps: usize::MAX,
        seed_path: None,
    };
    let mut min_s = f64::INFINITY;
    let mut min_t = f64::INFINITY;
    let mut sum_s = 0.0;
    for k in 0..samples {
        s.rng = restart_rng(seed, k);
        let start = s.rng.random_range(0..n);
        let ps = s.grow(PathState::new(g, vec![start], None)?);
        let mut atlas = endpoint_closure(g, &ps, false)?;
        let sp = atlas.s_p();
        let frac = sp.len() as f64 / n as f64;
        min_s = min_s.min(frac);
        sum_s += frac;
        let v = atlas.discovery_order()[s.rng.random_range(0..sp.len())];
        let t = atlas.compute_t(g, v)?;
        min_t = min_t.min(t.len() as f64 / n as f64);
    }
    Ok(RotationProfile {
        paths_sampled: samples,
        min_s_fraction: if samples == 0 { 0.0 } else { min_s },
        mean_s_fraction: if samples == 0 { 0.0 } else { sum_s / samples as f64 },
        min_t_fraction: if samples == 0 { 0.0 } else { min_t },
    })
}
