//! Special frames, matched frames and proper paths for near-bipartite
//! graphs, with the rotation–extension variant that only ever produces
//! proper paths.
//!
//! A frame splits the vertices into `V1` and `V2` with `|V1| = |V2| + k`
//! and picks `k` disjoint special edges inside `V1`. One endpoint of each
//! special edge is its special vertex; the other vertices of `V1` form
//! `V1'` and are perfectly matched to `V2` by `f`. Proper paths keep the
//! matching pairs together, carry special edges whole and otherwise use
//! only edges between `V1` and `V2`.
//!
//! Paths are oriented with the `V2` endpoint first and the `V1` endpoint
//! last.

use std::collections::VecDeque;

use rand::seq::{IndexedRandom, SliceRandom};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{CycleCertificate, Graph, VertexSet};
use crate::rotation::{
    closure_with, drive, restart_rng, Budget, End, EndpointAtlas, PathState, Progress, RestartSearch, SearchReport,
};

/// Maximum matching by augmenting paths between `left` and `right`.
///
/// Returns the pairs `(l, r)` of a perfect matching, or a Hall violator:
/// a set `X ⊆ left` with `|N(X) ∩ right| < |X|`.
pub fn hall_matching(g: &Graph, left: &VertexSet, right: &VertexSet) -> Result<Vec<(usize, usize)>> {
    let n = g.n();
    left.validate(n)?;
    right.validate(n)?;
    if left.len() != right.len() {
        return Err(Error::Domain(format!(
            "sides differ in size: {} vs {}",
            left.len(),
            right.len()
        )));
    }
    if !left.intersection(right).is_empty() {
        return Err(Error::InvalidSet("sides overlap".into()));
    }
    let on_right = right.mask(n);
    let mut mate = vec![usize::MAX; n];

    fn augment(g: &Graph, u: usize, on_right: &[bool], seen: &mut [bool], mate: &mut [usize]) -> bool {
        for &w in g.neighbors(u) {
            if !on_right[w] || seen[w] {
                continue;
            }
            seen[w] = true;
            if mate[w] == usize::MAX || augment(g, mate[w], on_right, seen, mate) {
                mate[w] = u;
                mate[u] = w;
                return true;
            }
        }
        false
    }

    let mut exposed = Vec::new();
    for u in left.iter() {
        let mut seen = vec![false; n];
        if !augment(g, u, &on_right, &mut seen, &mut mate) {
            exposed.push(u);
        }
    }
    if !exposed.is_empty() {
        // left vertices reachable by alternating paths from exposed ones
        let mut in_x = vec![false; n];
        let mut seen_r = vec![false; n];
        for &u in &exposed {
            in_x[u] = true;
        }
        let mut queue: VecDeque<usize> = exposed.into_iter().collect();
        while let Some(x) = queue.pop_front() {
            for &w in g.neighbors(x) {
                if on_right[w] && !seen_r[w] {
                    seen_r[w] = true;
                    let m = mate[w];
                    if m != usize::MAX && !in_x[m] {
                        in_x[m] = true;
                        queue.push_back(m);
                    }
                }
            }
        }
        return Err(Error::HallViolation {
            violator: VertexSet::from_mask(n, &in_x),
        });
    }
    Ok(left.iter().map(|u| (u, mate[u])).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialFrame {
    n: usize,
    v1: VertexSet,
    v2: VertexSet,
    special_vertices: VertexSet,
    special_edges: Vec<(usize, usize)>,
    /// `partner[v]` is the other end of `v`'s special edge.
    partner: Vec<Option<usize>>,
}

impl SpecialFrame {
    /// Validates the partition and special edges. The special vertex of
    /// each edge is its smaller endpoint.
    pub fn new(g: &Graph, v1: VertexSet, v2: VertexSet, special_edges: &[(usize, usize)]) -> Result<Self> {
        let n = g.n();
        v1.validate(n)?;
        v2.validate(n)?;
        if v1.len() + v2.len() != n || !v1.intersection(&v2).is_empty() {
            return Err(Error::Frame("V1 and V2 must partition the vertex set".into()));
        }
        let in_v1 = v1.mask(n);
        let mut partner = vec![None; n];
        let mut edges = Vec::with_capacity(special_edges.len());
        for &(a, b) in special_edges {
            let (a, b) = if a < b { (a, b) } else { (b, a) };
            if a == b || b >= n || !in_v1[a] || !in_v1[b] {
                return Err(Error::Frame(format!("special edge ({a},{b}) is not inside V1")));
            }
            if !g.has_edge(a, b) {
                return Err(Error::Frame(format!("special edge ({a},{b}) is not an edge")));
            }
            if partner[a].is_some() || partner[b].is_some() {
                return Err(Error::Frame(format!(
                    "special edge ({a},{b}) shares a vertex with another special edge"
                )));
            }
            partner[a] = Some(b);
            partner[b] = Some(a);
            edges.push((a, b));
        }
        let k = edges.len();
        if v1.len() != v2.len() + k {
            return Err(Error::Frame(format!(
                "|V1| - |V2| = {} but there are {k} special edges",
                v1.len() as isize - v2.len() as isize
            )));
        }
        edges.sort_unstable();
        let special_vertices = VertexSet::collect(edges.iter().map(|e| e.0));
        Ok(SpecialFrame {
            n,
            v1,
            v2,
            special_vertices,
            special_edges: edges,
            partner,
        })
    }

    pub fn k(&self) -> usize {
        self.special_edges.len()
    }

    pub fn v1(&self) -> &VertexSet {
        &self.v1
    }

    pub fn v2(&self) -> &VertexSet {
        &self.v2
    }

    pub fn special_vertices(&self) -> &VertexSet {
        &self.special_vertices
    }

    pub fn special_edges(&self) -> &[(usize, usize)] {
        &self.special_edges
    }

    /// `V1 ∖ S_V`.
    pub fn v1_prime(&self) -> VertexSet {
        self.v1.difference(&self.special_vertices)
    }

    /// `V1` minus every vertex of a special edge.
    pub fn v1_second(&self) -> VertexSet {
        VertexSet::collect(self.v1.iter().filter(|&v| self.partner[v].is_none()))
    }

    pub fn in_v1(&self, v: usize) -> bool {
        self.v1.contains(v)
    }

    pub fn is_special_vertex(&self, v: usize) -> bool {
        self.special_vertices.contains(v)
    }

    pub fn partner(&self, v: usize) -> Option<usize> {
        self.partner[v]
    }

    pub fn is_special_edge(&self, u: usize, v: usize) -> bool {
        self.partner[u] == Some(v)
    }

    /// Edges between the sides plus the special edges.
    pub fn framed_subgraph(&self, g: &Graph) -> Graph {
        g.filter_edges(|_, (u, v)| self.in_v1(u) != self.in_v1(v) || self.is_special_edge(u, v))
    }
}

/// A special frame with a perfect matching `f` between `V1'` and `V2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchedFrame {
    pub frame: SpecialFrame,
    mate: Vec<Option<usize>>,
}

impl MatchedFrame {
    /// `f(v)` for `v ∈ V1' ∪ V2`.
    pub fn f(&self, v: usize) -> Option<usize> {
        self.mate[v]
    }

    pub fn matching(&self) -> Vec<(usize, usize)> {
        self.frame.v2.iter().map(|v| (self.mate[v].unwrap(), v)).collect()
    }
}

pub fn build_matched_frame(
    g: &Graph,
    v1: VertexSet,
    v2: VertexSet,
    special_edges: &[(usize, usize)],
) -> Result<MatchedFrame> {
    let frame = SpecialFrame::new(g, v1, v2, special_edges)?;
    let pairs = hall_matching(g, &frame.v1_prime(), &frame.v2)?;
    let mut mate = vec![None; g.n()];
    for (a, b) in pairs {
        mate[a] = Some(b);
        mate[b] = Some(a);
    }
    Ok(MatchedFrame { frame, mate })
}

/// Checks the three proper-path conditions and the endpoint sides.
pub fn check_proper_path(g: &Graph, mf: &MatchedFrame, seq: &[usize]) -> Result<()> {
    let n = g.n();
    let fr = &mf.frame;
    if seq.len() < 2 {
        return Err(Error::Frame("a proper path has at least one edge".into()));
    }
    let mut on = vec![false; n];
    for &v in seq {
        if v >= n || on[v] {
            return Err(Error::Frame(format!("vertex {v} repeated or out of range")));
        }
        on[v] = true;
    }
    for w in seq.windows(2) {
        let (a, b) = (w[0], w[1]);
        if !g.has_edge(a, b) {
            return Err(Error::Frame(format!("({a},{b}) is not an edge")));
        }
        if fr.in_v1(a) == fr.in_v1(b) && !fr.is_special_edge(a, b) {
            return Err(Error::Frame(format!(
                "edge ({a},{b}) neither crosses the frame nor is special"
            )));
        }
    }
    for &v in seq {
        if let Some(m) = mf.f(v) {
            if !on[m] {
                return Err(Error::Frame(format!("{v} is on the path but f({v}) = {m} is not")));
            }
        }
        if fr.is_special_vertex(v) {
            let p = fr.partner(v).unwrap();
            let carried = seq.windows(2).any(|w| (w[0], w[1]) == (v, p) || (w[0], w[1]) == (p, v));
            if !carried {
                return Err(Error::Frame(format!(
                    "special vertex {v} is on the path without its special edge"
                )));
            }
        }
    }
    let (a, b) = (seq[0], *seq.last().unwrap());
    if fr.in_v1(a) == fr.in_v1(b) {
        return Err(Error::Frame("a proper path has one endpoint on each side".into()));
    }
    Ok(())
}

/// Number of special edges on a path or cycle (closing pair included when
/// `cyclic`).
pub fn special_edges_used(mf: &MatchedFrame, seq: &[usize], cyclic: bool) -> usize {
    let k = seq.len();
    let pairs = if cyclic { k } else { k.saturating_sub(1) };
    (0..pairs)
        .filter(|&i| mf.frame.is_special_edge(seq[i], seq[(i + 1) % k]))
        .count()
}

/// A spanning cycle that uses only crossing edges and all `k` special edges.
pub fn check_proper_cycle(g: &Graph, mf: &MatchedFrame, seq: &[usize]) -> Result<()> {
    if !crate::graph::verify_hamilton_cycle(g, seq) {
        return Err(Error::Frame("not a Hamilton cycle".into()));
    }
    let fr = &mf.frame;
    let k = seq.len();
    for i in 0..k {
        let (a, b) = (seq[i], seq[(i + 1) % k]);
        if fr.in_v1(a) == fr.in_v1(b) && !fr.is_special_edge(a, b) {
            return Err(Error::Frame(format!("cycle edge ({a},{b}) is not allowed")));
        }
    }
    let used = special_edges_used(mf, seq, true);
    if used != fr.k() {
        return Err(Error::Frame(format!("cycle uses {used} of {} special edges", fr.k())));
    }
    Ok(())
}

/// A path known to satisfy [`check_proper_path`], oriented `V2 → V1`.
#[derive(Clone, Debug)]
pub struct ProperPath {
    ps: PathState,
}

impl ProperPath {
    pub fn new(g: &Graph, mf: &MatchedFrame, seq: Vec<usize>) -> Result<Self> {
        check_proper_path(g, mf, &seq)?;
        let seq = if mf.frame.in_v1(seq[0]) {
            seq.into_iter().rev().collect()
        } else {
            seq
        };
        Ok(ProperPath {
            ps: PathState::new(g, seq, None)?,
        })
    }

    pub fn seq(&self) -> &[usize] {
        self.ps.seq()
    }

    pub fn state(&self) -> &PathState {
        &self.ps
    }
}

/// The ways a proper path can grow while staying proper.
fn extensions(g: &Graph, mf: &MatchedFrame, seq: &[usize], on: &[bool]) -> Vec<Vec<usize>> {
    let fr = &mf.frame;
    let front = seq[0];
    let back = *seq.last().unwrap();
    let mut out = Vec::new();
    for &x in g.neighbors(front) {
        if on[x] || !fr.in_v1(x) {
            continue;
        }
        if fr.is_special_vertex(x) {
            let w = fr.partner(x).unwrap();
            if !on[w] {
                let mut s = vec![mf.f(w).unwrap(), w, x];
                s.extend_from_slice(seq);
                out.push(s);
            }
        } else {
            let mut s = vec![mf.f(x).unwrap(), x];
            s.extend_from_slice(seq);
            out.push(s);
        }
    }
    for &z in g.neighbors(back) {
        if on[z] {
            continue;
        }
        if !fr.in_v1(z) {
            let mut s = seq.to_vec();
            s.extend([z, mf.f(z).unwrap()]);
            out.push(s);
        } else if fr.is_special_edge(back, z) && fr.is_special_vertex(z) {
            let mut s = seq.to_vec();
            s.push(z);
            out.push(s);
        }
    }
    out
}

fn membership(n: usize, seq: &[usize]) -> Vec<bool> {
    let mut on = vec![false; n];
    for &v in seq {
        on[v] = true;
    }
    on
}

fn extendable(g: &Graph, mf: &MatchedFrame, seq: &[usize]) -> bool {
    !extensions(g, mf, seq, &membership(g.n(), seq)).is_empty()
}

/// Closure of a proper path at one end. Front rotations pivot on `V1''`
/// vertices, so no special edge ever breaks; back rotations pivot on `V2`.
fn proper_closure(
    g: &Graph,
    mf: &MatchedFrame,
    start: &PathState,
    end: End,
    cap: usize,
) -> (crate::rotation::ClosureMap, Vec<usize>, Option<PathState>, usize) {
    let fr = &mf.frame;
    closure_with(
        g,
        start,
        end,
        cap,
        |p, i| {
            let pivot = p.seq()[i];
            match end {
                End::Front => fr.in_v1(pivot) && fr.partner(pivot).is_none(),
                End::Back => !fr.in_v1(pivot),
            }
        },
        |q| extendable(g, mf, q.seq()),
    )
}

/// Endpoint atlas of a proper path admitting no proper extension:
/// `S_P ⊆ V2` from rotating the `V2` end, `T_v ⊆ V1` from then rotating
/// the `V1` end.
pub fn proper_endpoint_closure(
    g: &Graph,
    mf: &MatchedFrame,
    pp: &ProperPath,
    compute_t: bool,
) -> Result<EndpointAtlas> {
    if extendable(g, mf, pp.seq()) {
        return Err(Error::Precondition(
            "proper path can still be extended; extend it before computing the closure".into(),
        ));
    }
    let cap = 4 * g.n() * g.n();
    let (reached, order, ext, steps) = proper_closure(g, mf, &pp.ps, End::Front, cap);
    let mut atlas = EndpointAtlas::from_parts(pp.ps.last(), reached, order, ext, steps, cap * (g.n() + 1));
    if compute_t {
        for v in atlas.discovery_order().to_vec() {
            fill_t(g, mf, &mut atlas, v);
        }
    }
    Ok(atlas)
}

fn fill_t(g: &Graph, mf: &MatchedFrame, atlas: &mut EndpointAtlas, v: usize) {
    if atlas.t_set(v).is_some() {
        return;
    }
    let start = atlas.witness(v).unwrap().clone();
    let (map, _, ext, steps) = proper_closure(g, mf, &start, End::Back, atlas.remaining_steps());
    atlas.insert_t(v, map, ext, steps);
}

struct FrameSearch<'a> {
    g: &'a Graph,
    mf: &'a MatchedFrame,
    rng: ChaCha8Rng,
    steps: usize,
    max_steps: usize,
}

impl FrameSearch<'_> {
    fn grow(&mut self, mut seq: Vec<usize>) -> Vec<usize> {
        let n = self.g.n();
        loop {
            let on = membership(n, &seq);
            let options = extensions(self.g, self.mf, &seq, &on);
            match options.choose(&mut self.rng) {
                Some(next) => seq = next.clone(),
                None => return seq,
            }
        }
    }

    /// `cycle` is a proper cycle; success if spanning, otherwise cut it at
    /// a crossing edge so that the resulting path extends.
    fn on_cycle(&mut self, cycle: &[usize]) -> Result<Progress> {
        let g = self.g;
        let fr = &self.mf.frame;
        let k = cycle.len();
        if k == g.n() {
            return Ok(Progress::Done(cycle.to_vec()));
        }
        for i in 0..k {
            let (a, b) = (cycle[i], cycle[(i + 1) % k]);
            if fr.in_v1(a) == fr.in_v1(b) {
                continue;
            }
            // path from the V2 end of the cut edge round to its V1 end
            let seq: Vec<usize> = if fr.in_v1(a) {
                (0..k).map(|t| cycle[(i + 1 + t) % k]).collect()
            } else {
                (0..k).map(|t| cycle[(i + k - t) % k]).collect()
            };
            if extendable(g, self.mf, &seq) {
                return Ok(Progress::Continue(PathState::new(g, seq, None)?));
            }
        }
        Ok(Progress::Abort(
            "a proper cycle has no proper extension; the framed subgraph is disconnected".into(),
        ))
    }
}

impl RestartSearch for FrameSearch<'_> {
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
        let v2 = self.mf.frame.v2.as_slice();
        let y = *v2.choose(&mut self.rng).unwrap();
        PathState::new(self.g, vec![y, self.mf.f(y).unwrap()], None)
    }

    fn advance(&mut self, ps: PathState) -> Result<Progress> {
        let g = self.g;
        let mf = self.mf;
        let seq = self.grow(ps.seq().to_vec());
        let ps = PathState::new(g, seq, None)?;
        if ps.seq().len() >= 3 && g.has_edge(ps.first(), ps.last()) {
            return self.on_cycle(ps.seq());
        }
        let pp = ProperPath { ps };
        let mut atlas = proper_endpoint_closure(g, mf, &pp, false)?;
        self.steps += atlas.steps();
        if let Some(ext) = atlas.extension() {
            return Ok(Progress::Continue(ext.clone()));
        }
        let mut starts = atlas.discovery_order().to_vec();
        starts[1..].shuffle(&mut self.rng);
        for v in starts {
            if self.steps > self.max_steps {
                return Ok(Progress::Abort("step budget exhausted".into()));
            }
            let before = atlas.steps();
            fill_t(g, mf, &mut atlas, v);
            self.steps += atlas.steps() - before;
            if let Some(ext) = atlas.extension() {
                return Ok(Progress::Continue(ext.clone()));
            }
            let t = atlas.t_set(v).unwrap();
            let close = t.iter().find(|&w| g.has_edge(v, w));
            if let Some(w) = close {
                let witness = atlas.t_witness(v, w).unwrap().seq().to_vec();
                return self.on_cycle(&witness);
            }
        }
        Ok(Progress::Restart)
    }
}

/// Searches for a proper Hamilton cycle: spanning, using only crossing
/// edges and exactly the `k` special edges.
pub fn find_proper_hamilton_cycle(
    g: &Graph,
    mf: &MatchedFrame,
    budget: Budget,
    seed: u64,
) -> Result<SearchReport<CycleCertificate>> {
    let framed = mf.frame.framed_subgraph(g);
    if !framed.is_connected() {
        return Ok(SearchReport {
            found: None,
            restarts: 0,
            steps: 0,
            note: Some("framed subgraph is disconnected".into()),
        });
    }
    if mf.frame.v2.is_empty() {
        return Err(Error::Frame("V2 is empty".into()));
    }
    let mut s = FrameSearch {
        g,
        mf,
        rng: restart_rng(seed, 0),
        steps: 0,
        max_steps: budget.max_steps,
    };
    let report = drive(&mut s, budget, seed)?;
    if let Some(seq) = &report.found {
        debug_assert!(check_proper_cycle(g, mf, seq).is_ok());
    }
    Ok(SearchReport {
        found: report.found.map(|seq| CycleCertificate { seq }),
        restarts: report.restarts,
        steps: report.steps,
        note: report.note,
    })
}
