//! Undirected simple graphs on dense vertex ids `0..n`, the counting and
//! neighbourhood primitives used throughout the crate, and Hamilton
//! certificate checks.
//!
//! A [`Graph`] is immutable once built. Adjacency is kept both as sorted
//! neighbour lists (for iteration) and as a bit matrix (for `O(1)` edge
//! queries), so it can be shared freely between threads.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A set of vertex ids, kept sorted and free of duplicates.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet {
    members: Vec<usize>,
}

impl VertexSet {
    /// Builds a set from arbitrary-order ids; duplicates are rejected.
    pub fn new(mut members: Vec<usize>) -> Result<Self> {
        members.sort_unstable();
        if members.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSet("duplicate vertex id".into()));
        }
        Ok(VertexSet { members })
    }

    pub fn empty() -> Self {
        VertexSet { members: Vec::new() }
    }

    /// Collects ids, silently merging duplicates.
    pub fn collect<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut members: Vec<usize> = iter.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        VertexSet { members }
    }

    pub fn range(lo: usize, hi: usize) -> Self {
        VertexSet {
            members: (lo..hi).collect(),
        }
    }

    pub fn from_mask(n: usize, mask: &[bool]) -> Self {
        VertexSet {
            members: (0..n).filter(|&v| mask[v]).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.members
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.members
    }

    /// Checks every member is a vertex of a graph on `n` vertices.
    pub fn validate(&self, n: usize) -> Result<()> {
        match self.members.last() {
            Some(&v) if v >= n => Err(Error::InvalidSet(format!("vertex {v} out of range for n = {n}"))),
            _ => Ok(()),
        }
    }

    pub fn complement(&self, n: usize) -> Self {
        let mask = self.mask(n);
        VertexSet {
            members: (0..n).filter(|&v| !mask[v]).collect(),
        }
    }

    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for &v in &self.members {
            if v < n {
                mask[v] = true;
            }
        }
        mask
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet {
            members: self.iter().filter(|&v| other.contains(v)).collect(),
        }
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet::collect(self.iter().chain(other.iter()))
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet {
            members: self.iter().filter(|&v| !other.contains(v)).collect(),
        }
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::collect(iter)
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Immutable undirected simple graph.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<usize>>,
    bits: Vec<u64>,
    words: usize,
    edges: Vec<(usize, usize)>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("m", &self.edges.len())
            .finish()
    }
}

/// Incremental constructor for [`Graph`]; rejects loops and duplicates.
#[derive(Clone, Debug)]
pub struct GraphBuilder {
    n: usize,
    adj: Vec<Vec<usize>>,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        GraphBuilder {
            n,
            adj: vec![Vec::new(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].contains(&v)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::Parse(format!("edge ({u},{v}) out of range for n = {}", self.n)));
        }
        if u == v {
            return Err(Error::Parse(format!("self-loop at vertex {u}")));
        }
        if self.adj[u].contains(&v) {
            return Err(Error::Parse(format!("duplicate edge ({u},{v})")));
        }
        self.adj[u].push(v);
        self.adj[v].push(u);
        Ok(())
    }

    /// Adds the edge unless it is already present or a loop.
    pub fn add_edge_if_absent(&mut self, u: usize, v: usize) -> bool {
        if u == v || u >= self.n || v >= self.n || self.adj[u].contains(&v) {
            return false;
        }
        self.adj[u].push(v);
        self.adj[v].push(u);
        true
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn build(self) -> Graph {
        Graph::from_adjacency(self.n, self.adj)
    }
}

impl Graph {
    fn from_adjacency(n: usize, mut adj: Vec<Vec<usize>>) -> Graph {
        let words = n.div_ceil(64).max(1);
        let mut bits = vec![0u64; n * words];
        let mut edges = Vec::new();
        for (u, row) in adj.iter_mut().enumerate() {
            row.sort_unstable();
            for &v in row.iter() {
                bits[u * words + v / 64] |= 1 << (v % 64);
                if u < v {
                    edges.push((u, v));
                }
            }
        }
        Graph {
            n,
            adj,
            bits,
            words,
            edges,
        }
    }

    /// Builds a graph from an edge list, rejecting loops, duplicates and
    /// out-of-range ids.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut b = GraphBuilder::new(n);
        for &(u, v) in edges {
            b.add_edge(u, v)?;
        }
        Ok(b.build())
    }

    pub fn empty(n: usize) -> Graph {
        GraphBuilder::new(n).build()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && (self.bits[u * self.words + v / 64] >> (v % 64)) & 1 == 1
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order. The position
    /// of an edge in this list is its edge id.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        let key = if u < v { (u, v) } else { (v, u) };
        self.edges.binary_search(&key).ok()
    }

    /// A copy of this graph with the given extra edges (existing ones are
    /// ignored).
    pub fn with_edges(&self, extra: &[(usize, usize)]) -> Graph {
        let mut adj = self.adj.clone();
        for &(u, v) in extra {
            if u != v && u < self.n && v < self.n && !self.has_edge(u, v) && !adj[u].contains(&v) {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        Graph::from_adjacency(self.n, adj)
    }

    /// Spanning subgraph keeping the edges whose id satisfies `keep`.
    pub fn filter_edges<F: FnMut(usize, (usize, usize)) -> bool>(&self, mut keep: F) -> Graph {
        let mut adj = vec![Vec::new(); self.n];
        for (id, &(u, v)) in self.edges.iter().enumerate() {
            if keep(id, (u, v)) {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        Graph::from_adjacency(self.n, adj)
    }

    /// Whether all vertices lie in one component (vacuously true for n ≤ 1).
    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    /// Component label per vertex, labels numbered from 0 in order of the
    /// smallest member.
    pub fn components(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.n];
        let mut next = 0;
        for s in 0..self.n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    if label[w] == usize::MAX {
                        label[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        label
    }

    /// Parses the text format: a header line `n m` followed by `m` lines
    /// `u v` with `u < v`. Blank lines and `#` comments are ignored.
    pub fn parse_text(text: &str) -> Result<Graph> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("missing header line".into()))?;
        let (n, m) = parse_pair(header)?;
        let mut b = GraphBuilder::new(n);
        let mut count = 0;
        for line in lines {
            let (u, v) = parse_pair(line)?;
            if u >= v {
                return Err(Error::Parse(format!("edge line `{line}` must have u < v")));
            }
            b.add_edge(u, v)?;
            count += 1;
        }
        if count != m {
            return Err(Error::Parse(format!(
                "header announces {m} edges but {count} were given"
            )));
        }
        Ok(b.build())
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.m());
        for &(u, v) in &self.edges {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    pub fn parse_json(text: &str) -> Result<Graph> {
        let raw: GraphJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Graph::try_from(raw)
    }

    /// Parses either format, choosing JSON when the input starts with `{`.
    pub fn parse(text: &str) -> Result<Graph> {
        if text.trim_start().starts_with('{') {
            Graph::parse_json(text)
        } else {
            Graph::parse_text(text)
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&GraphJson::from(self)).expect("graph json")
    }
}

fn parse_pair(line: &str) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let mut next = || -> Result<usize> {
        it.next()
            .ok_or_else(|| Error::Parse(format!("expected two integers in `{line}`")))?
            .parse::<usize>()
            .map_err(|e| Error::Parse(format!("`{line}`: {e}")))
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(Error::Parse(format!("trailing tokens in `{line}`")));
    }
    Ok((a, b))
}

/// Wire form `{"n": int, "edges": [[u, v], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        GraphJson {
            n: g.n,
            edges: g.edges.iter().map(|&(u, v)| [u, v]).collect(),
        }
    }
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;

    fn try_from(raw: GraphJson) -> Result<Graph> {
        let edges: Vec<(usize, usize)> = raw.edges.iter().map(|e| (e[0], e[1])).collect();
        Graph::from_edges(raw.n, &edges)
    }
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = GraphJson::deserialize(d)?;
        Graph::try_from(raw).map_err(serde::de::Error::custom)
    }
}

/// Ordered-pair edge count `e(X, Y)`: the number of pairs `(x, y)` with
/// `x ∈ X`, `y ∈ Y` and `{x, y}` an edge. Edges inside `X ∩ Y` are counted
/// twice, so `e(X, X) = 2·e(X)`.
pub fn pair_count(g: &Graph, x: &VertexSet, y: &VertexSet) -> Result<usize> {
    x.validate(g.n())?;
    y.validate(g.n())?;
    let ymask = y.mask(g.n());
    Ok(x.iter()
        .map(|v| g.neighbors(v).iter().filter(|&&w| ymask[w]).count())
        .sum())
}

/// `N(X)`: every vertex with at least one neighbour in `X`.
pub fn neighborhood(g: &Graph, x: &VertexSet) -> Result<VertexSet> {
    x.validate(g.n())?;
    let mut mask = vec![false; g.n()];
    for v in x.iter() {
        for &w in g.neighbors(v) {
            mask[w] = true;
        }
    }
    Ok(VertexSet::from_mask(g.n(), &mask))
}

pub fn min_degree(g: &Graph) -> usize {
    (0..g.n()).map(|v| g.degree(v)).min().unwrap_or(0)
}

pub fn max_degree(g: &Graph) -> usize {
    (0..g.n()).map(|v| g.degree(v)).max().unwrap_or(0)
}

/// Minimum degree at least `n/2`; defined for `n ≥ 3`.
pub fn is_dirac(g: &Graph) -> Result<bool> {
    if g.n() < 3 {
        return Err(Error::Domain(format!(
            "Dirac's condition needs n >= 3, got n = {}",
            g.n()
        )));
    }
    Ok(2 * min_degree(g) >= g.n())
}

/// Subgraph induced on `X`, relabelled to `0..|X|` in increasing order of
/// the original ids. The second component maps new ids back to old ones.
pub fn induced_subgraph(g: &Graph, x: &VertexSet) -> Result<(Graph, Vec<usize>)> {
    x.validate(g.n())?;
    if x.is_empty() {
        return Err(Error::InvalidSet("induced subgraph on an empty set".into()));
    }
    let map: Vec<usize> = x.iter().collect();
    let mut index = vec![usize::MAX; g.n()];
    for (i, &v) in map.iter().enumerate() {
        index[v] = i;
    }
    let mut b = GraphBuilder::new(map.len());
    for &(u, v) in g.edges() {
        if index[u] != usize::MAX && index[v] != usize::MAX {
            b.add_edge(index[u], index[v])?;
        }
    }
    Ok((b.build(), map))
}

fn is_permutation(n: usize, seq: &[usize]) -> bool {
    if seq.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in seq {
        if v >= n || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

/// True iff `seq` visits every vertex once and consecutive vertices,
/// including the closing pair, are adjacent.
pub fn verify_hamilton_cycle(g: &Graph, seq: &[usize]) -> bool {
    let n = g.n();
    if n < 3 || !is_permutation(n, seq) {
        return false;
    }
    (0..n).all(|i| g.has_edge(seq[i], seq[(i + 1) % n]))
}

pub fn verify_hamilton_path(g: &Graph, seq: &[usize]) -> bool {
    if !is_permutation(g.n(), seq) || seq.is_empty() {
        return false;
    }
    seq.windows(2).all(|w| g.has_edge(w[0], w[1]))
}

/// Checks a path on a subset of vertices: no repeats, consecutive pairs adjacent.
pub fn is_path_in(g: &Graph, seq: &[usize]) -> bool {
    let mut seen = vec![false; g.n()];
    for &v in seq {
        if v >= g.n() || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    seq.windows(2).all(|w| g.has_edge(w[0], w[1]))
}

/// An ordered vertex list certifying a Hamilton cycle (closing edge implied).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleCertificate {
    pub seq: Vec<usize>,
}

/// An ordered vertex list certifying a Hamilton path.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathCertificate {
    pub seq: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators as gen;

    fn set(v: &[usize]) -> VertexSet {
        VertexSet::new(v.to_vec()).unwrap()
    }

    #[test]
    fn pair_count_examples() {
        let k3 = gen::complete(3);
        assert_eq!(pair_count(&k3, &set(&[0, 1, 2]), &set(&[0, 1, 2])).unwrap(), 6);
        let k4 = gen::complete(4);
        assert_eq!(pair_count(&k4, &set(&[0, 1]), &set(&[2, 3])).unwrap(), 4);
        let p = gen::path(3);
        assert_eq!(pair_count(&p, &set(&[0, 2]), &set(&[1])).unwrap(), 2);
        assert!(matches!(
            pair_count(&p, &set(&[0, 5]), &set(&[1])),
            Err(Error::InvalidSet(_))
        ));
    }

    #[test]
    fn neighborhood_examples() {
        let star = gen::star(4);
        assert_eq!(neighborhood(&star, &set(&[0])).unwrap(), set(&[1, 2, 3, 4]));
        assert!(neighborhood(&star, &VertexSet::empty()).unwrap().is_empty());
        let c5 = gen::cycle(5);
        assert_eq!(neighborhood(&c5, &set(&[0])).unwrap(), set(&[1, 4]));
    }

    #[test]
    fn dirac_examples() {
        let k6 = gen::complete(6);
        assert_eq!(min_degree(&k6), 5);
        assert!(is_dirac(&k6).unwrap());
        let two = gen::disjoint_union(&gen::complete(5), &gen::complete(5));
        assert_eq!(min_degree(&two), 4);
        assert!(!is_dirac(&two).unwrap());
        assert!(is_dirac(&gen::cycle(4)).unwrap());
        assert!(matches!(is_dirac(&gen::complete(2)), Err(Error::Domain(_))));
    }

    #[test]
    fn induced_subgraph_examples() {
        let (h, map) = induced_subgraph(&gen::complete(5), &set(&[1, 3, 4])).unwrap();
        assert_eq!((h.n(), h.m()), (3, 3));
        assert_eq!(map, vec![1, 3, 4]);
        let (p, _) = induced_subgraph(&gen::cycle(5), &set(&[0, 1, 2])).unwrap();
        assert_eq!(p.edges(), &[(0, 1), (1, 2)]);
        let (one, _) = induced_subgraph(&gen::cycle(5), &set(&[3])).unwrap();
        assert_eq!((one.n(), one.m()), (1, 0));
        assert!(induced_subgraph(&gen::cycle(5), &VertexSet::empty()).is_err());
    }

    #[test]
    fn hamilton_certificates() {
        let c5 = gen::cycle(5);
        assert!(verify_hamilton_cycle(&c5, &[0, 1, 2, 3, 4]));
        assert!(!verify_hamilton_cycle(&c5, &[0, 1, 2, 3]));
        assert!(verify_hamilton_cycle(&gen::complete(4), &[0, 2, 1, 3]));
        assert!(!verify_hamilton_cycle(&c5, &[0, 1, 2, 3, 3]));
        assert!(verify_hamilton_path(&c5, &[1, 2, 3, 4, 0]));
    }

    #[test]
    fn text_and_json_formats() {
        let g = Graph::parse_text("3 2\n0 1\n1 2\n").unwrap();
        assert_eq!(g.m(), 2);
        assert_eq!(Graph::parse_text(&g.to_text()).unwrap(), g);
        assert_eq!(Graph::parse_json(&g.to_json()).unwrap(), g);
        assert!(Graph::parse_text("3 2\n0 1\n0 1\n").is_err());
        assert!(Graph::parse_text("3 1\n1 1\n").is_err());
        assert!(Graph::parse_text("3 1\n2 1\n").is_err());
        assert!(Graph::parse_text("3 2\n0 1\n").is_err());
        assert!(Graph::parse_json(r#"{"n":3,"edges":[[0,1],[1,0]]}"#).is_err());
        assert!(Graph::parse_json(r#"{"n":3,"edges":[[2,2]]}"#).is_err());
        assert!(Graph::parse(r#"{"n":3,"edges":[[2,1]]}"#).is_ok());
    }

    #[test]
    fn vertex_set_rejects_duplicates() {
        assert!(VertexSet::new(vec![1, 1]).is_err());
        assert!(set(&[3, 9]).validate(5).is_err());
        assert_eq!(set(&[0, 2]).complement(4), set(&[1, 3]));
    }
}
