//! Explicit auxiliary hypergraphs on the edge set of a graph.
//!
//! Each hyperedge is a set of edge ids. Maker of the original game, playing
//! Breaker in the auxiliary game, wants to touch every hyperedge; doing so
//! certifies one of the expansion conditions for Maker's graph.

use serde::{Deserialize, Serialize};

use super::WinningFamily;
use crate::error::{Error, Result};
use crate::graph::Graph;

pub const MAX_N: usize = 10;
pub const MAX_HYPEREDGES: usize = 500_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum AuxKind {
    /// Sets `X` of size `i` against index sets `J ⊂ [3ri]` of size `2ri`.
    H1 { i: usize, r: usize },
    /// Pairs `X`, `Y` of the given sizes.
    H2 { x_size: usize, y_size: usize },
    /// Disjoint `X`, `Y` of size at least `min_size`; all subsets of
    /// `E_{X,Y}` of size `|E_{X,Y}| − slack`.
    H3 { min_size: usize, slack: usize },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AuxFamily {
    pub family: WinningFamily,
    /// Candidate hyperedges before empty ones were dropped.
    pub candidates: usize,
    pub dropped_empty: usize,
    /// The size every hyperedge is supposed to reach.
    pub size_bound: f64,
    /// Hyperedges smaller than `size_bound`.
    pub slack_violations: usize,
}

fn subsets(n: usize, k: usize, mut visit: impl FnMut(&[usize]) -> Result<()>) -> Result<()> {
    if k > n {
        return Ok(());
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx)?;
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return Ok(());
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Edge ids with one endpoint in `x` and the other in `y`, each once.
fn crossing(g: &Graph, x: &[bool], y: &[bool]) -> Vec<usize> {
    g.edges()
        .iter()
        .enumerate()
        .filter(|&(_, &(u, v))| (x[u] && y[v]) || (x[v] && y[u]))
        .map(|(id, _)| id)
        .collect()
}

struct Collector {
    sets: Vec<Vec<usize>>,
    candidates: usize,
    dropped: usize,
    violations: usize,
    bound: f64,
}

impl Collector {
    fn push(&mut self, e: Vec<usize>) -> Result<()> {
        self.candidates += 1;
        if self.candidates > MAX_HYPEREDGES {
            return Err(Error::Budget(format!(
                "more than {MAX_HYPEREDGES} hyperedges; explicit enumeration is infeasible, use implicit mode"
            )));
        }
        if (e.len() as f64) < self.bound {
            self.violations += 1;
        }
        if e.is_empty() {
            self.dropped += 1;
        } else {
            self.sets.push(e);
        }
        Ok(())
    }
}

/// Builds one auxiliary family explicitly. Graphs with more than
/// [`MAX_N`] vertices, or families above [`MAX_HYPEREDGES`], are refused.
pub fn aux_hypergraph(g: &Graph, kind: AuxKind) -> Result<AuxFamily> {
    let n = g.n();
    if n > MAX_N {
        return Err(Error::Budget(format!(
            "explicit auxiliary hypergraphs need n <= {MAX_N}, got {n}; use implicit mode"
        )));
    }
    let nf = n as f64;
    let bound = match kind {
        AuxKind::H1 { i, .. } => nf * i as f64 / 7.0,
        AuxKind::H2 { x_size, y_size } => x_size as f64 * (y_size as f64 - nf / 2.0 - x_size as f64),
        AuxKind::H3 { .. } => 1.0,
    };
    let mut c = Collector {
        sets: Vec::new(),
        candidates: 0,
        dropped: 0,
        violations: 0,
        bound,
    };
    match kind {
        AuxKind::H1 { i, r } => {
            if i == 0 || r == 0 {
                return Err(Error::Domain("H1 needs i, r >= 1".into()));
            }
            let ell = 3 * r * i;
            let block = n / ell;
            if block == 0 {
                return Err(Error::Domain(format!(
                    "3ri = {ell} exceeds n = {n}; the blocks V_(3ri, j) would be empty"
                )));
            }
            let projected = binomial(n, i) * binomial(ell, 2 * r * i);
            if projected > MAX_HYPEREDGES as f64 {
                return Err(Error::Budget(format!("H1 would have {projected} hyperedges")));
            }
            subsets(n, i, |xs| {
                let mut x = vec![false; n];
                for &v in xs {
                    x[v] = true;
                }
                subsets(ell, 2 * r * i, |js| {
                    let mut y = vec![false; n];
                    for &j in js {
                        for v in j * block..(j + 1) * block {
                            y[v] = !x[v];
                        }
                    }
                    c.push(crossing(g, &x, &y))
                })
            })?;
        }
        AuxKind::H2 { x_size, y_size } => {
            let projected = binomial(n, x_size) * binomial(n, y_size);
            if projected > MAX_HYPEREDGES as f64 {
                return Err(Error::Budget(format!("H2 would have {projected} hyperedges")));
            }
            subsets(n, x_size, |xs| {
                let mut x = vec![false; n];
                for &v in xs {
                    x[v] = true;
                }
                subsets(n, y_size, |ys| {
                    let mut y = vec![false; n];
                    for &v in ys {
                        y[v] = !x[v];
                    }
                    c.push(crossing(g, &x, &y))
                })
            })?;
        }
        AuxKind::H3 { min_size, slack } => {
            // every vertex goes to X, Y or neither
            let total = 3usize.pow(n as u32);
            let mut side = vec![0u8; n];
            for code in 0..total {
                let mut t = code;
                for s in side.iter_mut() {
                    *s = (t % 3) as u8;
                    t /= 3;
                }
                let x: Vec<bool> = side.iter().map(|&s| s == 1).collect();
                let y: Vec<bool> = side.iter().map(|&s| s == 2).collect();
                let (nx, ny) = (x.iter().filter(|&&b| b).count(), y.iter().filter(|&&b| b).count());
                // unordered pairs: require the smallest X vertex below the smallest Y vertex
                if nx < min_size.max(1)
                    || ny < min_size.max(1)
                    || side.iter().position(|&s| s != 0) != side.iter().position(|&s| s == 1)
                {
                    continue;
                }
                let e = crossing(g, &x, &y);
                if e.len() <= slack {
                    continue;
                }
                let keep = e.len() - slack;
                let projected = binomial(e.len(), keep);
                if c.candidates as f64 + projected > MAX_HYPEREDGES as f64 {
                    return Err(Error::Budget(format!("H3 would exceed {MAX_HYPEREDGES} hyperedges")));
                }
                subsets(e.len(), keep, |pick| c.push(pick.iter().map(|&k| e[k]).collect()))?;
            }
        }
    }
    Ok(AuxFamily {
        family: WinningFamily::new(g.m(), c.sets)?,
        candidates: c.candidates,
        dropped_empty: c.dropped,
        size_bound: bound,
        slack_violations: c.violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators as gen;

    #[test]
    fn h1_one_hyperedge_per_vertex_and_index_set() {
        let g = gen::complete(8);
        let a = aux_hypergraph(&g, AuxKind::H1 { i: 1, r: 1 }).unwrap();
        // 8 vertices times C(3, 2) index sets
        assert_eq!(a.candidates, 24);
        // recount one hyperedge: X = {5}, J = {0, 1}, blocks {0,1} and {2,3}
        let want: Vec<usize> = [0, 1, 2, 3].iter().map(|&w| g.edge_id(w, 5).unwrap()).collect();
        let mut want = want;
        want.sort();
        assert!(a.family.sets().contains(&want));
        assert!(a.family.sets().iter().all(|e| e.len() == 4 || e.len() == 3));
    }

    #[test]
    fn h2_count_matches_binomials() {
        let g = gen::complete(8);
        let a = aux_hypergraph(&g, AuxKind::H2 { x_size: 1, y_size: 5 }).unwrap();
        assert_eq!(a.candidates, 8 * 56);
        assert_eq!(a.dropped_empty, 0);
    }

    #[test]
    fn h3_small_crossings_contribute_nothing() {
        let g = gen::complete(8);
        let a = aux_hypergraph(&g, AuxKind::H3 { min_size: 3, slack: 16 }).unwrap();
        assert_eq!(a.candidates, 0);
        let b = aux_hypergraph(&gen::complete(6), AuxKind::H3 { min_size: 3, slack: 8 }).unwrap();
        // ten unordered {X, Y} splits of K6 into triples, C(9, 1) subsets each
        assert_eq!(b.candidates, 10 * 9);
    }

    #[test]
    fn caps() {
        assert!(aux_hypergraph(&gen::complete(11), AuxKind::H2 { x_size: 1, y_size: 1 }).is_err());
        assert!(aux_hypergraph(&gen::complete(8), AuxKind::H1 { i: 1, r: 3 }).is_err());
    }
}
