//! Exact Hamiltonicity by backtracking, for small graphs.
//!
//! This shares no code with the rotation engine; tests use it as the
//! ground truth the heuristic search is checked against.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest order accepted by the exact searches.
pub const MAX_ORACLE_N: usize = 20;

fn check_size(g: &Graph) -> Result<()> {
    if g.n() > MAX_ORACLE_N {
        return Err(Error::Budget(format!(
            "exact search limited to n <= {MAX_ORACLE_N}, got {}",
            g.n()
        )));
    }
    Ok(())
}

struct Search<'a> {
    g: &'a Graph,
    full: u32,
    dead: HashSet<(u32, usize)>,
}

impl Search<'_> {
    /// Extends `path` to visit every vertex, ending next to `target` when
    /// `close` is set or exactly at `target` otherwise.
    fn dfs(&mut self, path: &mut Vec<usize>, mask: u32, target: usize, close: bool) -> bool {
        let cur = *path.last().unwrap();
        if mask == self.full {
            return if close {
                self.g.has_edge(cur, target)
            } else {
                cur == target
            };
        }
        if self.dead.contains(&(mask, cur)) {
            return false;
        }
        for &w in self.g.neighbors(cur) {
            if mask & (1 << w) != 0 {
                continue;
            }
            // an open path may only enter its end vertex last
            if !close && w == target && (mask | (1 << w)) != self.full {
                continue;
            }
            path.push(w);
            if self.dfs(path, mask | (1 << w), target, close) {
                return true;
            }
            path.pop();
        }
        self.dead.insert((mask, cur));
        false
    }
}

/// A Hamilton cycle starting at vertex 0, or `None` if there is none.
pub fn hamilton_cycle(g: &Graph) -> Result<Option<Vec<usize>>> {
    check_size(g)?;
    let n = g.n();
    if n < 3 {
        return Ok(None);
    }
    let mut s = Search {
        g,
        full: full_mask(n),
        dead: HashSet::new(),
    };
    let mut path = vec![0];
    Ok(s.dfs(&mut path, 1, 0, true).then_some(path))
}

/// A Hamilton path from `u` to `v`, or `None` if there is none.
pub fn hamilton_path_between(g: &Graph, u: usize, v: usize) -> Result<Option<Vec<usize>>> {
    check_size(g)?;
    let n = g.n();
    if u >= n || v >= n || u == v {
        return Err(Error::Domain("endpoints must be distinct vertices".into()));
    }
    let mut s = Search {
        g,
        full: full_mask(n),
        dead: HashSet::new(),
    };
    let mut path = vec![u];
    Ok(s.dfs(&mut path, 1 << u, v, false).then_some(path))
}

pub fn is_hamiltonian(g: &Graph) -> Result<bool> {
    Ok(hamilton_cycle(g)?.is_some())
}

fn full_mask(n: usize) -> u32 {
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// Every Hamilton cycle of `g`, each given as its sorted list of edge ids.
/// Fails once more than `cap` cycles have been found.
pub fn hamilton_cycle_edge_sets(g: &Graph, cap: usize) -> Result<Vec<Vec<usize>>> {
    check_size(g)?;
    let n = g.n();
    let mut out = Vec::new();
    if n < 3 {
        return Ok(out);
    }
    let mut path = vec![0usize];
    let mut on = vec![false; n];
    on[0] = true;
    enumerate(g, &mut path, &mut on, cap, &mut out)?;
    Ok(out)
}

fn enumerate(g: &Graph, path: &mut Vec<usize>, on: &mut [bool], cap: usize, out: &mut Vec<Vec<usize>>) -> Result<()> {
    let n = g.n();
    let cur = *path.last().unwrap();
    if path.len() == n {
        // each undirected cycle is seen twice; keep the orientation with
        // path[1] < path[n-1]
        if g.has_edge(cur, 0) && path[1] < path[n - 1] {
            let mut ids: Vec<usize> = (0..n).map(|i| g.edge_id(path[i], path[(i + 1) % n]).unwrap()).collect();
            ids.sort_unstable();
            out.push(ids);
            if out.len() > cap {
                return Err(Error::Budget(format!("more than {cap} Hamilton cycles")));
            }
        }
        return Ok(());
    }
    for &w in g.neighbors(cur) {
        if on[w] {
            continue;
        }
        on[w] = true;
        path.push(w);
        enumerate(g, path, on, cap, out)?;
        path.pop();
        on[w] = false;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators as gen;
    use crate::graph::{verify_hamilton_cycle, verify_hamilton_path};

    #[test]
    fn finds_cycles_and_paths() {
        let c = hamilton_cycle(&gen::complete(6)).unwrap().unwrap();
        assert!(verify_hamilton_cycle(&gen::complete(6), &c));
        assert!(hamilton_cycle(&gen::path(5)).unwrap().is_none());
        assert!(hamilton_cycle(&gen::complete_bipartite(5, 4)).unwrap().is_none());
        let p = hamilton_path_between(&gen::cycle(4), 0, 3).unwrap().unwrap();
        assert_eq!(p, vec![0, 1, 2, 3]);
        assert!(verify_hamilton_path(&gen::cycle(4), &p));
    }

    #[test]
    fn no_path_inside_one_clique_of_bridged_pair() {
        let g = gen::two_cliques_bridge(5);
        assert!(hamilton_path_between(&g, 0, 1).unwrap().is_none());
        assert!(hamilton_path_between(&g, 0, 9).unwrap().is_some());
    }

    #[test]
    fn counts_cycles_of_complete_graphs() {
        // (n-1)!/2
        assert_eq!(hamilton_cycle_edge_sets(&gen::complete(5), 100).unwrap().len(), 12);
        assert_eq!(hamilton_cycle_edge_sets(&gen::complete(6), 100).unwrap().len(), 60);
        assert!(hamilton_cycle_edge_sets(&gen::complete(7), 100).is_err());
    }
}
