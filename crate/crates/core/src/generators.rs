//! Graph families used by tests, experiments and the CLI.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{Graph, GraphBuilder};

pub fn complete(n: usize) -> Graph {
    let mut b = GraphBuilder::new(n);
    for u in 0..n {
        for v in u + 1..n {
            b.add_edge_if_absent(u, v);
        }
    }
    b.build()
}

pub fn cycle(n: usize) -> Graph {
    let mut b = GraphBuilder::new(n);
    for v in 0..n {
        b.add_edge_if_absent(v, (v + 1) % n);
    }
    b.build()
}

pub fn path(n: usize) -> Graph {
    let mut b = GraphBuilder::new(n);
    for v in 1..n {
        b.add_edge_if_absent(v - 1, v);
    }
    b.build()
}

/// `K_{1,k}` with the centre at vertex 0.
pub fn star(k: usize) -> Graph {
    let mut b = GraphBuilder::new(k + 1);
    for v in 1..=k {
        b.add_edge_if_absent(0, v);
    }
    b.build()
}

/// `K_{a,b}` with sides `0..a` and `a..a+b`.
pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let mut g = GraphBuilder::new(a + b);
    for u in 0..a {
        for v in a..a + b {
            g.add_edge_if_absent(u, v);
        }
    }
    g.build()
}

pub fn disjoint_union(g: &Graph, h: &Graph) -> Graph {
    let mut b = GraphBuilder::new(g.n() + h.n());
    for &(u, v) in g.edges() {
        b.add_edge_if_absent(u, v);
    }
    for &(u, v) in h.edges() {
        b.add_edge_if_absent(g.n() + u, g.n() + v);
    }
    b.build()
}

/// Two copies of `K_m` on `0..m` and `m..2m` joined by the perfect matching
/// `{i, m+i}`. Dirac for every `m ≥ 2`.
pub fn two_cliques_matching(m: usize) -> Graph {
    let mut b = GraphBuilder::new(2 * m);
    for base in [0, m] {
        for u in 0..m {
            for v in u + 1..m {
                b.add_edge_if_absent(base + u, base + v);
            }
        }
    }
    for i in 0..m {
        b.add_edge_if_absent(i, m + i);
    }
    b.build()
}

/// Two copies of `K_m` joined by the single edge `{m-1, m}`.
pub fn two_cliques_bridge(m: usize) -> Graph {
    let mut b = GraphBuilder::new(2 * m);
    for base in [0, m] {
        for u in 0..m {
            for v in u + 1..m {
                b.add_edge_if_absent(base + u, base + v);
            }
        }
    }
    if m > 0 {
        b.add_edge_if_absent(m - 1, m);
    }
    b.build()
}

/// A random graph on `n` vertices with minimum degree at least `⌈n/2⌉`.
///
/// A base graph is drawn from one of three shapes (dense `G(n, p)`, two
/// overlapping cliques with sparse crossing edges, or a near-complete
/// bipartite graph), and deficient vertices are then topped up with random
/// non-neighbours.
pub fn random_dirac<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Graph {
    let need = n.div_ceil(2);
    let mut b = GraphBuilder::new(n);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    match rng.random_range(0..3) {
        0 => {
            let p = rng.random_range(0.3..0.8);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random_bool(p) {
                        b.add_edge_if_absent(u, v);
                    }
                }
            }
        }
        1 => {
            let half = n / 2;
            for u in 0..n {
                for v in u + 1..n {
                    let same = (u < half) == (v < half);
                    if same || rng.random_bool(0.05) {
                        b.add_edge_if_absent(perm[u], perm[v]);
                    }
                }
            }
        }
        _ => {
            let side = n.div_ceil(2);
            for u in 0..n {
                for v in u + 1..n {
                    let cross = (u < side) != (v < side);
                    if (cross && rng.random_bool(0.9)) || (!cross && rng.random_bool(0.05)) {
                        b.add_edge_if_absent(perm[u], perm[v]);
                    }
                }
            }
        }
    }
    for v in 0..n {
        while b.degree(v) < need {
            let w = rng.random_range(0..n);
            b.add_edge_if_absent(v, w);
        }
    }
    b.build()
}

/// Uniform `G(n, p)`.
pub fn gnp<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut b = GraphBuilder::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                b.add_edge_if_absent(u, v);
            }
        }
    }
    b.build()
}

/// Named families accepted on the command line, e.g. `K12`, `C5`,
/// `K5,5`, `2K6M` (two cliques plus matching), `2K5B` (two cliques plus bridge).
pub fn by_name(name: &str) -> Option<Graph> {
    let s = name.trim();
    if let Some(rest) = s.strip_prefix("2K") {
        if let Some(m) = rest.strip_suffix('M') {
            return m.parse().ok().map(two_cliques_matching);
        }
        if let Some(m) = rest.strip_suffix('B') {
            return m.parse().ok().map(two_cliques_bridge);
        }
        return None;
    }
    if let Some(rest) = s.strip_prefix('K') {
        if let Some((a, b)) = rest.split_once(',') {
            return Some(complete_bipartite(a.parse().ok()?, b.parse().ok()?));
        }
        return rest.parse().ok().map(complete);
    }
    if let Some(rest) = s.strip_prefix('C') {
        return rest.parse().ok().filter(|&n: &usize| n >= 3).map(cycle);
    }
    if let Some(rest) = s.strip_prefix('P') {
        return rest.parse().ok().map(path);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{is_dirac, min_degree};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn families_have_expected_sizes() {
        assert_eq!(complete(6).m(), 15);
        assert_eq!(cycle(5).m(), 5);
        assert_eq!(complete_bipartite(4, 3).m(), 12);
        assert_eq!(two_cliques_matching(6).m(), 2 * 15 + 6);
        assert_eq!(two_cliques_bridge(5).m(), 2 * 10 + 1);
        assert!(is_dirac(&two_cliques_matching(8)).unwrap());
        assert!(!is_dirac(&two_cliques_bridge(5)).unwrap());
    }

    #[test]
    fn random_dirac_is_dirac() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 3..30 {
            let g = random_dirac(n, &mut rng);
            assert!(2 * min_degree(&g) >= n, "n = {n}");
        }
    }

    #[test]
    fn names() {
        assert_eq!(by_name("K6").unwrap().m(), 15);
        assert_eq!(by_name("K5,4").unwrap().n(), 9);
        assert_eq!(by_name("2K6M").unwrap().n(), 12);
        assert_eq!(by_name("2K5B").unwrap().m(), 21);
        assert!(by_name("Q3").is_none());
    }
}
