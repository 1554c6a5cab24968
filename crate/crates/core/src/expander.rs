//! Checks of the three neighbourhood-expansion properties: half-expander,
//! expander and k-bipartite-expander.
//!
//! Size thresholds are rounded conservatively: `|X| ≤ t` uses `⌊t⌋` and
//! `|X| ≥ t` uses `⌈t⌉`. Conditions whose requirement does not depend on
//! `|X|` are monotone in `X`, so only sets of the threshold size are
//! examined for them.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::SpecialFrame;
use crate::graph::{Graph, VertexSet};

/// Largest `n` accepted in exact mode.
pub const MAX_EXACT_N: usize = 16;
pub const DEFAULT_SAMPLES: usize = 10_000;

const EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpanderParams {
    pub epsilon: f64,
    pub r: f64,
    #[serde(default)]
    pub k: usize,
}

impl ExpanderParams {
    pub fn new(epsilon: f64, r: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::Domain(format!("epsilon must lie in (0, 1], got {epsilon}")));
        }
        if r.is_nan() || r < 1.0 {
            return Err(Error::Domain(format!("r must be at least 1, got {r}")));
        }
        Ok(ExpanderParams { epsilon, r, k: 0 })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckMode {
    Exact,
    Sampled { seed: u64, samples: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    /// Sampling found nothing; not a certificate.
    SampledNoCounterexample,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Half,
    Plain,
    Bip,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    /// Condition label, e.g. `"i"`, `"iii"`, `"ii.large"`.
    pub condition: String,
    pub x: VertexSet,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<VertexSet>,
    pub observed: f64,
    pub required: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionReport {
    pub kind: Kind,
    pub verdict: Verdict,
    pub counterexample: Option<Counterexample>,
    pub sets_checked: u64,
    /// `r − 16 ε⁻³ ln n` for half-expanders: how far `r` is from the value
    /// under which the property is known to give rotation endpoints.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hypothesis_slack: Option<f64>,
}

/// Lexicographic `k`-combinations of `0..n`.
struct Combinations {
    n: usize,
    idx: Vec<usize>,
    first: bool,
    done: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            idx: (0..k).collect(),
            first: true,
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        if self.first {
            self.first = false;
            return Some(self.idx.clone());
        }
        let k = self.idx.len();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if self.idx[i] != i + self.n - k {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                return Some(self.idx.clone());
            }
        }
        self.done = true;
        None
    }
}

/// `|N(X) ∩ target|`.
fn neighbours_in(g: &Graph, x: &[usize], target: &[bool], mark: &mut [u32], stamp: u32) -> usize {
    let mut count = 0;
    for &v in x {
        for &w in g.neighbors(v) {
            if target[w] && mark[w] != stamp {
                mark[w] = stamp;
                count += 1;
            }
        }
    }
    count
}

/// One neighbourhood condition: every `X ⊆ universe` with `|X|` in
/// `sizes` must have `|N(X) ∩ target| ≥ required(|X|)`.
struct Condition {
    label: &'static str,
    universe: Vec<usize>,
    sizes: Vec<usize>,
    target: Vec<bool>,
    required: Box<dyn Fn(usize) -> f64>,
}

impl Condition {
    fn small(label: &'static str, universe: Vec<usize>, bound: f64, target: Vec<bool>, r: f64) -> Condition {
        let max = (bound + EPS).floor().max(0.0) as usize;
        let sizes = (1..=max.min(universe.len())).collect();
        Condition {
            label,
            universe,
            sizes,
            target,
            required: Box::new(move |s| r * s as f64),
        }
    }

    fn large(label: &'static str, universe: Vec<usize>, bound: f64, target: Vec<bool>, need: f64) -> Condition {
        let min = (bound - EPS).ceil().max(1.0) as usize;
        let sizes = if min <= universe.len() { vec![min] } else { Vec::new() };
        Condition {
            label,
            universe,
            sizes,
            target,
            required: Box::new(move |_| need),
        }
    }

    fn run(&self, g: &Graph, mode: CheckMode, checked: &mut u64) -> Option<Counterexample> {
        let mut mark = vec![0u32; g.n()];
        let mut stamp = 0u32;
        let mut test = |x: Vec<usize>, checked: &mut u64| -> Option<Counterexample> {
            stamp += 1;
            *checked += 1;
            let got = neighbours_in(g, &x, &self.target, &mut mark, stamp) as f64;
            let need = (self.required)(x.len());
            (got + EPS < need).then(|| Counterexample {
                condition: self.label.into(),
                x: VertexSet::collect(x),
                y: None,
                observed: got,
                required: need,
            })
        };
        for &s in &self.sizes {
            match mode {
                CheckMode::Exact => {
                    for c in Combinations::new(self.universe.len(), s) {
                        let x = c.iter().map(|&i| self.universe[i]).collect();
                        if let Some(cex) = test(x, checked) {
                            return Some(cex);
                        }
                    }
                }
                CheckMode::Sampled { seed, samples } => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (s as u64).rotate_left(32));
                    for _ in 0..samples {
                        let x = sample(&mut rng, self.universe.len(), s)
                            .into_iter()
                            .map(|i| self.universe[i])
                            .collect();
                        if let Some(cex) = test(x, checked) {
                            return Some(cex);
                        }
                    }
                }
            }
        }
        None
    }
}

/// Condition (iii) of the half-expander: disjoint `X`, `Y` of size at
/// least `t` span more than `2n` edges. Only `|X| = |Y| = t` is examined;
/// for each `X` the worst `Y` is the `t` outside vertices with fewest
/// neighbours in `X`.
fn crossing_condition(g: &Graph, t: usize, mode: CheckMode, checked: &mut u64) -> Option<Counterexample> {
    let n = g.n();
    if 2 * t > n {
        return None;
    }
    let limit = 2.0 * n as f64;
    let test = |x: Vec<usize>, checked: &mut u64| -> Option<Counterexample> {
        *checked += 1;
        let mut in_x = vec![false; n];
        for &v in &x {
            in_x[v] = true;
        }
        let mut outside: Vec<(usize, usize)> = (0..n)
            .filter(|&v| !in_x[v])
            .map(|v| (g.neighbors(v).iter().filter(|&&w| in_x[w]).count(), v))
            .collect();
        outside.sort_unstable();
        outside.truncate(t);
        let e: usize = outside.iter().map(|p| p.0).sum();
        (e as f64 <= limit).then(|| Counterexample {
            condition: "iii".into(),
            x: VertexSet::collect(x),
            y: Some(VertexSet::collect(outside.iter().map(|p| p.1))),
            observed: e as f64,
            required: limit,
        })
    };
    match mode {
        CheckMode::Exact => {
            for x in Combinations::new(n, t) {
                if let Some(c) = test(x, checked) {
                    return Some(c);
                }
            }
        }
        CheckMode::Sampled { seed, samples } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
            for _ in 0..samples {
                let x = sample(&mut rng, n, t).into_vec();
                if let Some(c) = test(x, checked) {
                    return Some(c);
                }
            }
        }
    }
    None
}

fn check_mode(g: &Graph, mode: CheckMode) -> Result<()> {
    if mode == CheckMode::Exact && g.n() > MAX_EXACT_N {
        return Err(Error::Budget(format!(
            "exact expansion checks limited to n <= {MAX_EXACT_N}, got {}",
            g.n()
        )));
    }
    Ok(())
}

fn finish(
    kind: Kind,
    mode: CheckMode,
    cex: Option<Counterexample>,
    checked: u64,
    slack: Option<f64>,
) -> ExpansionReport {
    let verdict = match (&cex, mode) {
        (Some(_), _) => Verdict::Fails,
        (None, CheckMode::Exact) => Verdict::Holds,
        (None, CheckMode::Sampled { .. }) => Verdict::SampledNoCounterexample,
    };
    ExpansionReport {
        kind,
        verdict,
        counterexample: cex,
        sets_checked: checked,
        hypothesis_slack: slack,
    }
}

fn half_conditions(n: usize, p: ExpanderParams) -> (Vec<Condition>, usize) {
    let nf = n as f64;
    let all: Vec<usize> = (0..n).collect();
    let everything = vec![true; n];
    let conds = vec![
        Condition::small("i", all.clone(), p.epsilon * nf / p.r, everything.clone(), p.r),
        Condition::large("ii", all, nf / (p.epsilon * p.r), everything, (0.5 - p.epsilon) * nf),
    ];
    let t = ((0.5 - p.epsilon.powf(0.2)) * nf - EPS).ceil().max(1.0) as usize;
    (conds, t)
}

pub fn check_half_expander(g: &Graph, p: ExpanderParams, mode: CheckMode) -> Result<ExpansionReport> {
    check_mode(g, mode)?;
    let n = g.n();
    let (conds, t) = half_conditions(n, p);
    let mut checked = 0;
    let mut cex = None;
    for c in &conds {
        cex = c.run(g, mode, &mut checked);
        if cex.is_some() {
            break;
        }
    }
    if cex.is_none() {
        cex = crossing_condition(g, t, mode, &mut checked);
    }
    let slack = p.r - 16.0 * p.epsilon.powi(-3) * (n.max(2) as f64).ln();
    Ok(finish(Kind::Half, mode, cex, checked, Some(slack)))
}

fn plain_conditions(n: usize, p: ExpanderParams) -> Vec<Condition> {
    let nf = n as f64;
    let all: Vec<usize> = (0..n).collect();
    let everything = vec![true; n];
    vec![
        Condition::small("i", all.clone(), nf / p.r.powf(1.5), everything.clone(), p.r),
        Condition::large("ii", all, nf / p.r.powf(0.75), everything, (1.0 - p.epsilon) * nf),
    ]
}

pub fn check_expander(g: &Graph, p: ExpanderParams, mode: CheckMode) -> Result<ExpansionReport> {
    check_mode(g, mode)?;
    let mut checked = 0;
    for c in plain_conditions(g.n(), p) {
        if let Some(cex) = c.run(g, mode, &mut checked) {
            return Ok(finish(Kind::Plain, mode, Some(cex), checked, None));
        }
    }
    Ok(finish(Kind::Plain, mode, None, checked, None))
}

fn bip_conditions(n: usize, frame: &SpecialFrame, p: ExpanderParams) -> Vec<Condition> {
    let nf = n as f64;
    let v1: Vec<usize> = frame.v1().iter().collect();
    let v2: Vec<usize> = frame.v2().iter().collect();
    let v1s = frame.v1_second();
    let small = nf / p.r.powf(1.5);
    let large = nf / p.r.powf(0.75);
    let to_v2 = frame.v2().mask(n);
    let to_v1s = v1s.mask(n);
    vec![
        Condition::small("i.small", v1.clone(), small, to_v2.clone(), p.r),
        Condition::large("i.large", v1, large, to_v2, (1.0 - p.epsilon) * v2.len() as f64),
        Condition::small("ii.small", v2.clone(), small, to_v1s.clone(), p.r),
        Condition::large("ii.large", v2, large, to_v1s, (1.0 - p.epsilon) * v1s.len() as f64),
    ]
}

/// Checks the k-bipartite-expander conditions for the given frame; `k` is
/// taken from the frame.
pub fn check_bipartite_expander(
    g: &Graph,
    frame: &SpecialFrame,
    p: ExpanderParams,
    mode: CheckMode,
) -> Result<ExpansionReport> {
    check_mode(g, mode)?;
    let mut checked = 0;
    for c in bip_conditions(g.n(), frame, p) {
        if let Some(cex) = c.run(g, mode, &mut checked) {
            return Ok(finish(Kind::Bip, mode, Some(cex), checked, None));
        }
    }
    Ok(finish(Kind::Bip, mode, None, checked, None))
}

/// Re-evaluates a counterexample from scratch; true iff it violates the
/// named condition.
pub fn witness_violates(
    g: &Graph,
    kind: Kind,
    p: ExpanderParams,
    frame: Option<&SpecialFrame>,
    cex: &Counterexample,
) -> bool {
    let n = g.n();
    let nf = n as f64;
    let x = &cex.x;
    if x.validate(n).is_err() {
        return false;
    }
    let nx = match crate::graph::neighborhood(g, x) {
        Ok(s) => s,
        Err(_) => return false,
    };
    let s = x.len() as f64;
    match (kind, cex.condition.as_str()) {
        (Kind::Half, "i") => s <= p.epsilon * nf / p.r + EPS && (nx.len() as f64) < p.r * s,
        (Kind::Half, "ii") => s + EPS >= nf / (p.epsilon * p.r) && (nx.len() as f64) < (0.5 - p.epsilon) * nf,
        (Kind::Half, "iii") => {
            let Some(y) = &cex.y else { return false };
            let t = (0.5 - p.epsilon.powf(0.2)) * nf;
            x.intersection(y).is_empty()
                && s + EPS >= t
                && y.len() as f64 + EPS >= t
                && crate::graph::pair_count(g, x, y)
                    .map(|e| e as f64 <= 2.0 * nf)
                    .unwrap_or(false)
        }
        (Kind::Plain, "i") => s <= nf / p.r.powf(1.5) + EPS && (nx.len() as f64) < p.r * s,
        (Kind::Plain, "ii") => s + EPS >= nf / p.r.powf(0.75) && (nx.len() as f64) < (1.0 - p.epsilon) * nf,
        (Kind::Bip, label) => {
            let Some(fr) = frame else { return false };
            let (side, target) = if label.starts_with("ii") {
                (fr.v2().clone(), fr.v1_second())
            } else {
                (fr.v1().clone(), fr.v2().clone())
            };
            if !x.is_subset(&side) {
                return false;
            }
            let hit = nx.intersection(&target).len() as f64;
            if label.ends_with("small") {
                s <= nf / p.r.powf(1.5) + EPS && hit < p.r * s
            } else {
                s + EPS >= nf / p.r.powf(0.75) && hit < (1.0 - p.epsilon) * target.len() as f64
            }
        }
        _ => false,
    }
}
