//! Random subgraphs `G_p`, Hamiltonicity sweeps over a grid of `p`, and
//! the two tail bounds used in the analysis.
//!
//! Every trial draws one uniform per edge from its own ChaCha stream and
//! keeps an edge at level `p` iff its uniform is below `p`. Samples at
//! different `p` within a trial are therefore nested, which makes the
//! per-trial success indicator monotone in `p`.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{min_degree, verify_hamilton_cycle, Graph};
use crate::oracle;
use crate::rotation::{find_hamilton_cycle, Budget};

fn check_p(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("p must lie in [0, 1], got {p}")));
    }
    Ok(())
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// One uniform in `[0, 1)` per edge of `g`, in edge-id order.
pub fn edge_uniforms(g: &Graph, seed: u64, trial: u64) -> Vec<f64> {
    let mut rng = trial_rng(seed, trial);
    (0..g.m()).map(|_| rng.random::<f64>()).collect()
}

/// Keeps each edge whose uniform is below `p`.
pub fn threshold_subgraph(g: &Graph, uniforms: &[f64], p: f64) -> Graph {
    g.filter_edges(|id, _| uniforms[id] < p)
}

/// `G_p`: every edge kept independently with probability `p`.
pub fn sample_subgraph(g: &Graph, p: f64, seed: u64) -> Result<Graph> {
    check_p(p)?;
    Ok(threshold_subgraph(g, &edge_uniforms(g, seed, 0), p))
}

/// 95% Wilson score interval.
pub fn wilson95(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054_f64;
    let n = trials as f64;
    let ph = successes as f64 / n;
    let denom = 1.0 + z * z / n;
    let centre = (ph + z * z / (2.0 * n)) / denom;
    let half = z * (ph * (1.0 - ph) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub p: f64,
    pub trials: usize,
    pub successes: usize,
    pub phat: f64,
    pub wilson95_lo: f64,
    pub wilson95_hi: f64,
    pub mean_steps: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepResult {
    pub graph: String,
    pub budget: Budget,
    pub rows: Vec<SweepRow>,
    /// `outcomes[t][j]`: whether trial `t` succeeded at `rows[j].p`.
    pub outcomes: Vec<Vec<bool>>,
}

impl SweepResult {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(row).map_err(|e| Error::Io(std::io::Error::other(e)))?;
        }
        w.flush()?;
        Ok(())
    }

    /// Trials whose success indicator drops as `p` grows.
    pub fn monotonicity_violations(&self) -> usize {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by(|&a, &b| self.rows[a].p.total_cmp(&self.rows[b].p));
        self.outcomes
            .iter()
            .filter(|o| order.windows(2).any(|w| o[w[0]] && !o[w[1]]))
            .count()
    }
}

/// Whether a Hamilton cycle was found, and the steps spent.
fn hamiltonian_trial(h: &Graph, budget: Budget, seed: u64) -> Result<(Option<Vec<usize>>, usize)> {
    let n = h.n();
    // cheap exact refutations
    if n < 3 || min_degree(h) < 2 || !h.is_connected() {
        return Ok((None, 0));
    }
    let report = find_hamilton_cycle(h, budget, seed)?;
    if let Some(c) = report.found {
        return Ok((Some(c.seq), report.steps));
    }
    if n <= 16 {
        return Ok((oracle::hamilton_cycle(h)?, report.steps));
    }
    Ok((None, report.steps))
}

/// Runs `trials` coupled trials over `p_list`.
///
/// Within a trial the levels are visited in increasing `p`; a cycle found
/// at a lower level is reused at every higher one after re-verification,
/// since the sampled graphs are nested.
pub fn hamiltonicity_sweep(g: &Graph, p_list: &[f64], trials: usize, budget: Budget, seed: u64) -> Result<SweepResult> {
    for &p in p_list {
        check_p(p)?;
    }
    let mut order: Vec<usize> = (0..p_list.len()).collect();
    order.sort_by(|&a, &b| p_list[a].total_cmp(&p_list[b]));
    let per_trial: Vec<Result<Vec<(bool, usize)>>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let uniforms = edge_uniforms(g, seed, t as u64);
            let mut out = vec![(false, 0); p_list.len()];
            let mut known: Option<Vec<usize>> = None;
            for (level, &j) in order.iter().enumerate() {
                let h = threshold_subgraph(g, &uniforms, p_list[j]);
                if let Some(c) = &known {
                    if verify_hamilton_cycle(&h, c) {
                        out[j] = (true, 0);
                        continue;
                    }
                }
                let engine_seed = seed ^ ((t as u64) << 20) ^ level as u64;
                let (found, steps) = hamiltonian_trial(&h, budget, engine_seed)?;
                if let Some(c) = found {
                    debug_assert!(verify_hamilton_cycle(&h, &c));
                    known = Some(c);
                    out[j] = (true, steps);
                } else {
                    out[j] = (false, steps);
                }
            }
            Ok(out)
        })
        .collect();
    let mut outcomes = Vec::with_capacity(trials);
    for r in per_trial {
        outcomes.push(r?);
    }
    let rows = p_list
        .iter()
        .enumerate()
        .map(|(j, &p)| {
            let successes = outcomes.iter().filter(|o| o[j].0).count();
            let steps: usize = outcomes.iter().map(|o| o[j].1).sum();
            let (lo, hi) = wilson95(successes, trials);
            SweepRow {
                p,
                trials,
                successes,
                phat: if trials == 0 {
                    0.0
                } else {
                    successes as f64 / trials as f64
                },
                wilson95_lo: lo,
                wilson95_hi: hi,
                mean_steps: if trials == 0 { 0.0 } else { steps as f64 / trials as f64 },
            }
        })
        .collect();
    Ok(SweepResult {
        graph: format!("n={} m={}", g.n(), g.m()),
        budget,
        rows,
        outcomes: outcomes
            .into_iter()
            .map(|o| o.into_iter().map(|x| x.0).collect())
            .collect(),
    })
}

/// `p = c · ln n / n`, capped at 1.
pub fn p_from_clogn(c: f64, n: usize) -> f64 {
    let nf = n.max(2) as f64;
    (c * nf.ln() / nf).min(1.0)
}

/// Bound on `P(|X − np| ≥ λ)` for `X ~ Bin(n, p)`: `2·exp(−λ²/(3np))`.
/// Requires `0 ≤ λ ≤ np`.
pub fn chernoff_bound(n: u64, p: f64, lambda: f64) -> Result<f64> {
    check_p(p)?;
    let mean = n as f64 * p;
    if !(lambda >= 0.0 && lambda <= mean) {
        return Err(Error::Domain(format!(
            "lambda must lie in [0, np] = [0, {mean}], got {lambda}"
        )));
    }
    if mean == 0.0 {
        return Ok(2.0);
    }
    Ok(2.0 * (-lambda * lambda / (3.0 * mean)).exp())
}

/// Bound on `P(|X − E X| ≥ t)` for a hypergeometric `X` counting
/// successes among `n` draws: `2·exp(−2t²/n)`.
pub fn hypergeometric_bound(n: u64, t: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("need at least one draw".into()));
    }
    if t < 0.0 {
        return Err(Error::Domain(format!("t must be non-negative, got {t}")));
    }
    Ok(2.0 * (-2.0 * t * t / n as f64).exp())
}
