//! Named strategies for graph boards, shared by the CLI and the service.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::dirac::ClaimLog;
use super::{
    maker_dirac_strategy, Bias, GreedyBlockBreaker, MinimaxStrategy, PotentialBreaker, RandomStrategy, Strategy,
    WinningFamily,
};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::oracle;

/// Cap on the number of Hamilton cycles materialized as a winning family.
pub const MAX_FAMILY: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    Dirac,
    Random,
    Minimax,
    Potential,
    GreedyBlock,
}

impl Engine {
    fn as_str(self) -> &'static str {
        match self {
            Engine::Dirac => "dirac",
            Engine::Random => "random",
            Engine::Minimax => "minimax",
            Engine::Potential => "potential",
            Engine::GreedyBlock => "greedy-block",
        }
    }

    pub fn plays_maker(self) -> bool {
        matches!(self, Engine::Dirac | Engine::Random | Engine::Minimax)
    }

    pub fn plays_breaker(self) -> bool {
        !matches!(self, Engine::Dirac)
    }

    pub fn needs_family(self) -> bool {
        matches!(self, Engine::Minimax | Engine::Potential)
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Engine> {
        Ok(match s {
            "dirac" => Engine::Dirac,
            "random" => Engine::Random,
            "minimax" => Engine::Minimax,
            "potential" => Engine::Potential,
            "greedy-block" => Engine::GreedyBlock,
            _ => return Err(Error::Domain(format!("unknown strategy `{s}`"))),
        })
    }
}

/// The Hamiltonicity family of `g`: edge sets of all its Hamilton cycles.
pub fn hamilton_family(g: &Graph) -> Result<WinningFamily> {
    let sets = oracle::hamilton_cycle_edge_sets(g, MAX_FAMILY)?;
    if sets.is_empty() {
        return Err(Error::Domain("the host has no Hamilton cycle".into()));
    }
    WinningFamily::new(g.m(), sets)
}

/// A constructed Maker strategy, with the Dirac claim log when there is one.
pub struct MakerEngine {
    pub strategy: Box<dyn Strategy>,
    pub log: Option<ClaimLog>,
}

pub fn build_maker(
    kind: Engine,
    g: &Graph,
    bias: Bias,
    family: Option<&WinningFamily>,
    seed: u64,
    beta: f64,
) -> Result<MakerEngine> {
    match kind {
        Engine::Dirac => {
            if bias.maker != 1 {
                return Err(Error::Domain("the Dirac Maker plays (1:b) games only".into()));
            }
            let plan = maker_dirac_strategy(g, bias.breaker, seed, beta)?;
            Ok(MakerEngine {
                strategy: plan.strategy,
                log: Some(plan.log),
            })
        }
        Engine::Random => Ok(MakerEngine {
            strategy: Box::new(RandomStrategy),
            log: None,
        }),
        Engine::Minimax => Ok(MakerEngine {
            strategy: Box::new(MinimaxStrategy::new(need(family)?, bias)?),
            log: None,
        }),
        Engine::Potential | Engine::GreedyBlock => Err(Error::Domain(format!("`{kind}` is a Breaker strategy"))),
    }
}

pub fn build_breaker(kind: Engine, g: &Graph, bias: Bias, family: Option<&WinningFamily>) -> Result<Box<dyn Strategy>> {
    Ok(match kind {
        Engine::Random => Box::new(RandomStrategy),
        Engine::Minimax => Box::new(MinimaxStrategy::new(need(family)?, bias)?),
        Engine::Potential => Box::new(PotentialBreaker::new(need(family)?.clone())),
        Engine::GreedyBlock => Box::new(GreedyBlockBreaker::new(g.clone())),
        Engine::Dirac => return Err(Error::Domain("`dirac` is a Maker strategy".into())),
    })
}

fn need(family: Option<&WinningFamily>) -> Result<&WinningFamily> {
    family.ok_or_else(|| Error::Domain("this strategy needs an explicit winning family".into()))
}
