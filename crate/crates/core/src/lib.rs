//! Hamiltonicity tools for Dirac graphs: structural classification, Pósa
//! rotation–extension, bipartite frames, expansion checks, random-subgraph
//! threshold experiments and a biased Maker-Breaker game engine.

pub mod classify;
pub mod cli;
pub mod error;
pub mod expander;
pub mod frame;
pub mod game;
pub mod generators;
pub mod graph;
pub mod lab;
pub mod oracle;
pub mod rotation;
pub mod service;

pub use error::{Error, Result};
pub use graph::{Graph, VertexSet};
