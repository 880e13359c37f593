//! Maximizing non-negative set functions under partition matroid constraints.
//!
//! The crate is `no_std` (it needs `alloc`). It provides:
//!
//! * [`Solution`], [`PartitionMatroid`] and the bi-objective machinery
//!   ([`BiValue`], [`dominance`], [`OracleCounter`]) shared by the solvers;
//! * set-function oracles in [`objectives`]: undirected max-cut, modular and
//!   weighted-coverage functions;
//! * the deterministic [`greedy`] baseline and the [`gsemo`] Pareto optimizer;
//! * exhaustive evaluators for the structural quantities used by the
//!   approximation guarantees ([`analysis`]);
//! * the random benchmark generators ([`instances`]) and the signed-rank
//!   methodology used to compare solvers ([`stats`]).
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod algorithms;
pub mod analysis;
mod error;
pub mod instances;
mod matroid;
pub mod objectives;
mod pareto;
pub mod rng;
mod solution;
pub mod stats;

pub use algorithms::{greedy, gsemo, Algorithm, GsemoParams, Population, RunRecord, TracePoint};
pub use error::{Error, Result};
pub use matroid::PartitionMatroid;
pub use objectives::SetFunction;
pub use pareto::{dominance, evaluate_bi, BiValue, Dominance, Fitness, OracleCounter};
pub use solution::Solution;
