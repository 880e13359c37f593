//! The GREEDY baseline and the GSEMO Pareto optimizer.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::Solution;

mod greedy;
mod gsemo;

pub use greedy::greedy;
pub use gsemo::{gsemo, mutate, survival_update, Gsemo, GsemoParams, Member, Population};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Greedy,
    Gsemo,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Greedy => "greedy",
            Algorithm::Gsemo => "gsemo",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "greedy" => Ok(Algorithm::Greedy),
            "gsemo" => Ok(Algorithm::Gsemo),
            _ => Err(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub iteration: u64,
    pub best: f64,
}

/// Outcome of one solver execution.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub algorithm: Algorithm,
    /// `None` for the deterministic greedy.
    pub seed: Option<u64>,
    /// Iteration budget `T`; for greedy, the number of additions made.
    pub iterations: u64,
    pub oracle_calls: u64,
    pub best_value: f64,
    pub best_solution: Solution,
    pub trace: Vec<TracePoint>,
}
