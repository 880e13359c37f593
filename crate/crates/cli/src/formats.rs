//! Text graph format and JSON constraint format.
//!
//! Graph files start with `n m` followed by `m` lines `u v w` (0-based,
//! `u < v`). Weights are written in Rust's shortest round-trip notation, so
//! `parse_graph(&write_graph(g)) == g` bit for bit.

use std::fmt::Write as _;

use gsemo_core::objectives::WeightedGraph;
use gsemo_core::PartitionMatroid;
use serde::{Deserialize, Serialize};

/// A line-numbered parse failure; line 0 refers to the file as a whole.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineError {
    pub line: usize,
    pub msg: String,
}

fn err(line: usize, msg: impl Into<String>) -> LineError {
    LineError {
        line,
        msg: msg.into(),
    }
}

pub fn parse_graph(text: &str) -> Result<WeightedGraph, LineError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hl, header) = lines.next().ok_or_else(|| err(0, "empty graph file"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [n, m] = fields[..] else {
        return Err(err(hl, "header must be `n m`"));
    };
    let n: usize = n.parse().map_err(|_| err(hl, format!("bad vertex count {n:?}")))?;
    let m: usize = m.parse().map_err(|_| err(hl, format!("bad edge count {m:?}")))?;

    let mut edges = Vec::with_capacity(m);
    let mut seen = std::collections::HashSet::with_capacity(m);
    for (ln, line) in lines {
        if edges.len() == m {
            return Err(err(ln, format!("more than the {m} declared edges")));
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [u, v, w] = fields[..] else {
            return Err(err(ln, "edge line must be `u v w`"));
        };
        let u: usize = u.parse().map_err(|_| err(ln, format!("bad vertex {u:?}")))?;
        let v: usize = v.parse().map_err(|_| err(ln, format!("bad vertex {v:?}")))?;
        let w: f64 = w.parse().map_err(|_| err(ln, format!("bad weight {w:?}")))?;
        if u == v {
            return Err(err(ln, format!("self-loop on vertex {u}")));
        }
        if u > v {
            return Err(err(ln, format!("edge ({u}, {v}) must satisfy u < v")));
        }
        if v >= n {
            return Err(err(ln, format!("vertex {v} out of range for n = {n}")));
        }
        if !(w.is_finite() && w >= 0.0) {
            return Err(err(ln, format!("weight {w} must be finite and non-negative")));
        }
        if !seen.insert((u, v)) {
            return Err(err(ln, format!("duplicate edge ({u}, {v})")));
        }
        edges.push((u, v, w));
    }
    if edges.len() != m {
        return Err(err(0, format!("header declares {m} edges, found {}", edges.len())));
    }
    WeightedGraph::new(n, edges).map_err(|e| err(0, e.to_string()))
}

pub fn write_graph(g: &WeightedGraph) -> String {
    let mut out = String::with_capacity(16 + g.edges().len() * 28);
    let _ = writeln!(out, "{} {}", g.n(), g.edges().len());
    for e in g.edges() {
        let _ = writeln!(out, "{} {} {}", e.u, e.v, e.w);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintFile {
    pub n: usize,
    pub k: usize,
    pub assignment: Vec<usize>,
    pub thresholds: Vec<usize>,
}

impl ConstraintFile {
    pub fn from_matroid(m: &PartitionMatroid) -> Self {
        ConstraintFile {
            n: m.n(),
            k: m.k(),
            assignment: m.assignment().to_vec(),
            thresholds: m.thresholds().to_vec(),
        }
    }

    pub fn into_matroid(self) -> Result<PartitionMatroid, String> {
        if self.assignment.len() != self.n {
            return Err(format!(
                "n = {} but assignment has {} entries",
                self.n,
                self.assignment.len()
            ));
        }
        if self.thresholds.len() != self.k {
            return Err(format!(
                "k = {} but thresholds has {} entries",
                self.k,
                self.thresholds.len()
            ));
        }
        PartitionMatroid::new(self.assignment, self.thresholds).map_err(|e| e.to_string())
    }
}

/// Weights of a modular objective, stored as `weights.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsFile {
    pub weights: Vec<f64>,
}
