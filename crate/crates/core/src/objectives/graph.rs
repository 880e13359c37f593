use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::SetFunction;
use crate::{Error, Result, Solution};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

/// Undirected graph with non-negative edge weights; its cut function
/// `f(X) = Σ_{ {u,v} : |{u,v} ∩ X| = 1 } w(u,v)` is submodular, symmetric and
/// generally non-monotone.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl WeightedGraph {
    /// Requires `u < v < n`, no repeated pair and finite `w >= 0` for every edge.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let edges: Vec<Edge> = edges.into_iter().map(|(u, v, w)| Edge { u, v, w }).collect();
        let mut adjacency = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            if e.u == e.v {
                return Err(Error::InvalidGraph(format!("edge {i} is a self-loop on {}", e.u)));
            }
            if e.u > e.v {
                return Err(Error::InvalidGraph(format!(
                    "edge {i} ({}, {}) must satisfy u < v",
                    e.u, e.v
                )));
            }
            if e.v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge {i} references vertex {} but n = {n}",
                    e.v
                )));
            }
            if !(e.w.is_finite() && e.w >= 0.0) {
                return Err(Error::InvalidGraph(format!("edge {i} has weight {}", e.w)));
            }
            adjacency[e.u].push((e.v, e.w));
            adjacency[e.v].push((e.u, e.w));
        }
        for (u, list) in adjacency.iter().enumerate() {
            let mut nbrs: Vec<usize> = list.iter().map(|&(v, _)| v).collect();
            nbrs.sort_unstable();
            if let Some(pair) = nbrs.windows(2).find(|p| p[0] == p[1]) {
                let (a, b) = (u.min(pair[0]), u.max(pair[0]));
                return Err(Error::InvalidGraph(format!("duplicate edge ({a}, {b})")));
            }
        }
        Ok(WeightedGraph {
            n,
            edges,
            adjacency,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, u: usize) -> &[(usize, f64)] {
        &self.adjacency[u]
    }

    pub fn cut_value(&self, x: &Solution) -> f64 {
        assert_eq!(x.len(), self.n, "solution length does not match vertex count");
        self.edges
            .iter()
            .filter(|e| x.contains(e.u) != x.contains(e.v))
            .map(|e| e.w)
            .fold(0.0, |acc, w| acc + w)
    }
}

impl SetFunction for WeightedGraph {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn value(&self, x: &Solution) -> f64 {
        self.cut_value(x)
    }

    fn value_after_flips(&self, x: &Solution, value_x: f64, flips: &[usize]) -> f64 {
        let member = |u: usize, applied: &[usize]| x.contains(u) ^ applied.contains(&u);
        let mut value = value_x;
        for (i, &v) in flips.iter().enumerate() {
            let applied = &flips[..i];
            let side = member(v, applied);
            for &(u, w) in &self.adjacency[v] {
                if member(u, applied) == side {
                    value += w;
                } else {
                    value -= w;
                }
            }
        }
        // cancellation can leave a tiny negative residue on an empty cut
        if value <= 0.0 && value > -1e-9 {
            0.0
        } else {
            value
        }
    }
}
