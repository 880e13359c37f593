#![allow(dead_code)]

use gsemo_core::instances::{generate_graph, EdgeUniverse};
use gsemo_core::objectives::{WeightedCoverage, WeightedGraph};
use gsemo_core::rng::rng_from_seed;
use gsemo_core::PartitionMatroid;
use rand::Rng;

pub fn g3() -> WeightedGraph {
    WeightedGraph::new(3, [(0, 1, 0.5), (1, 2, 0.3)]).unwrap()
}

pub fn random_graph(n: usize, edges: usize, seed: u64) -> WeightedGraph {
    let density = edges as f64 / (n * n) as f64;
    generate_graph(n, density, EdgeUniverse::Unordered, &mut rng_from_seed(seed)).unwrap()
}

/// Arbitrary (not necessarily balanced) partition with random thresholds.
pub fn random_matroid<R: Rng>(n: usize, k: usize, rng: &mut R) -> PartitionMatroid {
    let mut assignment: Vec<usize> = (0..n).map(|e| e % k).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        assignment.swap(i, j);
    }
    let sizes: Vec<usize> = (0..k).map(|b| assignment.iter().filter(|&&a| a == b).count()).collect();
    let thresholds = sizes.iter().map(|&s| rng.random_range(1..=s)).collect();
    PartitionMatroid::new(assignment, thresholds).unwrap()
}

pub fn random_coverage<R: Rng>(n: usize, items: usize, rng: &mut R) -> WeightedCoverage {
    let covers = (0..n)
        .map(|_| (0..items).filter(|_| rng.random_bool(0.3)).collect())
        .collect();
    let weights = (0..items).map(|_| rng.random::<f64>()).collect();
    WeightedCoverage::new(covers, weights).unwrap()
}
