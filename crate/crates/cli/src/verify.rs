//! Brute-force bound verification for tiny instances.

use gsemo_core::analysis::{BoundReport, EPSILON_LIMIT, TOLERANCE};
use gsemo_core::{greedy, gsemo, Error, GsemoParams, OracleCounter, PartitionMatroid, RunRecord};
use serde::Serialize;

use crate::bundle::Bundle;
use crate::error::Result;

/// `10 · ⌈e · d̄ · n · (d + 1)⌉`.
pub fn default_iterations(m: &PartitionMatroid) -> u64 {
    let (n, d, dbar) = (m.n() as f64, m.capacity() as f64, m.min_threshold() as f64);
    10 * (std::f64::consts::E * dbar * n * (d + 1.0)).ceil() as u64
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckedRun {
    pub algorithm: String,
    pub seed: Option<u64>,
    pub iterations: u64,
    pub oracle_calls: u64,
    pub value: f64,
    pub solution: Vec<usize>,
    pub feasible: bool,
    pub at_most_opt: bool,
    pub meets_theorem1: bool,
    pub meets_theorem2: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub instance_id: String,
    pub objective: String,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub dbar: usize,
    pub opt_value: f64,
    pub opt_solution: Vec<usize>,
    pub epsilon_term: f64,
    pub gamma_term: Option<f64>,
    pub monotone: bool,
    pub submodular: Option<bool>,
    pub theorem1_bound: f64,
    pub theorem2_bound: Option<f64>,
    pub greedy: CheckedRun,
    pub gsemo: CheckedRun,
}

fn check(r: &RunRecord, m: &PartitionMatroid, b: &BoundReport) -> CheckedRun {
    CheckedRun {
        algorithm: r.algorithm.name().to_string(),
        seed: r.seed,
        iterations: r.iterations,
        oracle_calls: r.oracle_calls,
        value: r.best_value,
        solution: r.best_solution.to_vec(),
        feasible: m.is_feasible(&r.best_solution),
        at_most_opt: r.best_value <= b.opt_value + TOLERANCE,
        meets_theorem1: r.best_value >= b.theorem1_bound - TOLERANCE,
        meets_theorem2: b.theorem2_bound.map(|t| r.best_value >= t - TOLERANCE),
    }
}

/// Refuses instances above [`EPSILON_LIMIT`] elements.
pub fn cmd_verify(bundle: &Bundle, iterations: Option<u64>, seed: u64) -> Result<VerifyReport> {
    let m = &bundle.constraint;
    let n = m.n();
    if n > EPSILON_LIMIT {
        return Err(Error::TooLarge {
            routine: "verify",
            n,
            limit: EPSILON_LIMIT,
        }
        .into());
    }
    let f = &bundle.objective;
    let bounds = BoundReport::compute(f, m)?;
    let g = greedy(f, m, &mut OracleCounter::new())?;
    let params = GsemoParams {
        iterations: iterations.unwrap_or_else(|| default_iterations(m)),
        seed,
        trace_stride: None,
    };
    let e = gsemo(f, m, &params, &mut OracleCounter::new())?;
    Ok(VerifyReport {
        instance_id: bundle.meta.instance_id.clone(),
        objective: bundle.objective.kind().to_string(),
        n,
        k: m.k(),
        d: m.capacity(),
        dbar: m.min_threshold(),
        opt_value: bounds.opt_value,
        opt_solution: bounds.opt_solution.to_vec(),
        epsilon_term: bounds.epsilon_term,
        gamma_term: bounds.gamma_term,
        monotone: bounds.monotone,
        submodular: bounds.submodular,
        theorem1_bound: bounds.theorem1_bound,
        theorem2_bound: bounds.theorem2_bound,
        greedy: check(&g, m, &bounds),
        gsemo: check(&e, m, &bounds),
    })
}
