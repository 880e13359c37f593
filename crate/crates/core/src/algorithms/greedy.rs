use alloc::vec;

use super::{Algorithm, RunRecord, TracePoint};
use crate::pareto::check_value;
use crate::{OracleCounter, PartitionMatroid, Result, SetFunction, Solution};

/// Deterministic greedy under a partition matroid.
///
/// Starts from `∅` and repeatedly adds the feasible element with the largest
/// marginal gain (lowest index on ties) while that gain is strictly positive.
/// Each candidate costs one oracle call, plus one for `f(∅)`.
pub fn greedy<F: SetFunction + ?Sized>(
    f: &F,
    m: &PartitionMatroid,
    counter: &mut OracleCounter,
) -> Result<RunRecord> {
    let n = m.n();
    let start = counter.calls();
    let mut x = Solution::empty(n);
    counter.charge();
    let mut value = check_value(f.value(&x))?;
    let mut room: alloc::vec::Vec<usize> = m.thresholds().to_vec();
    let mut trace = vec![TracePoint {
        iteration: 0,
        best: value,
    }];
    let mut steps = 0u64;

    loop {
        let mut best: Option<(usize, f64, f64)> = None;
        for v in 0..n {
            if x.contains(v) || room[m.block_of(v)] == 0 {
                continue;
            }
            counter.charge();
            let with = check_value(f.value_after_flips(&x, value, &[v]))?;
            let gain = with - value;
            if best.is_none_or(|(_, g, _)| gain > g) {
                best = Some((v, gain, with));
            }
        }
        match best {
            Some((v, gain, with)) if gain > 0.0 => {
                x.insert(v);
                room[m.block_of(v)] -= 1;
                value = with;
                steps += 1;
                trace.push(TracePoint {
                    iteration: steps,
                    best: value,
                });
            }
            _ => break,
        }
    }

    Ok(RunRecord {
        algorithm: Algorithm::Greedy,
        seed: None,
        iterations: steps,
        oracle_calls: counter.calls() - start,
        best_value: value,
        best_solution: x,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::{FnSetFunction, ModularFunction, WeightedGraph};

    #[test]
    fn g3_picks_middle_vertex_then_stops() {
        let g = WeightedGraph::new(3, [(0, 1, 0.5), (1, 2, 0.3)]).unwrap();
        let m = PartitionMatroid::new(vec![0, 0, 1], vec![1, 1]).unwrap();
        let mut c = OracleCounter::new();
        let r = greedy(&g, &m, &mut c).unwrap();
        assert_eq!(r.best_solution.to_vec(), [1]);
        assert!((r.best_value - 0.8).abs() < 1e-12);
        // f(∅) + 3 candidates + 1 candidate (element 2)
        assert_eq!(r.oracle_calls, 5);
    }

    #[test]
    fn modular_takes_heaviest() {
        let f = ModularFunction::new(vec![0.5, 0.2, 0.9]).unwrap();
        let m = PartitionMatroid::cardinality(3, 2).unwrap();
        let r = greedy(&f, &m, &mut OracleCounter::new()).unwrap();
        assert_eq!(r.best_solution.to_vec(), [0, 2]);
        assert!((r.best_value - 1.4).abs() < 1e-12);
    }

    #[test]
    fn zero_function_returns_empty() {
        let f = FnSetFunction::new(4, |_: &Solution| 0.0);
        let m = PartitionMatroid::cardinality(4, 2).unwrap();
        let r = greedy(&f, &m, &mut OracleCounter::new()).unwrap();
        assert!(r.best_solution.is_empty());
        assert_eq!(r.oracle_calls, 5);
    }

    #[test]
    fn ties_go_to_lowest_index() {
        let f = ModularFunction::new(vec![0.1, 0.7, 0.7, 0.7]).unwrap();
        let m = PartitionMatroid::cardinality(4, 1).unwrap();
        let r = greedy(&f, &m, &mut OracleCounter::new()).unwrap();
        assert_eq!(r.best_solution.to_vec(), [1]);
    }
}
