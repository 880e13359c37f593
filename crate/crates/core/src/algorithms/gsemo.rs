use alloc::vec;
use alloc::vec::Vec;

use rand::distr::{Bernoulli, Distribution};
use rand::Rng;

use super::{Algorithm, RunRecord, TracePoint};
use crate::pareto::check_value;
use crate::rng::{rng_from_seed, ChaCha8Rng};
use crate::{evaluate_bi, BiValue, OracleCounter, PartitionMatroid, Result, SetFunction, Solution};

#[derive(Debug, Clone, PartialEq)]
pub struct Member {
    pub solution: Solution,
    pub value: BiValue,
}

/// Mutually non-dominating archive of feasible solutions.
///
/// Feasible members have pairwise distinct cardinalities in `0..=d`, so the
/// archive never holds more than `d + 1` members.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    members: Vec<Member>,
}

impl Population {
    pub fn singleton(member: Member) -> Self {
        Population {
            members: vec![member],
        }
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Rejects `y` if a member strictly dominates it; otherwise drops every
    /// member `y` weakly dominates and inserts `y`. Returns whether `y` was
    /// inserted.
    pub fn offer(&mut self, y: Member) -> bool {
        if self.members.iter().any(|p| p.value.strictly_dominates(&y.value)) {
            return false;
        }
        self.members.retain(|p| !y.value.weakly_dominates(&p.value));
        self.members.push(y);
        true
    }

    /// The member maximizing `f1`; among equal values, the smallest set.
    pub fn best(&self) -> &Member {
        let mut best = &self.members[0];
        for p in &self.members[1..] {
            if p.value.f1 > best.value.f1
                || (p.value.f1 == best.value.f1 && p.value.f2 > best.value.f2)
            {
                best = p;
            }
        }
        best
    }

    pub fn best_value(&self) -> f64 {
        self.best().value.f1.value().unwrap_or(f64::NEG_INFINITY)
    }

    /// Checks mutual non-domination, feasibility, the `d + 1` size bound and
    /// the presence of the empty set.
    pub fn check_invariants(&self, m: &PartitionMatroid) -> core::result::Result<(), &'static str> {
        if self.members.len() > m.capacity() + 1 {
            return Err("population larger than d + 1");
        }
        for (i, a) in self.members.iter().enumerate() {
            if !a.value.f1.is_feasible() || !m.is_feasible(&a.solution) {
                return Err("infeasible member");
            }
            if a.value.f2 != -(a.solution.cardinality() as i64) {
                return Err("f2 out of sync with cardinality");
            }
            for (j, b) in self.members.iter().enumerate() {
                if i != j && a.value.weakly_dominates(&b.value) {
                    return Err("member weakly dominates another member");
                }
            }
        }
        if !self.members.iter().any(|p| p.solution.is_empty()) {
            return Err("empty solution missing");
        }
        Ok(())
    }
}

/// Functional form of [`Population::offer`].
pub fn survival_update(population: &Population, y: Member) -> Population {
    let mut next = population.clone();
    next.offer(y);
    next
}

fn mutation_distribution(n: usize) -> Option<Bernoulli> {
    (n > 0).then(|| Bernoulli::new(1.0 / n as f64).expect("1/n is a probability"))
}

fn sample_flips<R: Rng + ?Sized>(n: usize, dist: Option<&Bernoulli>, rng: &mut R, flips: &mut Vec<usize>) {
    flips.clear();
    if let Some(dist) = dist {
        flips.extend((0..n).filter(|_| dist.sample(rng)));
    }
}

/// Standard bit mutation: every bit flips independently with probability `1/n`.
pub fn mutate<R: Rng + ?Sized>(x: &Solution, rng: &mut R) -> Solution {
    let n = x.len();
    let mut flips = Vec::new();
    sample_flips(n, mutation_distribution(n).as_ref(), rng, &mut flips);
    let mut y = x.clone();
    for &e in &flips {
        y.flip(e);
    }
    y
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GsemoParams {
    pub iterations: u64,
    pub seed: u64,
    /// Record the best-so-far value every `stride` iterations.
    pub trace_stride: Option<u64>,
}

/// Step-wise GSEMO state, for callers that inspect the population between
/// iterations. [`gsemo`] drives it to completion.
pub struct Gsemo<'a, F: SetFunction + ?Sized> {
    f: &'a F,
    m: &'a PartitionMatroid,
    population: Population,
    rng: ChaCha8Rng,
    dist: Option<Bernoulli>,
    counter: &'a mut OracleCounter,
    iteration: u64,
    flips: Vec<usize>,
}

impl<'a, F: SetFunction + ?Sized> Gsemo<'a, F> {
    /// Evaluates the empty solution (one oracle call) and seeds the archive with it.
    pub fn new(
        f: &'a F,
        m: &'a PartitionMatroid,
        seed: u64,
        counter: &'a mut OracleCounter,
    ) -> Result<Self> {
        let empty = Solution::empty(m.n());
        let value = evaluate_bi(f, m, &empty, counter)?;
        Ok(Gsemo {
            f,
            m,
            population: Population::singleton(Member {
                solution: empty,
                value,
            }),
            rng: rng_from_seed(seed),
            dist: mutation_distribution(m.n()),
            counter,
            iteration: 0,
            flips: Vec::new(),
        })
    }

    pub fn population(&self) -> &Population {
        &self.population
    }

    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    /// One iteration: uniform parent selection, bit mutation, evaluation and
    /// survival. Returns whether the offspring entered the archive.
    pub fn step(&mut self) -> Result<bool> {
        let n = self.m.n();
        let pick = self.rng.random_range(0..self.population.len() as u64) as usize;
        sample_flips(n, self.dist.as_ref(), &mut self.rng, &mut self.flips);
        let parent = &self.population.members[pick];
        let mut child = parent.solution.clone();
        for &e in &self.flips {
            child.flip(e);
        }

        self.counter.charge();
        let value = if self.m.is_feasible(&child) {
            let parent_value = parent.value.f1.value().expect("archive members are feasible");
            let v = self
                .f
                .value_after_flips(&parent.solution, parent_value, &self.flips);
            BiValue::feasible(check_value(v)?, child.cardinality())
        } else {
            BiValue::infeasible(child.cardinality())
        };
        self.iteration += 1;
        Ok(self.population.offer(Member {
            solution: child,
            value,
        }))
    }
}

/// Runs exactly `params.iterations` GSEMO iterations from `{∅}` and returns
/// the archive's best member. Uses `T + 1` oracle calls.
pub fn gsemo<F: SetFunction + ?Sized>(
    f: &F,
    m: &PartitionMatroid,
    params: &GsemoParams,
    counter: &mut OracleCounter,
) -> Result<RunRecord> {
    let start = counter.calls();
    let mut state = Gsemo::new(f, m, params.seed, counter)?;
    let mut trace = Vec::new();
    let stride = params.trace_stride.filter(|&s| s > 0);
    if stride.is_some() {
        trace.push(TracePoint {
            iteration: 0,
            best: state.population.best_value(),
        });
    }
    for t in 1..=params.iterations {
        state.step()?;
        if let Some(s) = stride {
            if t % s == 0 || t == params.iterations {
                trace.push(TracePoint {
                    iteration: t,
                    best: state.population.best_value(),
                });
            }
        }
    }
    let best = state.population.best().clone();
    drop(state);
    Ok(RunRecord {
        algorithm: Algorithm::Gsemo,
        seed: Some(params.seed),
        iterations: params.iterations,
        oracle_calls: counter.calls() - start,
        best_value: best.value.f1.value().expect("archive members are feasible"),
        best_solution: best.solution,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::WeightedGraph;
    use crate::rng::rng_from_seed;
    use crate::Fitness;

    fn member(elements: &[usize], n: usize, f1: f64) -> Member {
        let solution = Solution::from_elements(n, elements.iter().copied());
        let value = BiValue::feasible(f1, solution.cardinality());
        Member { solution, value }
    }

    #[test]
    fn survival_examples() {
        let p = Population::singleton(member(&[], 3, 0.0));
        let p = survival_update(&p, member(&[1], 3, 0.8));
        assert_eq!(p.len(), 2);

        let p = survival_update(&Population::singleton(member(&[], 3, 0.0)), member(&[0], 3, 0.5));
        let p = survival_update(&p, member(&[1], 3, 0.8));
        assert_eq!(p.len(), 2);
        assert!(p.members().iter().any(|m| m.solution.to_vec() == [1]));
        assert!(p.members().iter().any(|m| m.solution.is_empty()));

        let inf = Member {
            solution: Solution::from_elements(3, [0, 1]),
            value: BiValue::infeasible(2),
        };
        assert_eq!(survival_update(&p, inf), p);
    }

    #[test]
    fn equal_value_replaces_incumbent() {
        let p = Population::singleton(member(&[], 3, 0.0));
        let p = survival_update(&p, member(&[0], 3, 0.5));
        let p = survival_update(&p, member(&[2], 3, 0.5));
        assert_eq!(p.len(), 2);
        assert!(p.members().iter().any(|m| m.solution.to_vec() == [2]));
    }

    #[test]
    fn best_prefers_smaller_on_ties() {
        let mut p = Population::singleton(member(&[], 4, 1.0));
        p.members.push(member(&[0, 1], 4, 1.0));
        assert!(p.best().solution.is_empty());
        p.members.push(member(&[2], 4, 2.0));
        assert_eq!(p.best().value.f1, Fitness::Finite(2.0));
    }

    #[test]
    fn mutation_leaves_parent_untouched() {
        let x = Solution::from_elements(5, [0, 3]);
        let snapshot = x.clone();
        let mut rng = rng_from_seed(1);
        for _ in 0..100 {
            let _ = mutate(&x, &mut rng);
        }
        assert_eq!(x, snapshot);
    }

    #[test]
    fn zero_iterations_return_empty_set() {
        let g = WeightedGraph::new(3, [(0, 1, 0.5), (1, 2, 0.3)]).unwrap();
        let m = PartitionMatroid::new(vec![0, 0, 1], vec![1, 1]).unwrap();
        let mut c = OracleCounter::new();
        let params = GsemoParams {
            iterations: 0,
            seed: 9,
            trace_stride: None,
        };
        let r = gsemo(&g, &m, &params, &mut c).unwrap();
        assert!(r.best_solution.is_empty());
        assert_eq!(r.best_value, 0.0);
        assert_eq!(r.oracle_calls, 1);
    }
}
