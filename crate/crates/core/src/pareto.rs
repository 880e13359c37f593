use core::cmp::Ordering;

use crate::{Error, PartitionMatroid, Result, SetFunction, Solution};

/// First objective: the oracle value of a feasible solution, or negative
/// infinity for a solution violating a block threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Fitness {
    NegInfinity,
    Finite(f64),
}

impl Fitness {
    pub fn value(self) -> Option<f64> {
        match self {
            Fitness::Finite(v) => Some(v),
            Fitness::NegInfinity => None,
        }
    }

    pub fn is_feasible(self) -> bool {
        matches!(self, Fitness::Finite(_))
    }
}

impl PartialOrd for Fitness {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Fitness::NegInfinity, Fitness::NegInfinity) => Some(Ordering::Equal),
            (Fitness::NegInfinity, Fitness::Finite(_)) => Some(Ordering::Less),
            (Fitness::Finite(_), Fitness::NegInfinity) => Some(Ordering::Greater),
            (Fitness::Finite(a), Fitness::Finite(b)) => a.partial_cmp(b),
        }
    }
}

/// The pair `(f1, f2)` maximized by GSEMO, with `f2 = -|X|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiValue {
    pub f1: Fitness,
    pub f2: i64,
}

impl BiValue {
    pub fn feasible(value: f64, cardinality: usize) -> Self {
        BiValue {
            f1: Fitness::Finite(value),
            f2: -(cardinality as i64),
        }
    }

    pub fn infeasible(cardinality: usize) -> Self {
        BiValue {
            f1: Fitness::NegInfinity,
            f2: -(cardinality as i64),
        }
    }

    pub fn weakly_dominates(&self, other: &BiValue) -> bool {
        self.f1 >= other.f1 && self.f2 >= other.f2
    }

    pub fn strictly_dominates(&self, other: &BiValue) -> bool {
        dominance(self, other) == Dominance::Strict
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dominance {
    /// `a ⪰ b` and `a` is better in at least one objective.
    Strict,
    /// `a ⪰ b` with both objectives equal.
    Weak,
    NotDominating,
}

pub fn dominance(a: &BiValue, b: &BiValue) -> Dominance {
    if !a.weakly_dominates(b) {
        Dominance::NotDominating
    } else if a.f1 > b.f1 || a.f2 > b.f2 {
        Dominance::Strict
    } else {
        Dominance::Weak
    }
}

/// Number of objective evaluations performed during one run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OracleCounter {
    calls: u64,
}

impl OracleCounter {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn charge(&mut self) {
        self.calls += 1;
    }

    pub fn calls(&self) -> u64 {
        self.calls
    }
}

pub(crate) fn check_value(v: f64) -> Result<f64> {
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(Error::InvalidOracleValue(v))
    }
}

/// Evaluates `(f1, f2)` for `x`. Every call costs exactly one oracle call,
/// feasible or not; the oracle itself is skipped for infeasible `x`.
pub fn evaluate_bi<F: SetFunction + ?Sized>(
    f: &F,
    m: &PartitionMatroid,
    x: &Solution,
    counter: &mut OracleCounter,
) -> Result<BiValue> {
    counter.charge();
    if !m.is_feasible(x) {
        return Ok(BiValue::infeasible(x.cardinality()));
    }
    let v = check_value(f.value(x))?;
    Ok(BiValue::feasible(v, x.cardinality()))
}
