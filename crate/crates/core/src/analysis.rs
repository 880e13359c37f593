//! Exhaustive evaluators for the structural quantities behind the
//! approximation guarantees, plus the guarantees themselves.
//!
//! Everything here enumerates `2^n` subsets and refuses ground sets above a
//! per-routine limit.

use alloc::vec::Vec;

use crate::{Error, PartitionMatroid, Result, SetFunction, Solution};

/// Absolute tolerance for definitional inequalities.
pub const TOLERANCE: f64 = 1e-9;

pub const OPT_LIMIT: usize = 24;
pub const EPSILON_LIMIT: usize = 20;
pub const GAMMA_LIMIT: usize = 16;
pub const SUBMODULAR_LIMIT: usize = 12;

fn guard(routine: &'static str, n: usize, limit: usize) -> Result<()> {
    if n > limit {
        Err(Error::TooLarge { routine, n, limit })
    } else {
        Ok(())
    }
}

/// `f` tabulated on every subset, indexed by bit mask.
pub struct ValueTable {
    n: usize,
    values: Vec<f64>,
}

impl ValueTable {
    pub fn new<F: SetFunction + ?Sized>(f: &F, limit: usize, routine: &'static str) -> Result<Self> {
        let n = f.ground_size();
        guard(routine, n, limit)?;
        let values = (0..1u64 << n)
            .map(|mask| f.value(&Solution::from_mask(n, mask)))
            .collect();
        Ok(ValueTable { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, mask: u64) -> f64 {
        self.values[mask as usize]
    }
}

/// A feasible maximizer; ties go to the smaller set, then to the smaller bit mask.
pub fn brute_force_opt<F: SetFunction + ?Sized>(
    f: &F,
    m: &PartitionMatroid,
) -> Result<(Solution, f64)> {
    let n = f.ground_size();
    guard("brute_force_opt", n, OPT_LIMIT)?;
    let mut best: Option<(u64, f64)> = None;
    for mask in 0..1u64 << n {
        let x = Solution::from_mask(n, mask);
        if !m.is_feasible(&x) {
            continue;
        }
        let v = f.value(&x);
        let better = match best {
            None => true,
            Some((bm, bv)) => v > bv || (v == bv && mask.count_ones() < bm.count_ones()),
        };
        if better {
            best = Some((mask, v));
        }
    }
    let (mask, v) = best.expect("the empty set is always feasible");
    Ok((Solution::from_mask(n, mask), v))
}

/// `ε_j = max_{|X| < j, v ∈ V} f(X \ {v}) - f(X)`, with `ε_0 = 0`.
pub fn epsilon_j<F: SetFunction + ?Sized>(f: &F, j: usize) -> Result<f64> {
    let table = ValueTable::new(f, EPSILON_LIMIT, "epsilon_j")?;
    Ok(epsilon_from_table(&table, j))
}

pub fn epsilon_from_table(table: &ValueTable, j: usize) -> f64 {
    if j == 0 {
        return 0.0;
    }
    let mut eps = 0.0f64;
    for mask in 0..1u64 << table.n() {
        if mask.count_ones() as usize >= j {
            continue;
        }
        let fx = table.get(mask);
        let mut rest = mask;
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            rest ^= bit;
            eps = eps.max(table.get(mask ^ bit) - fx);
        }
    }
    eps
}

/// `γ_{i,j} = min Σ_{v∈L}[f(X+v) - f(X)] / [f(X∪L) - f(X)]` over `|X| < i`,
/// `|L| <= j`, `X ∩ L = ∅`, with `γ_{0,j} = γ_{1,j}`.
///
/// Pairs whose denominator is within [`TOLERANCE`] of zero are skipped. If no
/// pair remains the result is `f64::INFINITY`.
pub fn gamma_ij<F: SetFunction + ?Sized>(f: &F, i: usize, j: usize) -> Result<f64> {
    let table = ValueTable::new(f, GAMMA_LIMIT, "gamma_ij")?;
    Ok(gamma_from_table(&table, i, j))
}

pub fn gamma_from_table(table: &ValueTable, i: usize, j: usize) -> f64 {
    let n = table.n();
    let i = i.max(1);
    let full = (1u64 << n) - 1;
    let mut gamma = f64::INFINITY;
    let mut gains = alloc::vec![0.0f64; n];
    for x in 0..1u64 << n {
        if x.count_ones() as usize >= i {
            continue;
        }
        let fx = table.get(x);
        for (v, g) in gains.iter_mut().enumerate() {
            *g = table.get(x | 1 << v) - fx;
        }
        let rest = full & !x;
        let mut l = rest;
        while l != 0 {
            if l.count_ones() as usize <= j {
                let den = table.get(x | l) - fx;
                if den.abs() > TOLERANCE {
                    let mut num = 0.0;
                    let mut bits = l;
                    while bits != 0 {
                        num += gains[bits.trailing_zeros() as usize];
                        bits &= bits - 1;
                    }
                    gamma = gamma.min(num / den);
                }
            }
            l = (l - 1) & rest;
        }
    }
    if gamma == f64::INFINITY {
        log::warn!("gamma_ij({i}, {j}): every candidate ratio has a zero denominator");
    }
    gamma
}

/// Diminishing returns: `f(X+v) - f(X) >= f(Y+v) - f(Y) - tol` for all
/// `X ⊆ Y`, `v ∉ Y`.
pub fn check_submodular<F: SetFunction + ?Sized>(f: &F) -> Result<bool> {
    let table = ValueTable::new(f, SUBMODULAR_LIMIT, "check_submodular")?;
    let n = table.n();
    let full = (1u64 << n) - 1;
    for y in 0..1u64 << n {
        let outside = full & !y;
        let mut x = y;
        loop {
            let mut vs = outside;
            while vs != 0 {
                let bit = vs & vs.wrapping_neg();
                vs ^= bit;
                let gx = table.get(x | bit) - table.get(x);
                let gy = table.get(y | bit) - table.get(y);
                if gx < gy - TOLERANCE {
                    return Ok(false);
                }
            }
            if x == 0 {
                break;
            }
            x = (x - 1) & y;
        }
    }
    Ok(true)
}

/// `f(X) <= f(X + v) + tol` for every `X` and `v ∉ X`.
pub fn is_monotone<F: SetFunction + ?Sized>(f: &F) -> Result<bool> {
    let table = ValueTable::new(f, EPSILON_LIMIT, "is_monotone")?;
    Ok(monotone_from_table(&table))
}

pub fn monotone_from_table(table: &ValueTable) -> bool {
    let n = table.n();
    (0..1u64 << n).all(|x| {
        (0..n)
            .filter(|v| x >> v & 1 == 0)
            .all(|v| table.get(x) <= table.get(x | 1 << v) + TOLERANCE)
    })
}

/// `(1 - e^{-d̄/d}) [opt - (d̄ - 1) ε]`, clamped at zero. Requires `1 <= d̄ <= d`.
pub fn theorem1_bound(opt: f64, eps: f64, d: usize, dbar: usize) -> f64 {
    assert!(dbar >= 1 && dbar <= d, "need 1 <= dbar <= d");
    let factor = 1.0 - libm::exp(-(dbar as f64) / d as f64);
    (factor * (opt - (dbar as f64 - 1.0) * eps)).max(0.0)
}

/// `(1 - e^{-γ d̄/d}) opt`. Requires `1 <= d̄ <= d`; callers cap `γ` at 1.
pub fn theorem2_bound(opt: f64, gamma: f64, d: usize, dbar: usize) -> f64 {
    assert!(dbar >= 1 && dbar <= d, "need 1 <= dbar <= d");
    (1.0 - libm::exp(-gamma * dbar as f64 / d as f64)) * opt
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub opt_value: f64,
    pub opt_solution: Solution,
    /// `ε_{d + d̄}`.
    pub epsilon_term: f64,
    /// `γ_{d̄, d}` as computed (uncapped); `None` when `f` is not monotone or `n` is
    /// above [`GAMMA_LIMIT`].
    pub gamma_term: Option<f64>,
    pub monotone: bool,
    /// `None` above [`SUBMODULAR_LIMIT`].
    pub submodular: Option<bool>,
    pub theorem1_bound: f64,
    pub theorem2_bound: Option<f64>,
}

impl BoundReport {
    pub fn compute<F: SetFunction + ?Sized>(f: &F, m: &PartitionMatroid) -> Result<Self> {
        let (opt_solution, opt_value) = brute_force_opt(f, m)?;
        let table = ValueTable::new(f, EPSILON_LIMIT, "bound report")?;
        let d = m.capacity();
        let dbar = m.min_threshold();
        let epsilon_term = epsilon_from_table(&table, d + dbar);
        let monotone = monotone_from_table(&table);
        let gamma_term = (monotone && table.n() <= GAMMA_LIMIT)
            .then(|| gamma_from_table(&table, dbar, d));
        let submodular = if table.n() <= SUBMODULAR_LIMIT {
            Some(check_submodular(f)?)
        } else {
            None
        };
        Ok(BoundReport {
            opt_value,
            opt_solution,
            epsilon_term,
            gamma_term,
            monotone,
            submodular,
            theorem1_bound: theorem1_bound(opt_value, epsilon_term, d, dbar),
            theorem2_bound: gamma_term.map(|g| theorem2_bound(opt_value, g.min(1.0), d, dbar)),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::{FnSetFunction, ModularFunction, WeightedGraph};

    fn g3() -> WeightedGraph {
        WeightedGraph::new(3, [(0, 1, 0.5), (1, 2, 0.3)]).unwrap()
    }

    #[test]
    fn opt_examples() {
        let m = PartitionMatroid::new(alloc::vec![0, 0, 1], alloc::vec![1, 1]).unwrap();
        let (x, v) = brute_force_opt(&g3(), &m).unwrap();
        assert!((v - 0.8).abs() < 1e-12);
        assert_eq!(x.to_vec(), [1]);

        let zero = FnSetFunction::new(4, |_: &Solution| 0.0);
        let (x, v) = brute_force_opt(&zero, &PartitionMatroid::cardinality(4, 2).unwrap()).unwrap();
        assert_eq!((x.cardinality(), v), (0, 0.0));

        let f = ModularFunction::new(alloc::vec![0.5, 0.2, 0.9]).unwrap();
        let (x, v) = brute_force_opt(&f, &PartitionMatroid::cardinality(3, 2).unwrap()).unwrap();
        assert_eq!(x.to_vec(), [0, 2]);
        assert!((v - 1.4).abs() < 1e-12);
    }

    #[test]
    fn epsilon_examples() {
        let g = g3();
        assert_eq!(epsilon_j(&g, 0).unwrap(), 0.0);
        assert_eq!(epsilon_j(&g, 1).unwrap(), 0.0);
        assert_eq!(epsilon_j(&g, 2).unwrap(), 0.0);
        assert!((epsilon_j(&g, 3).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn supermodular_square_is_rejected() {
        let f = FnSetFunction::new(4, |x: &Solution| (x.cardinality() * x.cardinality()) as f64);
        assert!(!check_submodular(&f).unwrap());
        assert!(check_submodular(&ModularFunction::new(alloc::vec![0.3, 0.1, 0.7]).unwrap()).unwrap());
    }

    #[test]
    fn bounds_examples() {
        let e = 1.0 - libm::exp(-1.0);
        assert!((theorem1_bound(1.0, 0.0, 4, 4) - e).abs() < 1e-12);
        assert!((theorem1_bound(1.0, 0.0, 4, 4) - 0.63212).abs() < 1e-5);
        assert!((theorem1_bound(2.0, 7.0, 5, 1) - (1.0 - libm::exp(-0.2)) * 2.0).abs() < 1e-12);
        assert_eq!(theorem1_bound(0.0, 0.3, 3, 2), 0.0);
        assert!((theorem2_bound(1.0, 1.0, 3, 3) - 0.63212).abs() < 1e-5);
        assert_eq!(theorem2_bound(5.0, 0.0, 3, 2), 0.0);
        assert!((theorem2_bound(1.0, 1.0, 6, 3) - 0.39347).abs() < 1e-5);
    }

    #[test]
    fn guards_refuse_large_ground_sets() {
        let f = FnSetFunction::new(25, |_: &Solution| 0.0);
        let m = PartitionMatroid::cardinality(25, 3).unwrap();
        assert!(matches!(brute_force_opt(&f, &m), Err(Error::TooLarge { limit: 24, .. })));
        let f = FnSetFunction::new(21, |_: &Solution| 0.0);
        assert!(matches!(epsilon_j(&f, 2), Err(Error::TooLarge { .. })));
        let f = FnSetFunction::new(17, |_: &Solution| 0.0);
        assert!(matches!(gamma_ij(&f, 2, 2), Err(Error::TooLarge { .. })));
        let f = FnSetFunction::new(13, |_: &Solution| 0.0);
        assert!(matches!(check_submodular(&f), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn gamma_with_no_informative_pair_is_infinite() {
        let zero = FnSetFunction::new(3, |_: &Solution| 0.0);
        assert_eq!(gamma_ij(&zero, 2, 2).unwrap(), f64::INFINITY);
    }
}
