use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result, Solution};

/// Partition of the ground set into `k` blocks `B_i`, each with a threshold `d_i`.
///
/// A set `X` is feasible iff `|X ∩ B_i| <= d_i` for every block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionMatroid {
    assignment: Vec<usize>,
    thresholds: Vec<usize>,
    block_sizes: Vec<usize>,
}

impl PartitionMatroid {
    /// Validates that every block index is `< k`, every block is non-empty and
    /// `1 <= d_i <= |B_i|`.
    pub fn new(assignment: Vec<usize>, thresholds: Vec<usize>) -> Result<Self> {
        let k = thresholds.len();
        if k == 0 {
            return Err(Error::InvalidMatroid("at least one block is required".into()));
        }
        let mut block_sizes = vec![0usize; k];
        for (e, &b) in assignment.iter().enumerate() {
            if b >= k {
                return Err(Error::InvalidMatroid(format!(
                    "element {e} assigned to block {b}, but k = {k}"
                )));
            }
            block_sizes[b] += 1;
        }
        for (i, (&size, &d)) in block_sizes.iter().zip(&thresholds).enumerate() {
            if size == 0 {
                return Err(Error::InvalidMatroid(format!("block {i} is empty")));
            }
            if d == 0 || d > size {
                return Err(Error::InvalidMatroid(format!(
                    "threshold of block {i} is {d}, must lie in [1, {size}]"
                )));
            }
        }
        Ok(PartitionMatroid {
            assignment,
            thresholds,
            block_sizes,
        })
    }

    /// A single block holding every element: the cardinality constraint `|X| <= d`.
    pub fn cardinality(n: usize, d: usize) -> Result<Self> {
        PartitionMatroid::new(vec![0; n], vec![d])
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    pub fn k(&self) -> usize {
        self.thresholds.len()
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn thresholds(&self) -> &[usize] {
        &self.thresholds
    }

    #[inline]
    pub fn block_of(&self, e: usize) -> usize {
        self.assignment[e]
    }

    pub fn block_size(&self, block: usize) -> usize {
        self.block_sizes[block]
    }

    /// `d = Σ d_i`, an upper bound on the size of any feasible set.
    pub fn capacity(&self) -> usize {
        self.thresholds.iter().sum()
    }

    /// `d̄ = min_i d_i`.
    pub fn min_threshold(&self) -> usize {
        self.thresholds.iter().copied().min().unwrap_or(0)
    }

    pub fn block_counts(&self, x: &Solution) -> Vec<usize> {
        self.check_len(x);
        let mut counts = vec![0; self.k()];
        for e in x.iter() {
            counts[self.assignment[e]] += 1;
        }
        counts
    }

    pub fn is_feasible(&self, x: &Solution) -> bool {
        self.check_len(x);
        if x.cardinality() > self.capacity() {
            return false;
        }
        if self.k() == 1 {
            return x.cardinality() <= self.thresholds[0];
        }
        self.block_counts(x)
            .iter()
            .zip(&self.thresholds)
            .all(|(c, d)| c <= d)
    }

    fn check_len(&self, x: &Solution) {
        assert_eq!(
            x.len(),
            self.n(),
            "solution length does not match the matroid's ground set"
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_blocks() -> PartitionMatroid {
        PartitionMatroid::new(vec![0, 0, 1], vec![1, 1]).unwrap()
    }

    #[test]
    fn feasibility_examples() {
        let m = two_blocks();
        assert!(m.is_feasible(&Solution::from_elements(3, [0, 2])));
        assert!(!m.is_feasible(&Solution::from_elements(3, [0, 1])));
        assert!(m.is_feasible(&Solution::empty(3)));
    }

    #[test]
    fn derived_quantities() {
        let m = PartitionMatroid::new(vec![0, 1, 1, 2, 2, 2], vec![1, 2, 2]).unwrap();
        assert_eq!(m.capacity(), 5);
        assert_eq!(m.min_threshold(), 1);
        assert!(m.min_threshold() * m.k() <= m.capacity());
        assert_eq!(m.block_size(2), 3);
    }

    #[test]
    fn rejects_invalid() {
        assert!(PartitionMatroid::new(vec![0, 2], vec![1, 1]).is_err());
        assert!(PartitionMatroid::new(vec![0, 0], vec![1, 1]).is_err());
        assert!(PartitionMatroid::new(vec![0, 0], vec![3]).is_err());
        assert!(PartitionMatroid::new(vec![0, 0], vec![0]).is_err());
        assert!(PartitionMatroid::new(vec![], vec![]).is_err());
    }

    #[test]
    #[should_panic(expected = "length")]
    fn length_mismatch_is_a_bug() {
        two_blocks().is_feasible(&Solution::empty(4));
    }
}
