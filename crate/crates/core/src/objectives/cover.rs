use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::SetFunction;
use crate::pareto::check_value;
use crate::{Error, Result, Solution};

/// Weighted coverage: element `i` covers a subset of items, and `f(X)` is the
/// total weight of items covered by at least one element of `X`. Monotone and
/// submodular with `f(∅) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedCoverage {
    covers: Vec<Vec<usize>>,
    item_weights: Vec<f64>,
}

impl WeightedCoverage {
    pub fn new(covers: Vec<Vec<usize>>, item_weights: Vec<f64>) -> Result<Self> {
        for &w in &item_weights {
            check_value(w)?;
        }
        for (e, items) in covers.iter().enumerate() {
            if let Some(&bad) = items.iter().find(|&&it| it >= item_weights.len()) {
                return Err(Error::InvalidInstance(format!(
                    "element {e} covers item {bad}, but there are {} items",
                    item_weights.len()
                )));
            }
        }
        Ok(WeightedCoverage {
            covers,
            item_weights,
        })
    }
}

impl SetFunction for WeightedCoverage {
    fn ground_size(&self) -> usize {
        self.covers.len()
    }

    fn value(&self, x: &Solution) -> f64 {
        let mut covered = vec![false; self.item_weights.len()];
        for e in x.iter() {
            for &it in &self.covers[e] {
                covered[it] = true;
            }
        }
        covered
            .iter()
            .zip(&self.item_weights)
            .filter(|(c, _)| **c)
            .fold(0.0, |acc, (_, w)| acc + w)
    }
}
