use alloc::vec::Vec;

use super::SetFunction;
use crate::pareto::check_value;
use crate::{Result, Solution};

/// `f(X) = Σ_{i ∈ X} w_i` with non-negative weights.
#[derive(Debug, Clone, PartialEq)]
pub struct ModularFunction {
    weights: Vec<f64>,
}

impl ModularFunction {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        for &w in &weights {
            check_value(w)?;
        }
        Ok(ModularFunction { weights })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

impl SetFunction for ModularFunction {
    fn ground_size(&self) -> usize {
        self.weights.len()
    }

    fn value(&self, x: &Solution) -> f64 {
        x.iter().fold(0.0, |acc, i| acc + self.weights[i])
    }

    fn value_after_flips(&self, x: &Solution, value_x: f64, flips: &[usize]) -> f64 {
        let v = flips.iter().fold(value_x, |acc, &e| {
            if x.contains(e) {
                acc - self.weights[e]
            } else {
                acc + self.weights[e]
            }
        });
        if v <= 0.0 && v > -1e-9 {
            0.0
        } else {
            v
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn incremental_updates_do_not_go_negative() {
        let f = ModularFunction::new(alloc::vec![0.5, 0.2, 0.9]).unwrap();
        let x = Solution::from_elements(3, [0, 1]);
        let v = f.value(&x);
        assert_eq!(f.value_after_flips(&x, v, &[0, 1]), 0.0);
        assert!((f.value_after_flips(&x, v, &[1, 2]) - 1.4).abs() < 1e-12);
        assert!(ModularFunction::new(alloc::vec![0.1, -0.1]).is_err());
    }
}
