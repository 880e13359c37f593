//! Set-function oracles.

use crate::pareto::check_value;
use crate::{Error, OracleCounter, Result, Solution};

mod cover;
mod graph;
mod modular;

pub use cover::WeightedCoverage;
pub use graph::{Edge, WeightedGraph};
pub use modular::ModularFunction;

/// A black-box set function `f: 2^V -> R+` over `V = {0, .., n-1}`.
pub trait SetFunction {
    fn ground_size(&self) -> usize;

    fn value(&self, x: &Solution) -> f64;

    /// `f(x Δ flips)` given `value_x = f(x)`, where `flips` lists distinct
    /// elements whose membership is toggled.
    ///
    /// Oracles with cheap local updates override this; it is still one
    /// logical evaluation for call accounting.
    fn value_after_flips(&self, x: &Solution, value_x: f64, flips: &[usize]) -> f64 {
        let _ = value_x;
        let mut y = x.clone();
        for &e in flips {
            y.flip(e);
        }
        self.value(&y)
    }
}

impl<F: SetFunction + ?Sized> SetFunction for &F {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }

    fn value(&self, x: &Solution) -> f64 {
        (**self).value(x)
    }

    fn value_after_flips(&self, x: &Solution, value_x: f64, flips: &[usize]) -> f64 {
        (**self).value_after_flips(x, value_x, flips)
    }
}

/// Adapts a closure into a [`SetFunction`].
#[derive(Clone)]
pub struct FnSetFunction<F> {
    n: usize,
    f: F,
}

impl<F: Fn(&Solution) -> f64> FnSetFunction<F> {
    pub fn new(n: usize, f: F) -> Self {
        FnSetFunction { n, f }
    }
}

impl<F: Fn(&Solution) -> f64> SetFunction for FnSetFunction<F> {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn value(&self, x: &Solution) -> f64 {
        (self.f)(x)
    }
}

/// `f(x ∪ {v}) - f(x)`, charging two oracle calls.
pub fn marginal_gain<F: SetFunction + ?Sized>(
    f: &F,
    x: &Solution,
    v: usize,
    counter: &mut OracleCounter,
) -> Result<f64> {
    if x.contains(v) {
        return Err(Error::ElementPresent(v));
    }
    counter.charge();
    let base = check_value(f.value(x))?;
    marginal_gain_from(f, x, base, v, counter)
}

/// Like [`marginal_gain`] with `f(x)` already known; charges one call.
pub fn marginal_gain_from<F: SetFunction + ?Sized>(
    f: &F,
    x: &Solution,
    value_x: f64,
    v: usize,
    counter: &mut OracleCounter,
) -> Result<f64> {
    if x.contains(v) {
        return Err(Error::ElementPresent(v));
    }
    counter.charge();
    let with = check_value(f.value_after_flips(x, value_x, &[v]))?;
    Ok(with - value_x)
}
