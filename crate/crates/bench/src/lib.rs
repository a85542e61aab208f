//! Shared fixtures for the benchmarks.

use std::sync::Arc;

use qnk::contfrac::{self, Ncf, Slope};
use qnk::{LatticeParams, ThetaSpace, ThetaSpaceParams, C64};

/// Slopes covering `g = 1`, all-threes, all-twos and mixed continued fractions.
pub const SLOPES: [(i64, i64); 5] = [(3, 1), (5, 2), (8, 3), (7, 5), (13, 5)];

pub fn ncf(n: i64, k: i64) -> Ncf {
    contfrac::expand(&Slope::new(n, k).expect("benchmark slopes are coprime"))
}

pub fn lattice() -> LatticeParams {
    LatticeParams::new(C64::new(0.1, 0.8)).expect("Im η > 0")
}

pub fn space(n: i64, k: i64) -> Arc<ThetaSpace> {
    let params = ThetaSpaceParams::new(ncf(n, k), lattice()).expect("valid parameters");
    Arc::new(ThetaSpace::new(params).expect("space builds"))
}

/// A fixed point of `ℂ^g` inside the fundamental strip.
pub fn point(g: usize) -> Vec<C64> {
    (0..g).map(|i| C64::new(0.13 + 0.17 * i as f64, 0.05 - 0.03 * i as f64)).collect()
}
