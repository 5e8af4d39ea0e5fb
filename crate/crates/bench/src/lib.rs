//! Fixtures shared by the kernel benchmarks.

use std::f64::consts::PI;

use subdiff_core::subdiff_fd::{BandedMatrix, Grid, PairCase, SystemSpec};

/// The coupled pair with orders `(0.9, 0.5)` and both initial data nonzero.
pub fn pair() -> SystemSpec {
    SystemSpec::coupled_pair(0.9, 0.5, PairCase::BothNonzero)
}

/// Desk-scale spatial grid with `steps` steps of `0.25`.
pub fn grid(steps: usize) -> Grid {
    Grid::new(PI, 128, 0.25 * steps as f64, steps).expect("valid grid")
}

/// Diagonally dominant band matrix of order `n` with `k` sub- and super-diagonals.
pub fn band_matrix(n: usize, k: usize) -> BandedMatrix {
    let mut m = BandedMatrix::zeros(n, k, k);
    for r in 0..n {
        let lo = r.saturating_sub(k);
        let hi = (r + k).min(n - 1);
        for c in lo..=hi {
            let v = if r == c { 4.0 * k as f64 + 1.0 } else { -1.0 / (1.0 + (r + c) as f64 % 3.0) };
            m.set(r, c, v);
        }
    }
    m
}
