use crate::error::{Error, Result};

/// L1 weights `b^j = (j+1)^{1-γ} - j^{1-γ}` for `j = 0..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct L1Weights {
    pub gamma: f64,
    pub b: Vec<f64>,
}

impl L1Weights {
    /// `b^m - b^{m+1}` for `m = 0..n`, the history coefficients of the scheme.
    pub fn differences(&self) -> Vec<f64> {
        self.b.windows(2).map(|w| w[0] - w[1]).collect()
    }
}

/// Weights of the L1 discretization of the Caputo derivative of order `gamma`.
pub fn l1_weights(gamma: f64, n: usize) -> Result<L1Weights> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::Domain(format!("L1 order must lie in (0, 1], got {gamma}")));
    }
    let e = 1.0 - gamma;
    let b = (0..=n)
        .map(|j| {
            if j == 0 {
                1.0
            } else if e == 0.0 {
                0.0
            } else {
                // j^e ((1 + 1/j)^e - 1) without cancellation
                let jf = j as f64;
                jf.powf(e) * (e * (1.0 / jf).ln_1p()).exp_m1()
            }
        })
        .collect();
    Ok(L1Weights { gamma, b })
}
