//! Coupled fractional relaxation system
//!
//! ```text
//! ∂_t^α (U - a) + η₁ U - μ₁ V = F
//! ∂_t^β (V - b) - μ₂ U + η₂ V = G
//! ```
//!
//! solved by Picard iteration on its Volterra form, plus the Laplace-domain
//! machinery for the special case `a = 1`, `b = F = G = 0`, `η₁ = η₂ = c₁`,
//! `μ₁ = μ₂ = c₂`.

mod laplace;
mod picard;
mod poles;

use std::fmt;
use std::sync::Arc;

pub use laplace::{branch_cut_invert, im_parts, q_of_r, BranchCutInverter, LaplaceSymbol};
pub use picard::{picard_monotonicity, picard_solve, OdePath, PicardOptions};
pub use poles::{count_zeros, find_poles, find_zeros, Rect};

use crate::error::{Error, Result};

/// A source term `F(t)` or `G(t)`.
#[derive(Clone)]
pub struct Forcing(Arc<dyn Fn(f64) -> f64 + Send + Sync>);

impl Forcing {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.0)(t)
    }
}

impl fmt::Debug for Forcing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Forcing(..)")
    }
}

/// Coefficients and data of the two-component fractional ODE system.
#[derive(Debug, Clone)]
pub struct OdeSpec {
    pub alpha: f64,
    pub beta: f64,
    pub a: f64,
    pub b: f64,
    pub eta1: f64,
    pub eta2: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub f: Option<Forcing>,
    pub g: Option<Forcing>,
}

impl OdeSpec {
    /// The special system with `a = 1`, `b = 0`, no sources, self-damping
    /// `c₁` and coupling `c₂`.
    pub fn relaxation(alpha: f64, beta: f64, c1: f64, c2: f64) -> Self {
        Self {
            alpha,
            beta,
            a: 1.0,
            b: 0.0,
            eta1: c1,
            eta2: c1,
            mu1: c2,
            mu2: c2,
            f: None,
            g: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            problems.push(format!("alpha must lie in (0, 1], got {}", self.alpha));
        }
        if !(self.beta > 0.0 && self.beta <= self.alpha) {
            problems.push(format!("beta must lie in (0, alpha], got {}", self.beta));
        }
        if !(self.eta1 >= 0.0 && self.eta2 >= 0.0) {
            problems.push(format!("eta1, eta2 must be >= 0, got {}, {}", self.eta1, self.eta2));
        }
        for (name, v) in [("a", self.a), ("b", self.b), ("mu1", self.mu1), ("mu2", self.mu2)] {
            if !v.is_finite() {
                problems.push(format!("{name} must be finite, got {v}"));
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Domain(problems.join("; ")))
        }
    }

    /// True when the data satisfy the hypotheses of the maximum principle
    /// (sources are checked only at the supplied sample times).
    pub fn is_nonnegative(&self, sample_times: &[f64]) -> bool {
        let coeffs = [self.a, self.b, self.eta1, self.eta2, self.mu1, self.mu2];
        let src_ok = |s: &Option<Forcing>| {
            s.as_ref()
                .is_none_or(|s| sample_times.iter().all(|&t| s.eval(t) >= 0.0))
        };
        coeffs.iter().all(|&c| c >= 0.0) && src_ok(&self.f) && src_ok(&self.g)
    }
}

/// Sufficient condition `κ₀ / C_Ω² > max(sup|c₁₂|, sup|c₂₁|)` for the
/// long-time decay theorem.
pub fn check_decay_assumption(kappa0: f64, c_omega: f64, c12_sup: f64, c21_sup: f64) -> bool {
    kappa0 / (c_omega * c_omega) > c12_sup.max(c21_sup)
}

/// Optimal Poincaré constant on the interval `(0, L)`.
pub fn poincare_constant(length: f64) -> f64 {
    length / std::f64::consts::PI
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decay_assumption_examples() {
        assert!(!check_decay_assumption(1.0, 1.0, 1.0, 1.0));
        assert!(check_decay_assumption(1.0, 1.0, 0.5, 0.5));
        let c = poincare_constant(std::f64::consts::PI);
        assert!((c - 1.0).abs() < 1e-15);
        assert!(!check_decay_assumption(1.0, c, 1.0, 1.0));
    }

    #[test]
    fn spec_validation_collects_problems() {
        let mut s = OdeSpec::relaxation(1.2, 1.5, -1.0, 1.0);
        s.a = f64::NAN;
        let msg = s.validate().unwrap_err().to_string();
        assert!(msg.contains("alpha") && msg.contains("beta") && msg.contains("eta1") && msg.contains("a must"));
        assert!(OdeSpec::relaxation(0.9, 0.5, 2.0, 1.0).validate().is_ok());
    }

    #[test]
    fn nonnegativity_check_samples_sources() {
        let mut s = OdeSpec::relaxation(0.9, 0.5, 2.0, 1.0);
        assert!(s.is_nonnegative(&[0.0, 1.0]));
        s.f = Some(Forcing::new(|t| 1.0 - t));
        assert!(!s.is_nonnegative(&[0.0, 2.0]));
    }
}
